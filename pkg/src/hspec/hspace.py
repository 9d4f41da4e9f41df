"""Quaternionic vectors, matrices, and their real/complex images.

The operator model is right-linear: a matrix acts on column vectors from
the left, scalars multiply vectors from the right, so T(v a) = (T v) a.
The inner product sums conj(x_a) * y_a and is therefore right-linear in
its second slot.  Left-linear operators need no parallel code path: a
left-linear action is obtained by applying the transposed matrix to a row
vector (see :func:`left_apply`).

Two faithful images are used throughout:

* ``complex_adjoint`` -- the 2n x 2n complex matrix [[A, B], [-conj(B),
  conj(A)]] from the splitting T = A + B j.  This is the workhorse for
  norms, inverses and eigenproblems.
* ``real_adjoint`` -- the 4n x 4n real matrix whose (i, j) block is the
  left-multiplication matrix of the entry T_ij.  The independent oracle
  does its elimination here.

A general real-linear ("quasi-linear") operator on H^n is not a quaternion
matrix, but it always splits into four right-linear components:
alpha(x) = sum_m (A_m x) e_m over the basis (1, i, j, k).  That splitting
is :func:`graded_decompose`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import GS_DROP_REL
from .errors import DimensionMismatchError, FormatError, PreconditionError
from .quaternion import (
    HAMILTON,
    Quaternion,
    qconj,
    qmul,
    to_real4,
)

__all__ = [
    "HVector",
    "HMatrix",
    "GradedDecomposition",
    "OperatorClassification",
    "SpanReport",
    "inner",
    "left_apply",
    "adjoint",
    "complex_adjoint",
    "real_adjoint",
    "from_complex_adjoint",
    "from_real_adjoint",
    "project_complex_adjoint",
    "to_complex_vector",
    "from_complex_vector",
    "to_real_vector",
    "from_real_vector",
    "op_norm",
    "classify",
    "gram_schmidt",
    "span_equal",
    "graded_decompose",
    "right_mult_matrix",
]

_L_BASIS = np.stack([to_real4(q) for q in
                     (Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1),
                      Quaternion(0, 0, 0, 1))])


def right_mult_matrix(q):
    """4x4 real matrix of x -> x*q on (w, x, y, z) components."""
    q = q.array if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
    # (x q)_c = sum_p HAMILTON[p, m, c] q_m x_p
    return np.einsum("pmc,m->cp", HAMILTON, q)


def _as_component_array(entries, expect_ndim):
    a = np.asarray(entries, dtype=float)
    if a.ndim != expect_ndim or a.shape[-1] != 4:
        raise FormatError(
            f"expected shape (..., 4) with ndim {expect_ndim}, got {a.shape}"
        )
    return a


class HVector:
    """Column vector with quaternion entries, stored as an (n, 4) array."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = _as_component_array(entries, 2).copy()
        a.flags.writeable = False
        self._a = a

    @classmethod
    def from_quaternions(cls, qs):
        return cls(np.stack([q.array for q in qs]))

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros((n, 4)))

    @property
    def array(self):
        return self._a

    @property
    def n(self):
        return self._a.shape[0]

    def entry(self, i):
        return Quaternion.from_array(self._a[i])

    def __add__(self, other):
        self._check(other)
        return HVector(self._a + other._a)

    def __sub__(self, other):
        self._check(other)
        return HVector(self._a - other._a)

    def __neg__(self):
        return HVector(-self._a)

    def _check(self, other):
        if not isinstance(other, HVector) or other.n != self.n:
            raise DimensionMismatchError("vector shapes differ")

    def right_mul(self, q):
        """v * q with the scalar on the right (the linear-structure action)."""
        q = q.array if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
        return HVector(qmul(self._a, q))

    def left_mul(self, q):
        q = q.array if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
        return HVector(qmul(q, self._a))

    def conj(self):
        return HVector(qconj(self._a))

    def norm(self):
        return float(np.sqrt(np.sum(self._a * self._a)))

    def __repr__(self):
        return f"HVector(n={self.n})"


def inner(x, y):
    """<x; y> = sum conj(x_a) y_a; right-linear in y."""
    if x.n != y.n:
        raise DimensionMismatchError("inner product needs equal lengths")
    s = qmul(qconj(x.array), y.array).sum(axis=0)
    return Quaternion.from_array(s)


class HMatrix:
    """Matrix with quaternion entries, stored as an (n, m, 4) array."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = _as_component_array(entries, 3).copy()
        a.flags.writeable = False
        self._a = a

    # ----- constructors -----------------------------------------------------
    @classmethod
    def from_quaternions(cls, rows):
        return cls(np.stack([[q.array for q in row] for row in rows]))

    @classmethod
    def zeros(cls, n, m=None):
        return cls(np.zeros((n, m if m is not None else n, 4)))

    @classmethod
    def identity(cls, n):
        a = np.zeros((n, n, 4))
        a[np.arange(n), np.arange(n), 0] = 1.0
        return cls(a)

    @classmethod
    def scalar(cls, n, q):
        """q * I: the matrix of left scalar multiplication by q."""
        q = q.array if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
        a = np.zeros((n, n, 4))
        a[np.arange(n), np.arange(n), :] = q
        return cls(a)

    @classmethod
    def diag(cls, qs):
        n = len(qs)
        a = np.zeros((n, n, 4))
        for i, q in enumerate(qs):
            a[i, i, :] = q.array if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
        return cls(a)

    @classmethod
    def from_complex(cls, c):
        """Embed a complex matrix into the (1, i) slice."""
        c = np.asarray(c, dtype=complex)
        a = np.zeros(c.shape + (4,))
        a[..., 0] = c.real
        a[..., 1] = c.imag
        return cls(a)

    @classmethod
    def from_real(cls, r):
        r = np.asarray(r, dtype=float)
        a = np.zeros(r.shape + (4,))
        a[..., 0] = r
        return cls(a)

    # ----- views ------------------------------------------------------------
    @property
    def array(self):
        return self._a

    @property
    def shape(self):
        return self._a.shape[:2]

    @property
    def n(self):
        return self._a.shape[0]

    def entry(self, i, j):
        return Quaternion.from_array(self._a[i, j])

    def __repr__(self):
        return f"HMatrix(shape={self.shape})"

    # ----- ring operations ----------------------------------------------------
    def _check_add(self, other):
        if not isinstance(other, HMatrix) or other.shape != self.shape:
            raise DimensionMismatchError("matrix shapes differ")

    def __add__(self, other):
        self._check_add(other)
        return HMatrix(self._a + other._a)

    def __sub__(self, other):
        self._check_add(other)
        return HMatrix(self._a - other._a)

    def __neg__(self):
        return HMatrix(-self._a)

    def __mul__(self, s):
        if isinstance(s, (int, float)):
            return HMatrix(self._a * float(s))
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, HMatrix):
            if self.shape[1] != other.shape[0]:
                raise DimensionMismatchError("inner dimensions differ")
            out = np.einsum("ipa,pkb,abc->ikc", self._a, other._a, HAMILTON,
                            optimize=True)
            return HMatrix(out)
        if isinstance(other, HVector):
            if self.shape[1] != other.n:
                raise DimensionMismatchError("inner dimensions differ")
            out = np.einsum("ipa,pb,abc->ic", self._a, other.array, HAMILTON,
                            optimize=True)
            return HVector(out)
        return NotImplemented

    def left_mul(self, q):
        """q * T, multiplying every entry by q from the left."""
        q = q.array if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
        return HMatrix(qmul(q, self._a))

    def right_mul(self, q):
        q = q.array if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
        return HMatrix(qmul(self._a, q))

    def conj(self):
        return HMatrix(qconj(self._a))

    def transpose(self):
        return HMatrix(np.swapaxes(self._a, 0, 1))

    def adjoint(self):
        """Conjugate transpose; the adjoint for the inner product above."""
        return HMatrix(np.swapaxes(qconj(self._a), 0, 1))

    @property
    def H(self):
        return self.adjoint()

    # ----- metrics -----------------------------------------------------------
    def norm_fro(self):
        return float(np.sqrt(np.sum(self._a * self._a)))

    def max_abs(self):
        from .quaternion import qabs

        if self._a.size == 0:
            return 0.0
        return float(np.max(qabs(self._a)))

    def distance(self, other):
        self._check_add(other)
        return (self - other).max_abs()

    def is_triangular(self, upper=True, tol=0.0):
        from .quaternion import qabs

        mags = qabs(self._a)
        scale = max(1.0, float(np.max(mags)))
        idx = np.tril_indices(self.n, k=-1) if upper else np.triu_indices(self.n, k=1)
        if self.shape[0] != self.shape[1]:
            return False
        off = mags[idx]
        return bool(np.all(off <= tol * scale))

    def diagonal(self):
        return [self.entry(i, i) for i in range(min(self.shape))]


def adjoint(t):
    return t.adjoint()


def left_apply(v, t):
    """Row action sum_i v_i T_ij: the left-linear companion of T.

    Scalars pulled out on the left stay on the left, so this is how a
    left-linear operator is realized without a second code path.
    """
    if v.n != t.shape[0]:
        raise DimensionMismatchError("inner dimensions differ")
    out = np.einsum("pa,pkb,abc->kc", v.array, t.array, HAMILTON, optimize=True)
    return HVector(out)


# ---------------------------------------------------------------------------
# complex and real images
# ---------------------------------------------------------------------------

def complex_adjoint(t):
    """2n x 2n complex image of T = A + B j as [[A, B], [-conj(B), conj(A)]].

    Multiplicative and *-preserving: the image of T.adjoint() is the
    conjugate transpose of the image of T.
    """
    a = t.array
    A = a[..., 0] + 1j * a[..., 1]
    B = a[..., 2] + 1j * a[..., 3]
    top = np.concatenate([A, B], axis=1)
    bot = np.concatenate([-np.conj(B), np.conj(A)], axis=1)
    return np.concatenate([top, bot], axis=0)


def from_complex_adjoint(c, tol=1e-9):
    """Invert :func:`complex_adjoint`, validating the block symmetry."""
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] % 2:
        raise FormatError("complex adjoint image must be square of even size")
    n = c.shape[0] // 2
    A = c[:n, :n]
    B = c[:n, n:]
    scale = max(1.0, float(np.max(np.abs(c))))
    resid = max(
        float(np.max(np.abs(c[n:, :n] + np.conj(B)))),
        float(np.max(np.abs(c[n:, n:] - np.conj(A)))),
    )
    if resid > tol * scale:
        raise PreconditionError(
            f"matrix is not in the image of complex_adjoint (residual {resid:.3e})"
        )
    a = np.stack([A.real, A.imag, B.real, B.imag], axis=-1)
    return HMatrix(a)


def project_complex_adjoint(c):
    """Nearest member of the image of :func:`complex_adjoint` (block average).

    Solving a structured linear system with an unstructured solver leaves
    noise outside the structured subspace; averaging the two block copies
    removes it exactly.  Use :func:`from_complex_adjoint` instead when the
    structure itself is the thing being checked.
    """
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] % 2:
        raise FormatError("complex adjoint image must be square of even size")
    n = c.shape[0] // 2
    A = 0.5 * (c[:n, :n] + np.conj(c[n:, n:]))
    B = 0.5 * (c[:n, n:] - np.conj(c[n:, :n]))
    return HMatrix(np.stack([A.real, A.imag, B.real, B.imag], axis=-1))


def real_adjoint(t):
    """4n x 4n real image; block (i, j) is left multiplication by T_ij."""
    a = t.array
    out = np.zeros((a.shape[0] * 4, a.shape[1] * 4))
    for m in range(4):
        out += np.kron(a[..., m], _L_BASIS[m])
    return out


def from_real_adjoint(r, tol=1e-9):
    """Invert :func:`real_adjoint`, validating every 4x4 block."""
    r = np.asarray(r, dtype=float)
    if r.ndim != 2 or r.shape[0] % 4 or r.shape[1] % 4:
        raise FormatError("real adjoint image must have dimensions divisible by 4")
    n, m = r.shape[0] // 4, r.shape[1] // 4
    blocks = r.reshape(n, 4, m, 4).swapaxes(1, 2)
    # first column of a left-multiplication block is the quaternion itself
    entries = blocks[..., :, 0].copy()
    rebuilt = np.einsum("ijm,mab->ijab", entries, _L_BASIS)
    scale = max(1.0, float(np.max(np.abs(r))))
    resid = float(np.max(np.abs(rebuilt - blocks)))
    if resid > tol * scale:
        raise PreconditionError(
            f"matrix is not in the image of real_adjoint (residual {resid:.3e})"
        )
    return HMatrix(entries)


def to_complex_vector(v):
    """Coordinates of v in the basis where matrices act as complex_adjoint."""
    a = v.array
    v1 = a[:, 0] + 1j * a[:, 1]
    v2 = a[:, 2] + 1j * a[:, 3]
    return np.concatenate([v1, -np.conj(v2)])


def from_complex_vector(w):
    w = np.asarray(w, dtype=complex)
    if w.ndim != 1 or w.shape[0] % 2:
        raise FormatError("complex vector image must have even length")
    n = w.shape[0] // 2
    v1 = w[:n]
    v2 = -np.conj(w[n:])
    return HVector(np.stack([v1.real, v1.imag, v2.real, v2.imag], axis=-1))


def to_real_vector(v):
    return v.array.reshape(-1).copy()


def from_real_vector(r):
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.shape[0] % 4:
        raise FormatError("real vector image must have length divisible by 4")
    return HVector(r.reshape(-1, 4))


def op_norm(t):
    """Operator norm: largest singular value of the complex image."""
    if min(t.shape) == 0:
        return 0.0
    s = np.linalg.svd(complex_adjoint(t), compute_uv=False)
    return float(s[0])


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorClassification:
    self_adjoint: bool
    normal: bool
    unitary: bool
    positive: bool
    residuals: dict

    def flags(self):
        return {
            "self_adjoint": self.self_adjoint,
            "normal": self.normal,
            "unitary": self.unitary,
            "positive": self.positive,
        }


def classify(t, tol=1e-9):
    """Algebraic classification from defining identities.

    Positivity is self-adjointness plus a nonnegative spectrum of the
    (Hermitian) complex image.
    """
    if t.shape[0] != t.shape[1]:
        raise PreconditionError("classification needs a square matrix")
    scale = max(1.0, op_norm(t))
    ts = t @ t.adjoint()
    st = t.adjoint() @ t
    ident = HMatrix.identity(t.n)
    r_sa = t.distance(t.adjoint())
    r_norm = ts.distance(st)
    r_uni = max(ts.distance(ident), st.distance(ident))
    self_adjoint = r_sa <= tol * scale
    normal = r_norm <= tol * scale * scale
    unitary = r_uni <= tol * scale * scale
    positive = False
    lam_min = None
    if self_adjoint:
        lam = np.linalg.eigvalsh(complex_adjoint(t))
        lam_min = float(lam[0])
        positive = lam_min >= -tol * scale
    return OperatorClassification(
        self_adjoint=self_adjoint,
        normal=normal,
        unitary=unitary,
        positive=positive,
        residuals={
            "self_adjoint": r_sa,
            "normal": r_norm,
            "unitary": r_uni,
            "min_eigenvalue": lam_min,
        },
    )


# ---------------------------------------------------------------------------
# Gram-Schmidt and spans
# ---------------------------------------------------------------------------

def gram_schmidt(vectors, drop_rel=GS_DROP_REL):
    """Orthonormalize with right-quaternion coefficients.

    Projection coefficients sit on the right of the basis vectors, which is
    what makes the sweep compatible with right-linearity.  Vectors whose
    residual drops below ``drop_rel`` times the largest input norm are
    discarded.
    """
    vectors = list(vectors)
    if not vectors:
        return []
    max_norm = max(v.norm() for v in vectors)
    if max_norm == 0.0:
        return []
    basis = []
    for v in vectors:
        w = v
        for e in basis:
            w = w - e.right_mul(inner(e, w))
        nw = w.norm()
        if nw > drop_rel * max_norm:
            basis.append(w.right_mul(Quaternion(1.0 / nw)))
    return basis


@dataclass(frozen=True)
class SpanReport:
    left_rank: int
    right_rank: int
    two_sided_rank: int

    @property
    def agree(self):
        return self.left_rank == self.right_rank == self.two_sided_rank


_UNITS = [Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)]


def span_equal(vectors):
    """Real dimensions of the left, right, and two-sided spans.

    The report is descriptive: families of fewer than n generic vectors can
    have a strictly larger two-sided span even though the one-sided ranks
    match.
    """
    vectors = list(vectors)
    if not vectors:
        return SpanReport(0, 0, 0)
    right_cols, left_cols, two_cols = [], [], []
    for v in vectors:
        for m in _UNITS:
            right_cols.append(to_real_vector(v.right_mul(m)))
            left_cols.append(to_real_vector(v.left_mul(m)))
            for l in _UNITS:
                two_cols.append(to_real_vector(v.left_mul(m).right_mul(l)))
    rank = lambda cols: int(np.linalg.matrix_rank(np.stack(cols, axis=1)))
    return SpanReport(rank(left_cols), rank(right_cols), rank(two_cols))


# ---------------------------------------------------------------------------
# graded decomposition of real-linear operators
# ---------------------------------------------------------------------------

def _graded_system():
    # columns: flattened 4x4 real matrix of x -> e_p x e_m, indexed by (m, p)
    cols = []
    for m in range(4):
        rm = right_mult_matrix(_UNITS[m])
        for p in range(4):
            cols.append((rm @ _L_BASIS[p]).reshape(-1))
    S = np.stack(cols, axis=1)
    return S, np.linalg.inv(S)


_GRADED_S, _GRADED_S_INV = _graded_system()


@dataclass(frozen=True)
class GradedDecomposition:
    """Four right-linear components of a real-linear operator on H^n.

    The operator acts as x -> sum_m (components[m] @ x) * e_m over the basis
    (1, i, j, k).  Components are quaternion matrices; the original real
    matrix is recovered by :meth:`reconstruct`.
    """

    components: tuple

    def reconstruct(self):
        n = self.components[0].n
        out = np.zeros((4 * n, 4 * n))
        eye = np.eye(n)
        for m, comp in enumerate(self.components):
            out += real_adjoint(comp) @ np.kron(eye, right_mult_matrix(_UNITS[m]))
        return out

    def apply(self, v):
        out = HVector.zeros(self.components[0].n)
        for m, comp in enumerate(self.components):
            out = out + (comp @ v).right_mul(_UNITS[m])
        return out


def graded_decompose(op):
    """Split a real-linear operator (4n x 4n real matrix) into its four
    right-linear graded components.

    The 16-parameter linear identification between quaternion coefficient
    quadruples and 4x4 real blocks is solved once at import; each block of
    the input is pushed through that inverse.
    """
    op = np.asarray(op, dtype=float)
    if op.ndim != 2 or op.shape[0] != op.shape[1] or op.shape[0] % 4:
        raise FormatError("graded decomposition needs a square 4n x 4n matrix")
    n = op.shape[0] // 4
    blocks = op.reshape(n, 4, n, 4).swapaxes(1, 2).reshape(n, n, 16)
    coeffs = blocks @ _GRADED_S_INV.T  # (n, n, 16) -> coefficients (m, p)
    comps = []
    for m in range(4):
        comps.append(HMatrix(coeffs[..., 4 * m:4 * m + 4]))
    return GradedDecomposition(components=tuple(comps))
