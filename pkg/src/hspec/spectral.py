"""Spectral theorem machinery for self-adjoint and normal matrices.

Finite-dimensional spectral measures: the measure is a finitely supported
family of quaternionic orthogonal projectors, one per eigenvalue cluster of
the complex image.  On top of it sit a Borel functional calculus for
self-adjoint operators, spectrum-location classification, positive square
roots, polar decomposition, and one-parameter unitary groups with generator
recovery.

Conventions frozen here:

* ``borel_funcalc`` multiplies function values onto projectors from the
  left: ``sum_a f(lambda_a) . P_a``.
* A one-parameter unitary group acts on the complex image of the space.
  The generator direction is the complex structure itself (multiplication
  by the complex scalar ``i`` on the 2n-dimensional image), not left
  quaternion multiplication; ``U(t)`` is therefore a complex-linear
  operator that generally lies outside the quaternionic matrix algebra.
  ``UnitaryGroup.slice_matrix`` embeds it faithfully as a quaternionic
  matrix with entries in the span of {1, i} when a serializable form is
  needed.
"""

import cmath
import math
import numbers
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .config import EIG_CLUSTER_REL, RCOND_SINGULAR, STONE_STEP, algebraic_tol
from .errors import (
    DomainError,
    InvariantViolationError,
    PreconditionError,
    StoneViolationError,
)
from .hspace import (
    HMatrix,
    classify,
    complex_adjoint,
    project_complex_adjoint,
)
from .io import matrix_to_doc
from .quaternion import Quaternion


__all__ = [
    "EigenPair",
    "SpectralDecomposition",
    "SpectrumClassification",
    "UnitaryGroup",
    "StoneReport",
    "eigendecompose",
    "borel_funcalc",
    "classify_by_spectrum",
    "sqrt_positive",
    "polar_decompose",
    "unitary_group",
    "stone_generator",
]


# ---------------------------------------------------------------------------
# decomposition types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenPair:
    """One spectral item: an eigenvalue record plus its projector.

    ``center``/``radius`` describe the eigenvalue: a real point when
    ``radius == 0`` (self-adjoint case) and the similarity sphere
    ``center + radius * S`` otherwise (normal case).  ``rank`` is the
    quaternionic dimension of the projector's range.
    """

    center: float
    radius: float
    rank: int
    projector: HMatrix

    @property
    def magnitude(self):
        return math.hypot(self.center, self.radius)

    def to_doc(self):
        return {
            "eigenvalue": {"center": self.center, "radius": self.radius},
            "projector": matrix_to_doc(self.projector),
        }


@dataclass(frozen=True)
class SpectralDecomposition:
    """Projector-valued resolution of the identity.

    ``kind`` records which route produced it: ``"self-adjoint"`` (real
    eigenvalues, exact reconstruction ``sum lambda_a P_a = T``) or
    ``"normal"`` (eigenvalue spheres; the projectors still resolve the
    identity and commute with the operator).
    """

    pairs: tuple
    kind: str

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    @property
    def n(self):
        return self.pairs[0].projector.shape[0]

    def eigenvalues(self):
        return [(p.center, p.radius) for p in self.pairs]

    def identity_sum(self):
        out = HMatrix.zeros(self.n)
        for p in self.pairs:
            out = out + p.projector
        return out

    def reconstruct(self):
        """``sum lambda_a P_a``; equals the operator in the self-adjoint
        case only (a sphere has no distinguished point to multiply by)."""
        if self.kind != "self-adjoint":
            raise PreconditionError(
                "reconstruction from eigenvalues needs real spectrum; "
                "normal decompositions only resolve the identity"
            )
        out = HMatrix.zeros(self.n)
        for p in self.pairs:
            out = out + p.center * p.projector
        return out

    def to_doc(self):
        return {"pairs": [p.to_doc() for p in self.pairs]}


# ---------------------------------------------------------------------------
# eigendecomposition via the complex image
# ---------------------------------------------------------------------------


def _pull_back_projector(e, scale, tol):
    """Structured pullback of a complex projector with verification.

    The eigenspace projector of the complex image must commute with the
    antilinear structure map; equivalently it must lie in the image of
    ``complex_adjoint``.  The distance to that subspace is measured before
    projecting onto it.
    """
    p = project_complex_adjoint(e)
    resid = np.linalg.norm(complex_adjoint(p) - e) / max(scale, 1.0)
    if resid > tol:
        raise InvariantViolationError(
            f"complex eigenprojector is not quaternionic (structure residual "
            f"{resid:.3e}); eigenvalue pairing broke"
        )
    return 0.5 * (p + p.adjoint())


def _cluster_1d(values, tol):
    """Split ascending real values at gaps wider than tol."""
    groups = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > tol:
            groups.append(list(range(start, i)))
            start = i
    groups.append(list(range(start, len(values))))
    return groups


def _cluster_folded(folded, tol):
    """Greedy clustering of (alpha, beta) pairs; returns index groups."""
    groups = []
    centers = []
    for idx, p in enumerate(folded):
        placed = False
        for k, c in enumerate(centers):
            if math.hypot(p[0] - c[0], p[1] - c[1]) <= tol:
                groups[k].append(idx)
                m = len(groups[k])
                centers[k] = ((c[0] * (m - 1) + p[0]) / m,
                              (c[1] * (m - 1) + p[1]) / m)
                placed = True
                break
        if not placed:
            groups.append([idx])
            centers.append(p)
    return groups, centers


def eigendecompose(t, tol=None):
    """Projector-valued spectral decomposition of a normal matrix.

    Eigenvalues come from the complex image: real (and exact, via the
    Hermitian eigensolver) when the matrix is self-adjoint, otherwise
    conjugate-paired complex values folded to one representative with
    beta >= 0 per pair.  Each cluster's complex spectral projector is
    verified to commute with the quaternionic structure and pulled back.

    Raises :class:`PreconditionError` for non-normal input.
    """
    flags = classify(t)
    if not flags.normal:
        raise PreconditionError(
            f"eigendecompose needs a normal matrix "
            f"(residual {flags.residuals['normal']:.3e})"
        )
    c = complex_adjoint(t)
    scale = max(1.0, float(np.linalg.norm(c, 2)))
    vtol = algebraic_tol(tol) * 100.0 * scale

    pairs = []
    if flags.self_adjoint:
        w, v = np.linalg.eigh(c)
        for idx in _cluster_1d(list(w), EIG_CLUSTER_REL * scale):
            e = v[:, idx] @ v[:, idx].conj().T
            proj = _pull_back_projector(e, 1.0, vtol)
            pairs.append(EigenPair(
                center=float(np.mean(w[idx])), radius=0.0,
                rank=len(idx) // 2, projector=proj))
        pairs.sort(key=lambda p: p.center)
    else:
        # normal: the complex Schur form is diagonal, so the Schur basis is
        # an orthonormal eigenbasis
        tt, z = scipy.linalg.schur(c, output="complex")
        mu = np.diag(tt)
        off = tt - np.diag(mu)
        if np.linalg.norm(off) > vtol * max(1.0, np.linalg.norm(tt)):
            raise InvariantViolationError(
                "Schur form of a normal image is not diagonal; "
                "normality residual is inconsistent"
            )
        folded = [(float(m.real), abs(float(m.imag))) for m in mu]
        groups, centers = _cluster_folded(folded, EIG_CLUSTER_REL * scale)
        for idx, (alpha, beta) in zip(groups, centers):
            e = z[:, idx] @ z[:, idx].conj().T
            proj = _pull_back_projector(e, 1.0, vtol)
            pairs.append(EigenPair(
                center=alpha, radius=beta,
                rank=len(idx) // 2, projector=proj))
        pairs.sort(key=lambda p: (p.center, p.radius))
    kind = "self-adjoint" if flags.self_adjoint else "normal"
    return SpectralDecomposition(pairs=tuple(pairs), kind=kind)


# ---------------------------------------------------------------------------
# Borel functional calculus (self-adjoint operators, real spectrum)
# ---------------------------------------------------------------------------


def _as_value(v):
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, numbers.Real) and not isinstance(v, bool):
        return Quaternion(float(v))
    raise DomainError(
        f"function values must be real numbers or quaternions, got {v!r}"
    )


def borel_funcalc(t, f, decomposition=None, tol=None):
    """``sum_a f(lambda_a) . P_a`` over the real spectrum of self-adjoint t.

    ``f`` maps a float to a float or :class:`Quaternion`; values multiply
    the projectors from the left (frozen ordering — projectors have
    quaternion entries, so the side matters for non-real values).  An
    exception or non-finite value from ``f`` at an eigenvalue is reported
    as :class:`DomainError`.
    """
    d = decomposition if decomposition is not None else eigendecompose(t, tol)
    if d.kind != "self-adjoint":
        raise PreconditionError(
            "borel_funcalc needs a self-adjoint operator (real spectrum)"
        )
    out = HMatrix.zeros(d.n)
    for pair in d.pairs:
        try:
            val = _as_value(f(pair.center))
        except DomainError:
            raise
        except (ArithmeticError, ValueError) as exc:
            raise DomainError(
                f"f is undefined at eigenvalue {pair.center!r}: {exc}"
            ) from exc
        if not np.all(np.isfinite(val.array)):
            raise DomainError(
                f"f is not finite at eigenvalue {pair.center!r}"
            )
        out = out + HMatrix.scalar(d.n, val) @ pair.projector
    return out


# ---------------------------------------------------------------------------
# classification by spectrum location
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumClassification:
    unitary: bool
    hermitian: bool
    positive: bool

    @property
    def none(self):
        return not (self.unitary or self.hermitian or self.positive)

    def flags(self):
        out = [name for name in ("unitary", "hermitian", "positive")
               if getattr(self, name)]
        return out or ["none"]


def classify_by_spectrum(t, tol=None):
    """Unitary/hermitian/positive flags read off the spectrum's location.

    The geometric reading (spectrum on the unit sphere / on the real line /
    on the nonnegative half-line) is cross-checked against the algebraic
    identities; a disagreement raises :class:`InvariantViolationError`
    because the two must coincide for normal operators.
    """
    algebraic = classify(t, tol=algebraic_tol(tol))
    if not algebraic.normal:
        raise PreconditionError(
            "spectrum-location classification applies to normal matrices"
        )
    d = eigendecompose(t, tol)
    scale = max(1.0, max(p.magnitude for p in d.pairs))
    gtol = 1e-7 * scale
    hermitian = all(p.radius <= gtol for p in d.pairs)
    unitary = all(abs(p.magnitude - 1.0) <= gtol for p in d.pairs)
    positive = hermitian and all(p.center >= -gtol for p in d.pairs)
    geometric = SpectrumClassification(unitary, hermitian, positive)

    expected = SpectrumClassification(
        algebraic.unitary, algebraic.self_adjoint, algebraic.positive)
    if geometric != expected:
        raise InvariantViolationError(
            f"spectrum location {geometric} disagrees with algebraic "
            f"classification {expected}"
        )
    return geometric


# ---------------------------------------------------------------------------
# square root and polar decomposition
# ---------------------------------------------------------------------------


def sqrt_positive(t, tol=None):
    """The positive square root of a positive self-adjoint matrix.

    Realized through the Borel calculus with ``f = sqrt``; eigenvalues in
    ``[-tol, 0)`` are clamped to zero, anything more negative is a
    precondition failure.
    """
    d = eigendecompose(t, tol)
    if d.kind != "self-adjoint":
        raise PreconditionError("square root needs a self-adjoint matrix")
    scale = max(1.0, max(abs(p.center) for p in d.pairs))
    floor = -algebraic_tol(tol) * 100.0 * scale
    low = min(p.center for p in d.pairs)
    if low < floor:
        raise PreconditionError(
            f"matrix has a negative eigenvalue {low:.6g}; no positive root"
        )
    return borel_funcalc(t, lambda z: math.sqrt(max(z, 0.0)),
                         decomposition=d)


def polar_decompose(t, tol=None):
    """Factor ``T = P A`` with A positive self-adjoint and P a partial
    isometry.

    ``A = sqrt(T* T)`` and ``P = T A^+`` with the pseudo-inverse taken on
    the range of A; P annihilates the orthogonal complement of that range
    and preserves norms on the range itself.  Works for any square matrix,
    including rank-deficient and zero.
    """
    if t.shape[0] != t.shape[1]:
        raise PreconditionError("polar decomposition needs a square matrix")
    d = eigendecompose(t.adjoint() @ t, tol)
    cutoff = RCOND_SINGULAR * max((p.center for p in d.pairs), default=0.0)
    a = HMatrix.zeros(d.n)
    a_pinv = HMatrix.zeros(d.n)
    for pair in d.pairs:
        lam = max(pair.center, 0.0)
        root = math.sqrt(lam)
        a = a + root * pair.projector
        if lam > cutoff and root > 0.0:
            a_pinv = a_pinv + (1.0 / root) * pair.projector
    p = t @ a_pinv
    return p, a


# ---------------------------------------------------------------------------
# one-parameter unitary groups and generator recovery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitaryGroup:
    """The group ``U(t) = exp(i t . chi(B))`` for a self-adjoint generator B.

    The imaginary direction is the complex structure of the image space,
    so ``U(t)`` is a complex-linear operator on the 2n-dimensional image;
    it is quaternionic only in degenerate cases.  Evaluation is by a single
    Hermitian eigendecomposition of the image, cached at construction.
    """

    generator: HMatrix
    eigenvalues: np.ndarray = field(repr=False, compare=False)
    eigenvectors: np.ndarray = field(repr=False, compare=False)

    @property
    def n(self):
        return self.generator.shape[0]

    def at(self, t):
        """``U(t)`` as a complex (2n, 2n) array."""
        phase = np.exp(1j * float(t) * self.eigenvalues)
        return (self.eigenvectors * phase) @ self.eigenvectors.conj().T

    def slice_matrix(self, t):
        """``U(t)`` embedded as a (2n, 2n) quaternionic matrix with entries
        in span{1, i} — the faithful serializable form."""
        u = self.at(t)
        m = u.shape[0]
        arr = np.zeros((m, m, 4))
        arr[..., 0] = u.real
        arr[..., 1] = u.imag
        return HMatrix(arr)

    def growth_rate(self, t=1.0):
        """``ln ||U(t)|| / t`` — identically zero for a unitary group; kept
        as the finite-dimensional shadow of the semigroup growth bound."""
        return math.log(float(np.linalg.norm(self.at(t), 2))) / float(t)


def unitary_group(b, tol=None):
    """Build the one-parameter unitary group generated by self-adjoint b."""
    flags = classify(b, tol=algebraic_tol(tol))
    if not flags.self_adjoint:
        raise PreconditionError(
            f"unitary group needs a self-adjoint generator "
            f"(residual {flags.residuals['self_adjoint']:.3e})"
        )
    c = complex_adjoint(b)
    w, v = np.linalg.eigh(c)
    return UnitaryGroup(generator=b, eigenvalues=w, eigenvectors=v)


@dataclass(frozen=True)
class StoneReport:
    """Recovered generator plus the residuals of the projection steps."""

    generator: HMatrix
    hermitian_residual: float
    structure_residual: float
    step: float


def stone_generator(group, h=STONE_STEP, tol=1e-6):
    """Recover the self-adjoint generator from group samples.

    ``group`` is a :class:`UnitaryGroup` or any callable ``t -> complex
    (2n, 2n) array``.  The derivative at zero is estimated by the central
    difference ``(U(h) - U(-h)) / 2h = i . chi(B) + O(h^2)``; dividing out
    the complex structure must leave a Hermitian, quaternionic-structured
    matrix.  Violations of either property beyond ``tol`` raise
    :class:`StoneViolationError`; the surviving residuals are reported.
    """
    sample = group.at if isinstance(group, UnitaryGroup) else group
    h = float(h)
    if h <= 0.0:
        raise PreconditionError("difference step must be positive")
    d = (np.asarray(sample(h)) - np.asarray(sample(-h))) / (2.0 * h)
    bc = -1j * d
    scale = max(1.0, float(np.linalg.norm(bc)))
    herm = float(np.linalg.norm(bc - bc.conj().T)) / scale
    if herm > tol:
        raise StoneViolationError(
            f"recovered generator is not self-adjoint (residual {herm:.3e})"
        )
    bc = 0.5 * (bc + bc.conj().T)
    b = project_complex_adjoint(bc)
    struct = float(np.linalg.norm(complex_adjoint(b) - bc)) / scale
    if struct > tol:
        raise StoneViolationError(
            f"recovered generator does not commute with the quaternionic "
            f"structure (residual {struct:.3e})"
        )
    b = 0.5 * (b + b.adjoint())
    return StoneReport(generator=b, hermitian_residual=herm,
                       structure_residual=struct, step=h)
