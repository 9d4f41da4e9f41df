"""Scalar quaternion algebra.

Quaternions are kept as length-4 float arrays in (w, x, y, z) order, with
``w`` the real part.  The multiplication convention is the usual Hamilton
one: ij = k, jk = i, ki = j, and i**2 = j**2 = k**2 = -1.

Two matrix pictures of a single quaternion are provided: a 2x2 complex
matrix built from the splitting q = (w + x i) + (y + z i) j, and the 4x4
real matrix of left multiplication by q.  Both are algebra homomorphisms
and are the scalar seeds of the corresponding matrix representations in
:mod:`hspec.hspace`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError, SingularScalarError

__all__ = [
    "Quaternion",
    "ImaginaryUnit",
    "GradingSignature",
    "KAPPA",
    "HAMILTON",
    "qmul",
    "qconj",
    "qabs",
    "qinv",
    "qexp",
    "qlog",
    "mul",
    "conj",
    "inv",
    "slice_decompose",
    "exp_q",
    "log_q",
    "to_complex2",
    "to_real4",
    "ONE",
    "I",
    "J",
    "K",
    "BASIS",
]


def _structure_tensor():
    # H[p, q, c] = component c of (basis_p * basis_q)
    H = np.zeros((4, 4, 4))
    table = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    for (p, q), (c, s) in table.items():
        H[p, q, c] = s
    return H


HAMILTON = _structure_tensor()
HAMILTON.flags.writeable = False


# ---------------------------------------------------------------------------
# array-level kernels, broadcasting over leading axes of shape (..., 4)
# ---------------------------------------------------------------------------

def qmul(a, b):
    """Hamilton product of component arrays, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj(a):
    a = np.asarray(a, dtype=float)
    out = a.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def qabs(a):
    a = np.asarray(a, dtype=float)
    return np.sqrt(np.sum(a * a, axis=-1))


def qinv(a):
    a = np.asarray(a, dtype=float)
    n2 = np.sum(a * a, axis=-1, keepdims=True)
    if np.any(n2 == 0.0):
        raise SingularScalarError("inverse of the zero quaternion")
    return qconj(a) / n2


def qexp(a):
    """Exponential through the slice plane of the argument."""
    a = np.asarray(a, dtype=float)
    alpha = a[..., 0]
    v = a[..., 1:]
    beta = np.sqrt(np.sum(v * v, axis=-1))
    scale = np.exp(alpha)
    # sin(beta)/beta, stable at beta = 0
    sinc = np.sinc(beta / np.pi)
    out = np.empty_like(a)
    out[..., 0] = scale * np.cos(beta)
    out[..., 1:] = (scale * sinc)[..., None] * v
    return out


def qlog(a, branch=None, offset=0):
    """Principal logarithm in the slice plane of the argument.

    Negative reals sit on the branch cut shared by every slice plane; they
    are only accepted when an explicit ``branch`` unit is supplied.
    ``offset`` adds 2*pi*offset to the angle, in the same plane.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (4,):
        raise FormatError("qlog operates on a single quaternion")
    r = float(qabs(a))
    if r == 0.0:
        raise DomainError("log of the zero quaternion")
    v = a[1:]
    vn = float(np.linalg.norm(v))
    theta = np.arctan2(vn, a[0])
    if vn <= 1e-15 * r:
        if a[0] > 0 and offset == 0:
            out = np.zeros(4)
            out[0] = np.log(r)
            return out
        if branch is None:
            raise DomainError(
                "logarithm on the real axis needs an explicit branch unit"
            )
        m = np.asarray(branch, dtype=float)[1:] if np.asarray(branch).shape == (4,) else np.asarray(branch, dtype=float)
        m = m / np.linalg.norm(m)
    else:
        m = v / vn
    angle = theta + 2.0 * np.pi * offset
    out = np.zeros(4)
    out[0] = np.log(r)
    out[1:] = angle * m
    return out


# ---------------------------------------------------------------------------
# wrapper types
# ---------------------------------------------------------------------------

class Quaternion:
    """Immutable quaternion scalar."""

    __slots__ = ("_a",)

    def __init__(self, w=0.0, x=0.0, y=0.0, z=0.0):
        a = np.array([w, x, y, z], dtype=float)
        a.flags.writeable = False
        object.__setattr__(self, "_a", a)

    # -- construction helpers ------------------------------------------------
    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise FormatError(f"quaternion needs 4 components, got shape {a.shape}")
        return cls(*a)

    @classmethod
    def from_complex(cls, c):
        c = complex(c)
        return cls(c.real, c.imag, 0.0, 0.0)

    # -- views ----------------------------------------------------------------
    @property
    def array(self):
        return self._a

    @property
    def w(self):
        return float(self._a[0])

    @property
    def x(self):
        return float(self._a[1])

    @property
    def y(self):
        return float(self._a[2])

    @property
    def z(self):
        return float(self._a[3])

    @property
    def imag(self):
        """Vector part as a length-3 array."""
        return self._a[1:]

    def __repr__(self):
        return "Quaternion({!r}, {!r}, {!r}, {!r})".format(*self._a)

    # -- algebra ---------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Quaternion):
            return other
        if isinstance(other, (int, float)):
            return Quaternion(float(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(self._a + o._a)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(self._a - o._a)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion.from_array(o._a - self._a)

    def __neg__(self):
        return Quaternion.from_array(-self._a)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self._a * float(other))
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self._a, other._a))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self._a * float(other))
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(other._a, self._a))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion.from_array(self._a / float(other))
        if isinstance(other, Quaternion):
            # right division: self * other^{-1}
            return self * other.inv()
        return NotImplemented

    def __abs__(self):
        return float(qabs(self._a))

    def norm(self):
        return abs(self)

    def conj(self):
        return Quaternion.from_array(qconj(self._a))

    def inv(self):
        return Quaternion.from_array(qinv(self._a))

    def exp(self):
        return Quaternion.from_array(qexp(self._a))

    def log(self, branch=None, offset=0):
        b = branch.array if isinstance(branch, (Quaternion, ImaginaryUnit)) else branch
        return Quaternion.from_array(qlog(self._a, branch=b, offset=offset))

    def is_real(self, tol=1e-12):
        return float(np.linalg.norm(self.imag)) <= tol * max(1.0, abs(self))

    def isclose(self, other, tol=1e-12):
        o = self._coerce(other)
        return bool(np.all(np.abs(self._a - o._a) <= tol))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return bool(np.array_equal(self._a, o._a))

    def __hash__(self):
        return hash(self._a.tobytes())


class ImaginaryUnit(Quaternion):
    """A purely imaginary quaternion of unit norm (a slice direction).

    Squares to -1; every such unit spans, together with 1, a plane that is
    an isomorphic copy of the complex numbers.
    """

    __slots__ = ()

    def __init__(self, x=0.0, y=0.0, z=0.0, _tol=1e-9):
        v = np.array([x, y, z], dtype=float)
        peak = np.max(np.abs(v))
        if peak == 0.0:
            raise DomainError("imaginary unit needs a nonzero vector part")
        # scale out the magnitude first so denormal inputs survive the norm
        v = v / peak
        v = v / np.linalg.norm(v)
        super().__init__(0.0, *v)

    @classmethod
    def from_quaternion(cls, q, tol=1e-9):
        q = q if isinstance(q, Quaternion) else Quaternion.from_array(q)
        if abs(q.w) > tol * max(1.0, abs(q)):
            raise DomainError("imaginary unit must have zero real part")
        return cls(*q.imag)


@dataclass(frozen=True)
class GradingSignature:
    """Adjoint signs of the four grading directions.

    Component ``e`` is even (fixed by conjugation); ``i, j, k`` are odd.
    ``sign(m)`` is the factor picked up by the m-graded piece of an operator
    under the adjoint.
    """

    kappa: tuple = (0, 1, 1, 1)

    def sign(self, m):
        return -1.0 if self.kappa[m] % 2 else 1.0

    def signs(self):
        return np.array([self.sign(m) for m in range(4)])


KAPPA = GradingSignature()

ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
BASIS = (ONE, I, J, K)


# ---------------------------------------------------------------------------
# named operations (thin wrappers over the kernels)
# ---------------------------------------------------------------------------

def _as_q(q):
    return q if isinstance(q, Quaternion) else Quaternion.from_array(np.asarray(q, dtype=float))


def mul(a, b):
    return _as_q(a) * _as_q(b)


def conj(q):
    return _as_q(q).conj()


def inv(q):
    return _as_q(q).inv()


def exp_q(q):
    return _as_q(q).exp()


def log_q(q, branch=None, offset=0):
    return _as_q(q).log(branch=branch, offset=offset)


def slice_decompose(q):
    """Split q = alpha + beta * M with beta >= 0 and M an imaginary unit.

    For a real quaternion the vector part carries no direction; the unit is
    pinned to i so that downstream contour placement stays deterministic.
    """
    q = _as_q(q)
    alpha = q.w
    beta = float(np.linalg.norm(q.imag))
    if beta == 0.0:
        return alpha, 0.0, ImaginaryUnit(1.0, 0.0, 0.0)
    v = q.imag / beta
    return alpha, beta, ImaginaryUnit(*v)


def to_complex2(q):
    """2x2 complex image of q = (w + x i) + (y + z i) j.

    Multiplicative: to_complex2(a b) = to_complex2(a) @ to_complex2(b).
    """
    q = _as_q(q)
    c1 = complex(q.w, q.x)
    c2 = complex(q.y, q.z)
    return np.array([[c1, c2], [-np.conj(c2), np.conj(c1)]])


def to_real4(q):
    """4x4 real matrix of left multiplication by q on (w, x, y, z) columns.

    Transpose corresponds to conjugation: to_real4(q).T = to_real4(conj(q)).
    """
    q = _as_q(q)
    w, x, y, z = q.array
    return np.array(
        [
            [w, -x, -y, -z],
            [x, w, -z, y],
            [y, z, w, -x],
            [z, -y, x, w],
        ]
    )
