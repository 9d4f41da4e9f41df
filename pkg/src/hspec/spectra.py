"""Resolvents, spectra, and resolvent-set membership.

The spectrum of a quaternionic matrix is a subtle object: invertibility of
zI - T (z acting as a left scalar) defines a *left* spectrum that is not
similarity invariant and admits no general finite algorithm.  Three methods
are exposed, each tagged in its result, never silently mixed:

``triangular-exact``
    For (upper or lower) triangular input the left spectrum is exactly the
    set of diagonal entries, by back-substitution over the division ring.
``right-chiC``
    Similarity spheres {alpha + beta*M : |M| = 1} harvested from the
    eigenvalues of the complex image.  This is the object the spectral
    theorems for normal operators live on.
``probe``
    Literal membership testing of zI - T on a caller-supplied grid in one
    slice plane.

Descriptor items carry only the similarity-class data (center alpha,
radius beta); the in-memory descriptor additionally keeps one
representative quaternion per item (e.g. the actual diagonal entry for the
triangular method), which the serialized form drops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import EIG_CLUSTER_REL, RCOND_SINGULAR, algebraic_tol
from .errors import (
    DivergenceError,
    InvariantViolationError,
    MethodError,
    PreconditionError,
    SpectrumMembershipError,
)
from .hspace import (
    HMatrix,
    classify,
    complex_adjoint,
    op_norm,
    project_complex_adjoint,
    real_adjoint,
)
from .quaternion import Quaternion

__all__ = [
    "SpectrumItem",
    "SpectrumDescriptor",
    "Membership",
    "ResolventSample",
    "ProbeGrid",
    "BoundReport",
    "in_resolvent",
    "resolvent",
    "resolvent_sample",
    "neumann_resolvent",
    "spectrum",
    "spectral_radius",
    "symmetric_resolvent_bound",
]

METHODS = ("triangular-exact", "right-chiC", "probe")


@dataclass(frozen=True)
class SpectrumItem:
    center: float
    radius: float
    multiplicity: int

    @property
    def kind(self):
        return "point" if self.radius == 0.0 else "sphere"

    def magnitude(self):
        """|alpha + beta*M|, constant over the whole sphere."""
        return math.hypot(self.center, self.radius)

    def to_doc(self):
        return {
            "center": self.center,
            "radius": self.radius,
            "multiplicity": self.multiplicity,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class SpectrumDescriptor:
    items: tuple
    method: str
    representatives: tuple = field(default=(), compare=False)

    def to_doc(self):
        return {
            "method": self.method,
            "items": [it.to_doc() for it in self.items],
        }

    def total_multiplicity(self):
        return sum(it.multiplicity for it in self.items)


@dataclass(frozen=True)
class Membership:
    invertible: bool
    rcond: float

    def __bool__(self):
        return self.invertible


@dataclass(frozen=True)
class ResolventSample:
    z: Quaternion
    value: HMatrix
    condition: float


def _shift(t, z):
    """zI - T with z acting by left scalar multiplication."""
    return HMatrix.scalar(t.n, z) - t


def in_resolvent(t, z, threshold=RCOND_SINGULAR):
    """Membership of z in the resolvent set, decided in the real image.

    The reciprocal condition number (smallest over largest singular value
    of the real image of zI - T) is the certificate; values at or below
    ``threshold`` are declared singular.
    """
    r = real_adjoint(_shift(t, z))
    s = np.linalg.svd(r, compute_uv=False)
    rcond = float(s[-1] / s[0]) if s[0] > 0.0 else 0.0
    return Membership(invertible=rcond > threshold, rcond=rcond)


def resolvent(t, z):
    """R(z; T) = (zI - T)^{-1}, computed through the complex image."""
    if t.shape[0] != t.shape[1]:
        raise PreconditionError("resolvent needs a square matrix")
    c = complex_adjoint(_shift(t, z))
    s = np.linalg.svd(c, compute_uv=False)
    rcond = float(s[-1] / s[0]) if s[0] > 0.0 else 0.0
    if rcond <= RCOND_SINGULAR:
        raise SpectrumMembershipError(
            f"z = {z} lies in (or numerically at) the spectrum", rcond=rcond
        )
    x = np.linalg.solve(c, np.eye(c.shape[0]))
    return project_complex_adjoint(x)


def resolvent_sample(t, z):
    value = resolvent(t, z)
    rcond = in_resolvent(t, z).rcond
    return ResolventSample(z=z, value=value,
                           condition=(1.0 / rcond if rcond > 0.0 else np.inf))


def neumann_resolvent(t, z0, z, terms):
    """Partial geometric-series expansion of R(z; T) around z0.

    Sums ``terms`` terms of sum_n [R(z0)(z0 - z)]^n R(z0).  The contraction
    requirement |z0 - z| < 1/||R(z0)|| is checked up front; violating it
    raises :class:`DivergenceError` rather than returning garbage.
    """
    if terms < 1:
        raise PreconditionError("the expansion needs at least one term")
    r0 = resolvent(t, z0)
    step = z0 - z
    gap = abs(step) * op_norm(r0)
    if gap >= 1.0:
        raise DivergenceError(
            f"|z0 - z| * ||R(z0)|| = {gap:.6g} >= 1: series does not contract"
        )
    factor = r0 @ HMatrix.scalar(t.n, step)
    acc = r0
    power = r0
    for _ in range(terms - 1):
        power = factor @ power
        acc = acc + power
    return acc


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

def _cluster_points(points, rel):
    """Greedy clustering of 2-d points; returns (means, sizes, first_index)."""
    scale = max(1.0, max((math.hypot(a, b) for a, b in points), default=0.0))
    tol = rel * scale
    means, sizes, firsts = [], [], []
    for idx, p in enumerate(points):
        for k, m in enumerate(means):
            if math.hypot(p[0] - m[0], p[1] - m[1]) <= tol:
                w = sizes[k]
                means[k] = ((m[0] * w + p[0]) / (w + 1), (m[1] * w + p[1]) / (w + 1))
                sizes[k] += 1
                break
        else:
            means.append(p)
            sizes.append(1)
            firsts.append(idx)
    return means, sizes, firsts


def _descriptor(entries, method, multiplicity_divisor=1, cluster_rel=EIG_CLUSTER_REL):
    """Build a descriptor from (alpha, beta, representative) triples."""
    pts = [(a, b) for a, b, _ in entries]
    means, sizes, firsts = _cluster_points(pts, cluster_rel)
    order = sorted(range(len(means)), key=lambda k: (means[k][0], means[k][1]))
    items, reps = [], []
    for k in order:
        a, b = means[k]
        mult = sizes[k] // multiplicity_divisor
        items.append(SpectrumItem(center=a, radius=b, multiplicity=mult))
        reps.append(entries[firsts[k]][2])
    return SpectrumDescriptor(items=tuple(items), method=method,
                              representatives=tuple(reps))


def _spectrum_triangular(t):
    upper = t.is_triangular(upper=True)
    lower = t.is_triangular(upper=False)
    if not (upper or lower):
        raise MethodError(
            "the exact diagonal readout applies only to triangular matrices"
        )
    # cluster the diagonal entries as quaternion points: i and -i share
    # similarity data (alpha, beta) but are distinct left-spectrum points
    diag = t.diagonal()
    scale = max(1.0, max(abs(q) for q in diag))
    tol = EIG_CLUSTER_REL * scale
    groups = []
    for q in diag:
        for g in groups:
            if abs(q - g[0]) <= tol:
                g[1] += 1
                break
        else:
            groups.append([q, 1])
    groups.sort(key=lambda g: (g[0].w, float(np.linalg.norm(g[0].imag)),
                               g[0].x, g[0].y, g[0].z))
    items, reps = [], []
    for q, mult in groups:
        beta = float(np.linalg.norm(q.imag))
        items.append(SpectrumItem(center=q.w, radius=beta, multiplicity=mult))
        reps.append(q)
    return SpectrumDescriptor(items=tuple(items), method="triangular-exact",
                              representatives=tuple(reps))


def _chic_eigenvalues(t, force_general=False):
    c = complex_adjoint(t)
    if not force_general and np.max(np.abs(c - c.conj().T)) == 0.0:
        return np.linalg.eigvalsh(c).astype(complex)
    return np.linalg.eigvals(c)


def _spectrum_right_chic(t, force_general=False):
    lam = _chic_eigenvalues(t, force_general=force_general)
    # eigenvalues come in conjugate pairs; fold onto the closed upper
    # half-plane, where each similarity sphere appears exactly twice
    entries = []
    for z in lam:
        a, b = float(z.real), float(abs(z.imag))
        entries.append((a, b, Quaternion(a, b)))
    return _descriptor(entries, "right-chiC", multiplicity_divisor=2)


@dataclass(frozen=True)
class ProbeGrid:
    """Rectangle in one slice plane, sampled on a regular grid.

    Points are alpha + beta*M for alpha in [alpha_min, alpha_max] and
    beta in [beta_min, beta_max]; cells whose reciprocal condition falls
    below ``threshold`` are reported as spectrum hits.
    """

    M: Quaternion
    alpha_min: float
    alpha_max: float
    beta_min: float
    beta_max: float
    num_alpha: int = 21
    num_beta: int = 21
    threshold: float = 1e-8

    def points(self):
        alphas = np.linspace(self.alpha_min, self.alpha_max, self.num_alpha)
        betas = np.linspace(self.beta_min, self.beta_max, self.num_beta)
        m = self.M.array
        for a in alphas:
            for b in betas:
                arr = np.array([a, 0.0, 0.0, 0.0]) + b * m
                yield float(a), float(b), Quaternion.from_array(arr)


def _spectrum_probe(t, grid):
    if grid is None:
        raise PreconditionError("the probe method needs a ProbeGrid")
    entries = []
    for a, b, z in grid.points():
        s = np.linalg.svd(real_adjoint(_shift(t, z)), compute_uv=False)
        if s[0] > 0.0 and s[-1] / s[0] > grid.threshold:
            continue
        # the kernel of zI - T is a right submodule, so its real dimension
        # is a multiple of 4; report the quaternionic nullity
        nullity = int(np.sum(s <= grid.threshold * s[0])) if s[0] > 0.0 else len(s)
        entries.append((a, abs(b), z, max(1, nullity // 4)))
    items = tuple(SpectrumItem(center=a, radius=b, multiplicity=m)
                  for a, b, _, m in entries)
    reps = tuple(z for _, _, z, _ in entries)
    return SpectrumDescriptor(items=items, method="probe", representatives=reps)


_METHOD_ALIASES = {
    "triangular": "triangular-exact",
    "triangular-exact": "triangular-exact",
    "right-chic": "right-chiC",
    "chic": "right-chiC",
    "right-chiC": "right-chiC",
    "probe": "probe",
}


def spectrum(t, method="right-chiC", grid=None, force_general=False):
    """Spectrum of T by the requested method; see the module docstring."""
    if t.shape[0] != t.shape[1]:
        raise PreconditionError("spectrum needs a square matrix")
    canon = _METHOD_ALIASES.get(method if method in _METHOD_ALIASES
                                else str(method).lower())
    if canon is None:
        raise MethodError(f"unknown spectrum method {method!r}")
    if canon == "triangular-exact":
        return _spectrum_triangular(t)
    if canon == "right-chiC":
        return _spectrum_right_chic(t, force_general=force_general)
    return _spectrum_probe(t, grid)


def spectral_radius(descriptor):
    """sup |z| over the spectrum; constant on each similarity sphere."""
    if not descriptor.items:
        raise InvariantViolationError(
            "empty spectrum descriptor: matrices always have nonempty spectrum"
        )
    return max(it.magnitude() for it in descriptor.items)


# ---------------------------------------------------------------------------
# symmetric-operator resolvent bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    ratio_min: float
    samples: int
    gap: float

    @property
    def holds(self):
        return self.ratio_min >= 1.0 - 1e-9


def symmetric_resolvent_bound(t, a, samples=200, seed=0, tol=None):
    """Sampled check of ||(aI - T)x|| >= (|a - conj_real(a)| / 2) ||x||.

    For self-adjoint T and non-real a the classical estimate predicts a
    ratio of at least one.  The report is descriptive: over the quaternions
    a self-adjoint matrix can carry non-real points in its left spectrum,
    in which case the sampled minimum drops below one.  That is data worth
    surfacing, not an error.
    """
    tol = algebraic_tol(tol)
    if not classify(t, tol=tol).self_adjoint:
        raise PreconditionError("the bound applies to self-adjoint matrices")
    gap = 2.0 * float(np.linalg.norm(a.imag))
    if gap <= tol:
        raise PreconditionError("a must have a nonzero imaginary part")
    if samples < 1:
        raise PreconditionError("need at least one sample")
    shifted = _shift(t, a)
    rng = np.random.default_rng(seed)
    worst = np.inf
    from .hspace import HVector

    for _ in range(samples):
        x = HVector(rng.standard_normal((t.n, 4)))
        nx = x.norm()
        if nx == 0.0:  # pragma: no cover - probability zero
            continue
        ratio = (shifted @ x).norm() * 2.0 / (gap * nx)
        worst = min(worst, ratio)
    return BoundReport(ratio_min=float(worst), samples=samples, gap=gap)
