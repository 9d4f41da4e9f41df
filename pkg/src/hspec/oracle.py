"""Brute-force ground truth and reproducible test corpora.

Everything here goes through the real 4n x 4n image and a hand-rolled
pivoted elimination.  The main numerical path inverts through the complex
image with library solvers; the two routes share no inversion code, which
is what makes their agreement a meaningful gate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import RCOND_SINGULAR
from .errors import FormatError
from .hspace import HMatrix, complex_adjoint, from_complex_adjoint, real_adjoint, from_real_adjoint

__all__ = ["CorpusSpec", "SingularReport", "FAMILIES", "generate", "oracle_invert"]

FAMILIES = (
    "general",
    "hermitian",
    "normal",
    "unitary",
    "positive",
    "nilpotent-plus-scalar",
    "upper-triangular-slice",
)


@dataclass(frozen=True)
class CorpusSpec:
    """Reproducible random-matrix request.

    The same seed/family/count/n reproduces the identical corpus
    bit-for-bit.  ``n`` is the matrix dimension.
    """

    seed: int = 0
    count: int = 8
    family: str = "general"
    n: int = 4

    def __post_init__(self):
        fam = self.family.replace("_", "-")
        if fam not in FAMILIES:
            raise FormatError(
                f"unknown corpus family {self.family!r}; choose from {', '.join(FAMILIES)}"
            )
        object.__setattr__(self, "family", fam)
        if self.count < 0 or self.n < 1:
            raise FormatError("corpus needs count >= 0 and n >= 1")


def _general(rng, n):
    return HMatrix(rng.uniform(-1.0, 1.0, size=(n, n, 4)))


def _slice_entries(rng, n):
    """n x n entries confined to the (1, i) slice, components uniform."""
    a = np.zeros((n, n, 4))
    a[..., 0] = rng.uniform(-1.0, 1.0, size=(n, n))
    a[..., 1] = rng.uniform(-1.0, 1.0, size=(n, n))
    return a


def _expm(t):
    return from_complex_adjoint(scipy.linalg.expm(complex_adjoint(t)))


def _unitary(rng, n):
    g = _general(rng, n)
    return _expm(g - g.adjoint())


def _one(rng, family, n):
    if family == "general":
        return _general(rng, n)
    if family == "hermitian":
        g = _general(rng, n)
        return g + g.adjoint()
    if family == "positive":
        g = _general(rng, n)
        return g.adjoint() @ g
    if family == "unitary":
        return _unitary(rng, n)
    if family == "normal":
        u = _unitary(rng, n)
        d = np.zeros((n, n, 4))
        idx = np.arange(n)
        d[idx, idx, 0] = rng.uniform(-1.0, 1.0, size=n)
        d[idx, idx, 1] = rng.uniform(-1.0, 1.0, size=n)
        return u @ HMatrix(d) @ u.adjoint()
    if family == "nilpotent-plus-scalar":
        # scalar and nilpotent part both confined to the (1, i) slice so the
        # family stays inside the domain of the contour calculus
        a = _slice_entries(rng, n)
        a[np.tril_indices(n, k=0)] = 0.0
        lam = rng.uniform(-1.0, 1.0, size=2)
        idx = np.arange(n)
        a[idx, idx, 0] = lam[0]
        a[idx, idx, 1] = lam[1]
        return HMatrix(a)
    if family == "upper-triangular-slice":
        a = _slice_entries(rng, n)
        a[np.tril_indices(n, k=-1)] = 0.0
        return HMatrix(a)
    raise FormatError(f"unknown corpus family {family!r}")


def generate(spec):
    """Materialize the corpus described by ``spec`` (deterministically)."""
    rng = np.random.default_rng(spec.seed)
    return [_one(rng, spec.family, spec.n) for _ in range(spec.count)]


# ---------------------------------------------------------------------------
# independent inversion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularReport:
    """Outcome of elimination hitting a pivot below the cutoff.

    ``rank`` counts the pivots accepted before the breakdown (a rank bound
    for the real image, which is 4x the quaternionic rank)."""

    rank: int
    pivot: float
    cutoff: float

    def __bool__(self):
        return False


def oracle_invert(t, pivot_rel=RCOND_SINGULAR, structure_tol=1e-7):
    """Invert through the real image by Gauss-Jordan with partial pivoting.

    Returns the inverse as an HMatrix, or a :class:`SingularReport` when a
    pivot falls below ``pivot_rel`` times the largest initial entry.  The
    pullback re-validates the left-multiplication block structure of the
    eliminated inverse (``structure_tol`` is the elimination-noise budget).
    """
    if t.shape[0] != t.shape[1]:
        return SingularReport(rank=0, pivot=0.0, cutoff=0.0)
    r = real_adjoint(t)
    m = r.shape[0]
    scale = float(np.max(np.abs(r))) if m else 0.0
    cutoff = pivot_rel * scale
    aug = np.concatenate([r, np.eye(m)], axis=1)
    for k in range(m):
        p = k + int(np.argmax(np.abs(aug[k:, k])))
        pivot = abs(aug[p, k])
        if pivot <= cutoff or pivot == 0.0:
            return SingularReport(rank=k, pivot=pivot, cutoff=cutoff)
        if p != k:
            aug[[k, p]] = aug[[p, k]]
        aug[k] /= aug[k, k]
        rows = np.arange(m) != k
        aug[rows] -= np.outer(aug[rows, k], aug[k])
    return from_real_adjoint(aug[:, m:], tol=structure_tol)
