"""Property-suite runners behind the ``check`` subcommand.

Each suite re-verifies the invariants of one module on a seeded corpus and
returns a structured report: worst residual per named check, pass/fail at
the pinned tolerance, and a count of disagreements with the independent
real-representation oracle wherever an inversion is exercised.  The suite
names map one-to-one onto the package's modules: quat, hspace, resolvent,
funcalc, spectral, polar, stone, laurent.
"""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .config import algebraic_tol, quad_tol
from .errors import HspecError, InvariantViolationError
from .funcalc import (
    HoloFunction,
    build_contour,
    cauchy_funcalc,
    default_contour,
    extended_funcalc,
    laurent_coeffs,
    pole_order,
    poly_eval_noncomm,
)
from .hspace import (
    HMatrix,
    HVector,
    classify,
    complex_adjoint,
    graded_decompose,
    inner,
    op_norm,
    real_adjoint,
)
from .oracle import CorpusSpec, generate, oracle_invert
from .quaternion import HAMILTON, ImaginaryUnit, Quaternion, qabs, qconj, qmul
from .spectra import in_resolvent, neumann_resolvent, resolvent, spectrum
from .spectral import (
    borel_funcalc,
    classify_by_spectrum,
    eigendecompose,
    polar_decompose,
    stone_generator,
    unitary_group,
)


__all__ = ["CheckResult", "SuiteReport", "SUITES", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    def to_doc(self):
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    spec: CorpusSpec
    checks: tuple
    oracle_points: int
    oracle_disagreements: int

    @property
    def passed(self):
        return (all(c.passed for c in self.checks)
                and self.oracle_disagreements == 0)

    def failures(self):
        return [c.name for c in self.checks if not c.passed]

    def to_doc(self):
        return {
            "suite": self.suite,
            "family": self.spec.family,
            "seed": self.spec.seed,
            "cases": self.spec.count,
            "n": self.spec.n,
            "passed": self.passed,
            "oracle_points": self.oracle_points,
            "oracle_disagreements": self.oracle_disagreements,
            "checks": [c.to_doc() for c in self.checks],
        }


class _Agg:
    """Accumulates the worst residual per check name."""

    def __init__(self):
        self._worst = {}
        self._tols = {}
        self.oracle_points = 0
        self.oracle_disagreements = 0

    def add(self, name, residual, tol):
        residual = float(residual)
        if not math.isfinite(residual):
            residual = math.inf
        if name not in self._worst or residual > self._worst[name]:
            self._worst[name] = residual
        self._tols[name] = float(tol)

    def fail(self, name, tol=0.0):
        self.add(name, math.inf, tol)

    def oracle(self, agree):
        self.oracle_points += 1
        if not agree:
            self.oracle_disagreements += 1

    def report(self, suite, spec):
        checks = tuple(CheckResult(n, self._worst[n], self._tols[n])
                       for n in self._worst)
        return SuiteReport(suite=suite, spec=spec, checks=checks,
                           oracle_points=self.oracle_points,
                           oracle_disagreements=self.oracle_disagreements)


def _force_family(spec, family):
    if spec.family != family:
        return dataclasses.replace(spec, family=family)
    return spec


def _oracle_cross_check(agg, t, z, tol=1e-8):
    """Compare main-path membership/inverse with the elimination oracle."""
    shift = HMatrix.scalar(t.shape[0], z) - t
    ref = oracle_invert(shift)
    member = bool(in_resolvent(t, z))
    if bool(ref) != member:
        agg.oracle(False)
        return
    if not ref:
        agg.oracle(True)
        return
    main = resolvent(t, z)
    scale = max(1.0, main.norm_fro())
    agg.oracle(main.distance(ref) <= tol * scale)


# ---------------------------------------------------------------------------
# quat: the algebra and its representations
# ---------------------------------------------------------------------------


def _c2_batch(q):
    w, x, y, z = (q[..., m] for m in range(4))
    out = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = w + 1j * x
    out[..., 0, 1] = y + 1j * z
    out[..., 1, 0] = -y + 1j * z
    out[..., 1, 1] = w - 1j * x
    return out


def _r4_batch(q):
    # columns of the left-multiplication matrix: L(q)[:, m] = q . e_m
    return np.einsum("na,amc->ncm", q, HAMILTON)


def suite_quat(spec, tol=None, qtol=None):
    agg = _Agg()
    rng = np.random.default_rng(spec.seed)
    count = max(spec.count, 1)
    a = rng.uniform(-1.0, 1.0, size=(count, 4))
    b = rng.uniform(-1.0, 1.0, size=(count, 4))
    ab = qmul(a, b)

    agg.add("norm-multiplicative",
            np.max(np.abs(qabs(ab) - qabs(a) * qabs(b))), 1e-12)
    agg.add("conj-antihomomorphism",
            np.max(qabs(qconj(ab) - qmul(qconj(b), qconj(a)))), 1e-12)
    ca, cb, cab = _c2_batch(a), _c2_batch(b), _c2_batch(ab)
    agg.add("complex2-homomorphism",
            np.max(np.abs(ca @ cb - cab)), 1e-12)
    agg.add("complex2-star",
            np.max(np.abs(_c2_batch(qconj(a))
                          - np.conj(np.swapaxes(ca, -1, -2)))), 1e-12)
    ra, rb, rab = _r4_batch(a), _r4_batch(b), _r4_batch(ab)
    agg.add("real4-homomorphism", np.max(np.abs(ra @ rb - rab)), 1e-12)
    agg.add("real4-star",
            np.max(np.abs(_r4_batch(qconj(a))
                          - np.swapaxes(ra, -1, -2))), 1e-12)
    agg.add("real4-determinant",
            np.max(np.abs(np.linalg.det(ra) - qabs(a) ** 4)), 1e-10)
    return agg.report("quat", spec)


# ---------------------------------------------------------------------------
# hspace: operator algebra and images
# ---------------------------------------------------------------------------


def suite_hspace(spec, tol=None, qtol=None):
    agg = _Agg()
    mats = generate(spec)
    rng = np.random.default_rng((spec.seed, 1))
    for idx, t in enumerate(mats):
        u = mats[(idx + 1) % len(mats)]
        n = t.shape[0]
        tu = t @ u
        agg.add("adjoint-antihomomorphism",
                tu.adjoint().distance(u.adjoint() @ t.adjoint()), 1e-12)
        agg.add("chiC-homomorphism",
                np.max(np.abs(complex_adjoint(tu)
                              - complex_adjoint(t) @ complex_adjoint(u))),
                1e-12)
        agg.add("chiR-homomorphism",
                np.max(np.abs(real_adjoint(tu)
                              - real_adjoint(t) @ real_adjoint(u))), 1e-12)
        x = HVector(rng.uniform(-1, 1, size=(n, 4)))
        y = HVector(rng.uniform(-1, 1, size=(n, 4)))
        agg.add("inner-adjoint",
                abs(inner(t @ x, y) - inner(x, t.adjoint() @ y)), 1e-12)
        nt = op_norm(t)
        agg.add("cstar-identity",
                abs(op_norm(t.adjoint() @ t) - nt * nt) / max(1.0, nt * nt),
                1e-9)
        g = graded_decompose(real_adjoint(t))
        agg.add("graded-roundtrip",
                np.max(np.abs(g.reconstruct() - real_adjoint(t))), 1e-10)
    return agg.report("hspace", spec)


# ---------------------------------------------------------------------------
# resolvent: identities, Neumann series, adjoint transport, oracle gate
# ---------------------------------------------------------------------------


def _sample_resolvent_point(rng, t):
    scale = max(1.0, t.max_abs())
    for _ in range(50):
        z = Quaternion(*(rng.uniform(-3.0, 3.0, size=4) * scale))
        if in_resolvent(t, z):
            return z
    raise InvariantViolationError("could not sample a resolvent point")


def suite_resolvent(spec, tol=None, qtol=None, points=10):
    agg = _Agg()
    rng = np.random.default_rng((spec.seed, 2))
    for t in generate(spec):
        zs = [_sample_resolvent_point(rng, t) for _ in range(points)]
        rs = [resolvent(t, z) for z in zs]
        n = t.shape[0]
        for k, (z, r) in enumerate(zip(zs, rs)):
            z2, r2 = zs[(k + 1) % points], rs[(k + 1) % points]
            if abs(z - z2) > 1e-9:
                lhs = r - r2
                rhs = -1.0 * (r @ (HMatrix.scalar(n, z - z2) @ r2))
                scale = max(1.0, lhs.norm_fro(), r.norm_fro() * r2.norm_fro())
                agg.add("resolvent-identity",
                        lhs.distance(rhs) / scale, 1e-9)
            agg.add("adjoint-transport",
                    r.adjoint().distance(resolvent(t.adjoint(), z.conj())),
                    1e-10)
            # Neumann: step half a convergence radius away from z
            gap = 0.5 / op_norm(r)
            direction = Quaternion(*rng.uniform(-1, 1, size=4))
            znear = z + (gap / abs(direction)) * direction
            if in_resolvent(t, znear):
                approx = neumann_resolvent(t, z, znear, terms=80)
                agg.add("neumann-partial-sum",
                        approx.distance(resolvent(t, znear)), 1e-8)
            _oracle_cross_check(agg, t, z)
    return agg.report("resolvent", spec)


# ---------------------------------------------------------------------------
# funcalc: contour calculus against the exact polynomial route
# ---------------------------------------------------------------------------


def _tri_slice_real(t):
    """Forget the imaginary parts: a real-entried triangular companion."""
    arr = np.array(t.array)
    arr[..., 1:] = 0.0
    return HMatrix(arr)


def suite_funcalc(spec, tol=None, qtol=None):
    agg = _Agg()
    spec = _force_family(spec, "upper-triangular-slice")
    fc = [0.5, -1.0, 2.0, 0.25]
    gc = [1.0, 2.0]
    f = HoloFunction.polynomial(fc)
    g = HoloFunction.polynomial(gc)
    fg = HoloFunction.polynomial(
        list(np.polynomial.polynomial.polymul(fc, gc)))
    for t in generate(spec):
        path, descriptor = default_contour(t, N=1024)
        ft = cauchy_funcalc(t, f, path=path, tol=qtol, descriptor=descriptor)
        gt = cauchy_funcalc(t, g, path=path, tol=qtol, descriptor=descriptor)
        exact = poly_eval_noncomm(t, f)
        agg.add("cauchy-vs-poly", ft.distance(exact), 1e-6)
        fgt = cauchy_funcalc(t, fg, path=path, tol=qtol,
                             descriptor=descriptor)
        agg.add("product-rule", (ft @ gt).distance(fgt), 1e-6)
        # spectral mapping through the exact route (stays triangular)
        diag_imgs = sorted((f.eval(q) for q in t.diagonal()),
                           key=lambda q: (q.w, q.x, q.y, q.z))
        diag_got = sorted(exact.diagonal(),
                          key=lambda q: (q.w, q.x, q.y, q.z))
        agg.add("spectral-mapping",
                max(abs(a - b) for a, b in zip(diag_imgs, diag_got)), 1e-8)
        # extended calculus: same function, two transform points
        pole = Quaternion(3.0, 2.0)
        far = 5.0 + 2.0 * max(abs(q) for q in t.diagonal())
        inv = HoloFunction.inverse_shift(pole)
        e1 = extended_funcalc(t, inv, Quaternion(far), tol=qtol)
        e2 = extended_funcalc(t, inv, Quaternion(0.0, -far), tol=qtol)
        agg.add("extended-a-independence", e1.distance(e2), 1e-7)
        # slice-unit independence: M versus -M
        flipped = build_contour(path.z0, path.radius,
                                ImaginaryUnit.from_quaternion(-path.M),
                                N=path.N)
        ft_flip = cauchy_funcalc(t, f, path=flipped, tol=qtol,
                                 descriptor=descriptor)
        agg.add("m-independence-slice", ft.distance(ft_flip), 1e-7)
        # real-entried companion admits any slice unit: i versus j
        tr = _tri_slice_real(t)
        path_r, desc_r = default_contour(tr, N=1024)
        out_i = cauchy_funcalc(tr, f, path=path_r, tol=qtol,
                               descriptor=desc_r)
        path_j = build_contour(path_r.z0, path_r.radius,
                               ImaginaryUnit(0.0, 1.0, 0.0), N=path_r.N)
        out_j = cauchy_funcalc(tr, f, path=path_j, tol=qtol,
                               descriptor=desc_r)
        agg.add("m-independence-real", out_i.distance(out_j), 1e-7)
        # oracle gate at two off-node contour points
        for s in (0.17, 0.61):
            ang = 2.0 * math.pi * s
            z = (path.z0 + Quaternion(math.cos(ang) * path.radius)
                 + Quaternion.from_array(
                     math.sin(ang) * path.radius * path.M.array))
            if in_resolvent(t, z):
                _oracle_cross_check(agg, t, z)
    return agg.report("funcalc", spec)


# ---------------------------------------------------------------------------
# spectral: decomposition, Borel calculus, classification
# ---------------------------------------------------------------------------


def suite_spectral(spec, tol=None, qtol=None):
    agg = _Agg()
    spec = _force_family(spec, "hermitian")
    rng = np.random.default_rng((spec.seed, 3))
    for t in generate(spec):
        n = t.shape[0]
        c = complex_adjoint(t)
        agg.add("eigenvalue-imag",
                np.max(np.abs(np.linalg.eigvals(c).imag)), 1e-10)
        d = eigendecompose(t)
        agg.add("reconstruction", d.reconstruct().distance(t), 1e-10)
        agg.add("identity-resolution",
                d.identity_sum().distance(HMatrix.identity(n)), 1e-10)
        worst = 0.0
        for a, pa in enumerate(d.pairs):
            p = pa.projector
            worst = max(worst, (p @ p).distance(p), p.distance(p.adjoint()))
            for b2, pb in enumerate(d.pairs):
                if a != b2:
                    worst = max(worst, (p @ pb.projector).max_abs())
        agg.add("projector-axioms", worst, 1e-10)
        # Borel *-homomorphism on real functions
        f = lambda z: z * z - 0.5
        g = lambda z: math.exp(-abs(z))
        ftm = borel_funcalc(t, f, decomposition=d)
        gtm = borel_funcalc(t, g, decomposition=d)
        agg.add("borel-product",
                (ftm @ gtm).distance(
                    borel_funcalc(t, lambda z: f(z) * g(z),
                                  decomposition=d)), 1e-9)
        agg.add("borel-sum",
                (ftm + gtm).distance(
                    borel_funcalc(t, lambda z: f(z) + g(z),
                                  decomposition=d)), 1e-9)
        agg.add("borel-adjoint", ftm.distance(ftm.adjoint()), 1e-9)
        x = HVector(rng.uniform(-1, 1, size=(n, 4)))
        lhs = (ftm @ x).norm() ** 2
        rhs = sum(abs(f(p.center)) ** 2 * (p.projector @ x).norm() ** 2
                  for p in d.pairs)
        agg.add("norm-identity", abs(lhs - rhs) / max(1.0, lhs), 1e-9)
        q = Quaternion(2.0 + 2.0 * max(abs(p.center) for p in d.pairs))
        rb = borel_funcalc(t, lambda z: (q - Quaternion(z)).inv(),
                           decomposition=d)
        agg.add("resolvent-consistency",
                rb.distance(resolvent(t, q)), 1e-9)
        _oracle_cross_check(agg, t, q)
        try:
            classify_by_spectrum(t)
            agg.add("classification-agreement", 0.0, 0.5)
        except InvariantViolationError:
            agg.fail("classification-agreement", 0.5)
    for family in ("unitary", "positive"):
        side = dataclasses.replace(spec, family=family)
        for t in generate(side):
            try:
                got = classify_by_spectrum(t)
                ok = got.unitary if family == "unitary" else got.positive
                agg.add("classification-agreement",
                        0.0 if ok else math.inf, 0.5)
            except InvariantViolationError:
                agg.fail("classification-agreement", 0.5)
    return agg.report("spectral", spec)


# ---------------------------------------------------------------------------
# polar: factorization quality and partial isometry
# ---------------------------------------------------------------------------


def suite_polar(spec, tol=None, qtol=None, vectors=20):
    agg = _Agg()
    rng = np.random.default_rng((spec.seed, 4))
    for t in generate(spec):
        n = t.shape[0]
        p, a = polar_decompose(t)
        scale = max(1.0, t.norm_fro())
        agg.add("pa-reconstruction", (p @ a).distance(t) / scale, 1e-8)
        flags = classify(a, tol=1e-7)
        agg.add("a-self-adjoint", 0.0 if flags.self_adjoint else math.inf,
                0.5)
        agg.add("a-positive", 0.0 if flags.positive else math.inf, 0.5)
        worst = 0.0
        for _ in range(vectors):
            x = HVector(rng.uniform(-1, 1, size=(n, 4)))
            ax = a @ x
            worst = max(worst, abs((p @ ax).norm() - ax.norm())
                        / max(1.0, ax.norm()))
        agg.add("range-isometry", worst, 1e-8)
        full_rank = bool(oracle_invert(t))
        agg.oracle(full_rank == bool(in_resolvent(t, Quaternion())))
        if full_rank:
            agg.add("unitary-factor",
                    (p.adjoint() @ p).distance(HMatrix.identity(n)), 1e-8)
    return agg.report("polar", spec)


# ---------------------------------------------------------------------------
# stone: one-parameter groups and generator recovery
# ---------------------------------------------------------------------------


def suite_stone(spec, tol=None, qtol=None):
    agg = _Agg()
    spec = _force_family(spec, "hermitian")
    grid = np.linspace(-10.0, 10.0, 20)
    for b in generate(spec):
        ug = unitary_group(b)
        m = 2 * b.shape[0]
        worst_u = max(
            float(np.linalg.norm(ug.at(tv).conj().T @ ug.at(tv) - np.eye(m)))
            for tv in grid)
        agg.add("unitarity", worst_u, 1e-9)
        worst_g = max(
            float(np.linalg.norm(ug.at(tv + sv) - ug.at(tv) @ ug.at(sv)))
            for tv, sv in zip(grid[:10], grid[10:]))
        agg.add("group-law", worst_g, 1e-9)
        agg.add("identity-at-zero",
                float(np.linalg.norm(ug.at(0.0) - np.eye(m))), 1e-12)
        rep = stone_generator(ug)
        agg.add("generator-recovery", rep.generator.distance(b), 1e-6)
        agg.add("generator-self-adjoint", rep.hermitian_residual, 1e-6)
    return agg.report("stone", spec)


# ---------------------------------------------------------------------------
# laurent: pole orders on the nilpotent-plus-scalar corpus
# ---------------------------------------------------------------------------


def _nilpotency_index(t, lam):
    """Smallest p with (T - lam I)^p exactly zero (strict upper pattern)."""
    n = t.shape[0]
    nil = t - HMatrix.scalar(n, lam)
    power = HMatrix.identity(n)
    for p in range(1, n + 1):
        power = power @ nil
        if power.max_abs() == 0.0:
            return p
    return n + 1


def suite_laurent(spec, tol=None, qtol=None):
    agg = _Agg()
    spec = _force_family(spec, "nilpotent-plus-scalar")
    for t in generate(spec):
        lam = t.entry(0, 0)
        index = _nilpotency_index(t, lam)
        try:
            got = pole_order(t, lam, 0.5, nmax=t.shape[0] + 2)
            agg.add("pole-order-equals-index", abs(got - index), 0.5)
        except HspecError:
            agg.fail("pole-order-equals-index", 0.5)
        # an annulus far from the spectrum carries no principal part
        far = lam + Quaternion(6.0 + 2.0 * abs(lam))
        lc = laurent_coeffs(t, far, 1.0, 2.0, nmax=2)
        agg.add("empty-annulus-principal",
                max(c.max_abs() for c in lc.phi), 1e-8)
        z = far + Quaternion(1.5)
        if in_resolvent(t, z):
            _oracle_cross_check(agg, t, z)
    return agg.report("laurent", spec)


SUITES = {
    "quat": suite_quat,
    "hspace": suite_hspace,
    "resolvent": suite_resolvent,
    "funcalc": suite_funcalc,
    "spectral": suite_spectral,
    "polar": suite_polar,
    "stone": suite_stone,
    "laurent": suite_laurent,
}


def run_suite(name, spec=None, tol=None, qtol=None):
    """Run one named suite on a corpus description; returns a SuiteReport."""
    if name not in SUITES:
        raise KeyError(
            f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}")
    if spec is None:
        spec = CorpusSpec()
    return SUITES[name](spec, tol=tol, qtol=qtol)
