"""Tests for resolvents, spectra, and membership."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hspec.errors import (
    DivergenceError,
    InvariantViolationError,
    MethodError,
    PreconditionError,
    SpectrumMembershipError,
)
from hspec.hspace import HMatrix, op_norm
from hspec.oracle import CorpusSpec, SingularReport, generate, oracle_invert
from hspec.quaternion import I, J, K, ONE, Quaternion
from hspec.spectra import (
    BoundReport,
    ProbeGrid,
    SpectrumDescriptor,
    SpectrumItem,
    in_resolvent,
    neumann_resolvent,
    resolvent,
    resolvent_sample,
    spectral_radius,
    spectrum,
    symmetric_resolvent_bound,
)


def rand_matrix(rng, n):
    return HMatrix(rng.uniform(-1.0, 1.0, size=(n, n, 4)))


def rand_quaternion(rng, scale=1.0):
    return Quaternion(*(scale * rng.uniform(-1.0, 1.0, size=4)))


class TestInResolvent:
    def test_scalar_i(self):
        t = HMatrix.diag([I])
        assert in_resolvent(t, Quaternion()).invertible
        assert not in_resolvent(t, I).invertible
        assert in_resolvent(t, I).rcond < 1e-12

    def test_agrees_with_oracle(self):
        rng = np.random.default_rng(31)
        t = rand_matrix(rng, 3)
        for _ in range(100):
            z = rand_quaternion(rng, scale=2.0)
            member = in_resolvent(t, z)
            inv = oracle_invert(HMatrix.scalar(3, z) - t)
            assert member.invertible == isinstance(inv, HMatrix)

    def test_condition_continuity_near_spectrum(self):
        # rcond shrinks as z approaches a spectrum point (relative to the
        # surviving well-conditioned directions)
        t = HMatrix.diag([I, Quaternion(2.0)])
        r1 = in_resolvent(t, Quaternion(0.0, 1.0 + 1e-2)).rcond
        r2 = in_resolvent(t, Quaternion(0.0, 1.0 + 1e-6)).rcond
        assert r2 < r1 < 1e-1

    def test_scalar_shift_is_perfectly_conditioned(self):
        # a 1x1 shift is |q| times an orthogonal real image: rcond stays 1
        # right up to the exact spectrum point
        t = HMatrix.diag([I])
        m = in_resolvent(t, Quaternion(0.0, 1.0 + 1e-9))
        assert m.invertible and abs(m.rcond - 1.0) < 1e-12


class TestResolvent:
    def test_nilpotent_shift(self):
        t = HMatrix.from_quaternions([[Quaternion(), ONE], [Quaternion(), Quaternion()]])
        r = resolvent(t, Quaternion(1.0))
        expect = HMatrix.from_quaternions([[ONE, ONE], [Quaternion(), ONE]])
        assert r.distance(expect) < 1e-12

    def test_zero_matrix(self):
        q = Quaternion(0.5, -1.0, 2.0, 0.0)
        r = resolvent(HMatrix.zeros(3), q)
        assert r.distance(HMatrix.scalar(3, q.inv())) < 1e-12

    def test_defining_property_two_sided(self):
        rng = np.random.default_rng(32)
        t = rand_matrix(rng, 4)
        z = Quaternion(3.0, 1.0, 0.0, -2.0)
        r = resolvent(t, z)
        shift = HMatrix.scalar(4, z) - t
        eye = HMatrix.identity(4)
        assert op_norm(shift @ r - eye) < 1e-10
        assert op_norm(r @ shift - eye) < 1e-10

    def test_singular_point_raises_with_condition(self):
        t = HMatrix.diag([I, J])
        with pytest.raises(SpectrumMembershipError) as exc:
            resolvent(t, I)
        assert exc.value.rcond is not None and exc.value.rcond < 1e-12

    def test_resolvent_identity_random(self):
        rng = np.random.default_rng(33)
        for _ in range(5):
            t = rand_matrix(rng, 3)
            z1 = rand_quaternion(rng) + Quaternion(4.0)
            z2 = rand_quaternion(rng) - Quaternion(4.0)
            r1, r2 = resolvent(t, z1), resolvent(t, z2)
            lhs = r2 - r1
            rhs = r1 @ HMatrix.scalar(3, z1 - z2) @ r2
            scale = max(op_norm(r1), op_norm(r2)) ** 2
            assert op_norm(lhs - rhs) < 1e-9 * scale

    def test_scalar_resolvent_identity_tight(self):
        q = Quaternion(0.3, -0.7, 0.1, 0.9)
        t = HMatrix.diag([q])
        y, z = Quaternion(2.0, 1.0, 0.0, 0.0), Quaternion(-1.0, 0.0, 3.0, 0.0)
        xy, xz = resolvent(t, y), resolvent(t, z)
        lhs = xz - xy
        rhs = xz @ HMatrix.scalar(1, y - z) @ xy
        assert op_norm(lhs - rhs) < 1e-12

    def test_adjoint_transport(self):
        rng = np.random.default_rng(34)
        t = rand_matrix(rng, 4)
        z = Quaternion(0.5, 2.0, -1.0, 0.25)
        lhs = resolvent(t, z).adjoint()
        rhs = resolvent(t.adjoint(), z.conj())
        assert lhs.distance(rhs) < 1e-10

    def test_sample_carries_condition(self):
        t = HMatrix.diag([I, Quaternion(2.0)])
        s = resolvent_sample(t, Quaternion(0.0, 1.0 + 1e-3))
        assert s.condition > 1e2
        shift = HMatrix.scalar(2, s.z) - t
        assert op_norm(shift @ s.value - HMatrix.identity(2)) < 1e-12 * s.condition


class TestNeumann:
    def test_geometric_series_scalar(self):
        t = HMatrix.zeros(1)
        out = neumann_resolvent(t, Quaternion(1.0), Quaternion(0.5), 60)
        assert abs(out.entry(0, 0) - Quaternion(2.0)) < 1e-12

    def test_same_point_is_single_term(self):
        rng = np.random.default_rng(35)
        t = rand_matrix(rng, 3)
        z0 = Quaternion(5.0, 1.0, 0.0, 0.0)
        out = neumann_resolvent(t, z0, z0, 7)
        assert out.distance(resolvent(t, z0)) == 0.0

    def test_hermitian_partial_sum_close(self):
        rng = np.random.default_rng(36)
        for t in generate(CorpusSpec(seed=36, count=3, family="hermitian")):
            z0 = Quaternion(6.0, 1.0, 1.0, 0.0)
            r0 = resolvent(t, z0)
            step = 0.4 / op_norm(r0)
            z = z0 - Quaternion(step)
            approx = neumann_resolvent(t, z0, z, 80)
            assert op_norm(approx - resolvent(t, z)) < 1e-8

    def test_contraction_violation_raises(self):
        t = HMatrix.zeros(1)
        with pytest.raises(DivergenceError):
            neumann_resolvent(t, Quaternion(1.0), Quaternion(2.5), 10)

    def test_needs_a_term(self):
        with pytest.raises(PreconditionError):
            neumann_resolvent(HMatrix.zeros(1), Quaternion(1.0), Quaternion(1.0), 0)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_openness_of_resolvent_set(self, seed):
        rng = np.random.default_rng(seed)
        t = rand_matrix(rng, 3)
        z0 = Quaternion(4.0, 1.0, -1.0, 0.5)
        r0 = resolvent(t, z0)
        delta = rand_quaternion(rng)
        delta = delta * (0.5 / (op_norm(r0) * max(abs(delta), 1e-12)))
        assert in_resolvent(t, z0 + delta).invertible


class TestSpectrum:
    def test_triangular_diag_example(self):
        t = HMatrix.diag([I, Quaternion(0.0, 0.0, 2.0, 0.0)])
        d = spectrum(t, "triangular-exact")
        assert d.method == "triangular-exact"
        assert [(it.center, it.radius, it.multiplicity) for it in d.items] == [
            (0.0, 1.0, 1), (0.0, 2.0, 1)]
        assert d.representatives[0] == I
        assert abs(spectral_radius(d) - 2.0) < 1e-15

    def test_triangular_rejects_full_matrix(self):
        rng = np.random.default_rng(37)
        with pytest.raises(MethodError):
            spectrum(rand_matrix(rng, 3), "triangular-exact")

    def test_triangular_accepts_lower(self):
        t = HMatrix.from_quaternions([[I, Quaternion()], [ONE, J]])
        d = spectrum(t, "triangular")
        assert d.total_multiplicity() == 2

    def test_triangular_multiplicity_clusters(self):
        t = HMatrix.diag([I, I, Quaternion(2.0)])
        d = spectrum(t, "triangular-exact")
        mults = {(it.center, it.radius): it.multiplicity for it in d.items}
        assert mults == {(0.0, 1.0): 2, (2.0, 0.0): 1}
        kinds = {it.kind for it in d.items}
        assert kinds == {"sphere", "point"}

    def test_adjoint_spectrum_is_conjugate(self):
        rng = np.random.default_rng(38)
        a = rng.uniform(-1, 1, size=(3, 3, 4))
        a[np.tril_indices(3, k=-1)] = 0.0
        t = HMatrix(a)
        d = spectrum(t, "triangular-exact")
        dstar = spectrum(t.adjoint(), "triangular-exact")
        got = sorted((it.center, it.radius) for it in dstar.items)
        want = sorted((q.conj().w, float(np.linalg.norm(q.conj().imag)))
                      for q in d.representatives)
        assert np.allclose(got, want, atol=1e-15)

    def test_right_chic_hermitian_antidiagonal(self):
        t = HMatrix.from_quaternions([[Quaternion(), J], [-J, Quaternion()]])
        d = spectrum(t, "right-chiC")
        assert [(it.center, it.radius, it.multiplicity, it.kind) for it in d.items] == [
            (-1.0, 0.0, 1, "point"), (1.0, 0.0, 1, "point")]

    def test_right_chic_hermitian_real_without_shortcut(self):
        # even through the general eigensolver the spectrum stays real
        for t in generate(CorpusSpec(seed=39, count=4, family="hermitian")):
            d = spectrum(t, "right-chiC", force_general=True)
            assert all(it.radius < 1e-10 for it in d.items)
            assert d.total_multiplicity() == t.n

    def test_scalar_matrix_all_methods(self):
        lam = 0.5
        t = HMatrix.scalar(3, Quaternion(lam))
        for method in ("triangular-exact", "right-chiC"):
            d = spectrum(t, method)
            assert len(d.items) == 1
            it = d.items[0]
            assert (it.center, it.radius, it.multiplicity, it.kind) == (lam, 0.0, 3, "point")
        grid = ProbeGrid(M=I, alpha_min=0.0, alpha_max=1.0, beta_min=0.0,
                         beta_max=0.0, num_alpha=5, num_beta=1)
        d = spectrum(t, "probe", grid=grid)
        assert len(d.items) == 1
        assert d.items[0].multiplicity == 3
        assert d.items[0].center == lam

    def test_probe_sees_left_spectrum_only(self):
        # diag(i, 2j): the left spectrum is the two exact points i and 2j,
        # not their similarity spheres
        t = HMatrix.diag([I, Quaternion(0.0, 0.0, 2.0, 0.0)])
        grid_i = ProbeGrid(M=I, alpha_min=0.0, alpha_max=0.0, beta_min=0.0,
                           beta_max=2.0, num_alpha=1, num_beta=5)
        hits = spectrum(t, "probe", grid=grid_i)
        assert [(it.center, it.radius) for it in hits.items] == [(0.0, 1.0)]
        grid_j = ProbeGrid(M=J, alpha_min=0.0, alpha_max=0.0, beta_min=0.0,
                           beta_max=2.0, num_alpha=1, num_beta=5)
        hits = spectrum(t, "probe", grid=grid_j)
        assert [(it.center, it.radius) for it in hits.items] == [(0.0, 2.0)]

    def test_probe_needs_grid(self):
        with pytest.raises(PreconditionError):
            spectrum(HMatrix.identity(2), "probe")

    def test_unknown_method(self):
        with pytest.raises(MethodError):
            spectrum(HMatrix.identity(2), "secular")

    def test_descriptor_serialization(self):
        t = HMatrix.diag([I, Quaternion(2.0)])
        doc = spectrum(t, "triangular-exact").to_doc()
        assert doc["method"] == "triangular-exact"
        assert doc["items"] == [
            {"center": 0.0, "radius": 1.0, "multiplicity": 1, "kind": "sphere"},
            {"center": 2.0, "radius": 0.0, "multiplicity": 1, "kind": "point"},
        ]


class TestSpectralRadius:
    def test_points(self):
        d = SpectrumDescriptor(items=(SpectrumItem(1.0, 0.0, 1),
                                      SpectrumItem(4.0, 0.0, 1)), method="probe")
        assert spectral_radius(d) == 4.0

    def test_unit_sphere(self):
        d = SpectrumDescriptor(items=(SpectrumItem(0.0, 1.0, 1),), method="right-chiC")
        assert spectral_radius(d) == 1.0

    def test_empty_raises(self):
        with pytest.raises(InvariantViolationError):
            spectral_radius(SpectrumDescriptor(items=(), method="probe"))

    def test_gelfand_consistency_for_normal(self):
        # for normal T the sphere spectrum radius matches the operator norm
        for t in generate(CorpusSpec(seed=40, count=3, family="normal")):
            d = spectrum(t, "right-chiC")
            assert abs(spectral_radius(d) - op_norm(t)) < 1e-9


class TestSymmetricBound:
    def test_zero_operator_equality_case(self):
        rep = symmetric_resolvent_bound(HMatrix.zeros(1), I, samples=50)
        assert abs(rep.ratio_min - 1.0) < 1e-12
        assert rep.holds

    def test_scalar_five(self):
        rep = symmetric_resolvent_bound(HMatrix.diag([Quaternion(5.0)]), I, samples=50)
        assert abs(rep.ratio_min - math.sqrt(26.0)) < 1e-12

    def test_real_symmetric_holds(self):
        rng = np.random.default_rng(41)
        a = Quaternion(1.0, 0.0, 2.0, 0.0)
        for _ in range(5):
            g = rng.uniform(-1, 1, size=(4, 4))
            t = HMatrix.from_real(g + g.T)
            rep = symmetric_resolvent_bound(t, a, samples=100)
            assert rep.holds

    def test_quaternionic_left_spectrum_breaks_the_bound(self):
        # a self-adjoint matrix whose left spectrum contains i: the sampled
        # ratio drops well below one, which the report surfaces as data
        t = HMatrix.from_quaternions([[Quaternion(), J], [-J, Quaternion()]])
        rep = symmetric_resolvent_bound(t, I, samples=500)
        assert rep.ratio_min < 1.0
        assert not rep.holds

    def test_preconditions(self):
        rng = np.random.default_rng(42)
        with pytest.raises(PreconditionError):
            symmetric_resolvent_bound(rand_matrix(rng, 3), I)  # not self-adjoint
        with pytest.raises(PreconditionError):
            symmetric_resolvent_bound(HMatrix.zeros(2), Quaternion(3.0))  # real a
