"""Tests for the contour functional calculus, power series, and Laurent data."""

import math

import numpy as np
import pytest
import scipy.linalg

from hspec.errors import (
    ContourError,
    DivergenceError,
    EmptySpectralSetError,
    InconclusiveError,
    MethodError,
    PreconditionError,
)
from hspec.funcalc import (
    Arc,
    ContourPath,
    HoloFunction,
    build_contour,
    cauchy_funcalc,
    default_contour,
    extended_funcalc,
    laurent_coeffs,
    pole_order,
    poly_eval_noncomm,
    slice_unit_of,
)
from hspec.hspace import (
    HMatrix,
    complex_adjoint,
    from_complex_adjoint,
    op_norm,
)
from hspec.oracle import CorpusSpec, generate
from hspec.quaternion import I, J, K, ONE, ImaginaryUnit, Quaternion, qinv, qmul
from hspec.spectra import resolvent, spectrum


def tri_slice(rng, n=3):
    a = rng.uniform(-1.0, 1.0, size=(n, n, 4))
    a[..., 2:] = 0.0
    a[np.tril_indices(n, k=-1)] = 0.0
    return HMatrix(a)


def sandwich(f, a, c):
    """a * f * c for a chain polynomial f."""
    terms = []
    for term in f.terms:
        (b0, k0), rest = term[0], term[1:]
        new = [(a * b0, k0)] + list(rest) + [(c, 0)]
        terms.append(tuple(new))
    return HoloFunction.power_series(terms)


class TestContour:
    def test_node_placement(self):
        path = build_contour(Quaternion(), 1.0, I, N=512)
        zeta, _ = path.nodes()
        assert abs(Quaternion.from_array(zeta[128]) - I) < 1e-15

    def test_closed_path_weights_cancel(self):
        path = build_contour(Quaternion(2.0, 1.0), 3.0, J, N=64)
        _, w = path.nodes()
        assert np.max(np.abs(w.sum(axis=0))) < 1e-12

    def test_winding_number(self):
        path = build_contour(Quaternion(0.5), 1.0, I, N=512)
        zeta, w = path.nodes()
        vals = qmul(qinv(zeta - path.z0.array), w).sum(axis=0)
        winding = Quaternion.from_array(qmul(vals / (2.0 * math.pi),
                                             path.M.inv().array))
        assert abs(winding - ONE) < 1e-12

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            build_contour(Quaternion(), -1.0, I)
        with pytest.raises(PreconditionError):
            build_contour(Quaternion(), 1.0, I, N=8)

    def test_multi_arc_refused_by_quadrature(self):
        path = ContourPath(z0=Quaternion(), M=I,
                           arcs=(Arc(1.0, 0.0, 0.5), Arc(2.0, 0.5, 1.0)), N=64)
        with pytest.raises(MethodError):
            path.nodes()

    def test_normalizes_m(self):
        path = build_contour(Quaternion(), 1.0, Quaternion(0.0, 0.0, 2.0))
        assert abs(path.M - J) < 1e-15


class TestHoloFunction:
    def test_chain_evaluation_exact(self):
        f = HoloFunction.power_series([((I, 1), (J, 1))])
        assert f.eval(K) == I * K * J * K

    def test_polynomial_eval(self):
        f = HoloFunction.polynomial([Quaternion(1.0), Quaternion(0.0, 2.0)])
        z = Quaternion(0.5, 0.0, 1.0, 0.0)
        assert abs(f.eval(z) - (ONE + Quaternion(0.0, 2.0) * z)) < 1e-15

    def test_star_pointwise(self):
        f = HoloFunction.power_series([((I, 2),), ((J, 1), (K, 3))])
        fs = f.star()
        for z in (Quaternion(0.3, -1.0, 0.7, 0.2), Quaternion(1.0, 2.0, 0.0, -1.0)):
            assert abs(fs.eval(z) - f.eval(z.conj()).conj()) < 1e-12

    def test_star_of_exp_and_inverse_shift(self):
        assert HoloFunction.exponential().star().kind == "exp"
        g = HoloFunction.inverse_shift(I).star()
        assert g.pole == -I

    def test_constant_is_holomorphic_at_infinity(self):
        f = HoloFunction.constant(Quaternion(2.0, 1.0))
        assert f.at_infinity == Quaternion(2.0, 1.0)
        assert HoloFunction.polynomial([1.0, 1.0]).at_infinity is None


class TestCauchy:
    def test_identity_function_scalar_i(self):
        out = cauchy_funcalc(HMatrix.diag([I]),
                             HoloFunction.polynomial([0.0, 1.0]),
                             path=build_contour(I, 0.5, I, N=64))
        assert abs(out.entry(0, 0) - I) < 1e-10

    def test_square_on_slice_jordan_block(self):
        t = HMatrix.from_quaternions([[I, ONE], [Quaternion(), I]])
        out = cauchy_funcalc(t, HoloFunction.polynomial([0.0, 0.0, 1.0]))
        expect = HMatrix.from_quaternions(
            [[Quaternion(-1.0), Quaternion(0.0, 2.0)],
             [Quaternion(), Quaternion(-1.0)]])
        assert out.distance(expect) < 1e-10

    def test_exp_of_zero(self):
        out = cauchy_funcalc(HMatrix.zeros(2), HoloFunction.exponential())
        assert out.distance(HMatrix.identity(2)) < 1e-12

    def test_exp_matches_library_on_slice_corpus(self):
        rng = np.random.default_rng(50)
        for _ in range(3):
            t = tri_slice(rng)
            out = cauchy_funcalc(t, HoloFunction.exponential())
            ref = from_complex_adjoint(scipy.linalg.expm(complex_adjoint(t)))
            assert out.distance(ref) < 1e-9

    def test_agrees_with_direct_polynomial(self):
        rng = np.random.default_rng(51)
        f = HoloFunction.polynomial([0.5, -1.0, 2.0, 0.25])
        for _ in range(3):
            t = tri_slice(rng)
            quad = cauchy_funcalc(t, f)
            exact = poly_eval_noncomm(t, f)
            assert quad.distance(exact) < 1e-7

    def test_path_independence(self):
        rng = np.random.default_rng(52)
        t = tri_slice(rng)
        f = HoloFunction.polynomial([0.0, 0.0, 1.0])
        small, _ = default_contour(t)
        big = build_contour(small.z0 + Quaternion(0.1, 0.2), small.radius + 2.0,
                            small.M, N=1024)
        out1 = cauchy_funcalc(t, f, path=small)
        out2 = cauchy_funcalc(t, f, path=big)
        assert out1.distance(out2) < 1e-7

    def test_m_sign_independence_on_slice_corpus(self):
        rng = np.random.default_rng(53)
        t = tri_slice(rng)
        f = HoloFunction.polynomial([1.0, 0.0, 1.0])
        base, _ = default_contour(t)
        flipped = build_contour(base.z0, base.radius,
                                ImaginaryUnit.from_quaternion(-base.M), N=base.N)
        out1 = cauchy_funcalc(t, f, path=base)
        out2 = cauchy_funcalc(t, f, path=flipped)
        assert out1.distance(out2) < 1e-7

    def test_m_independence_real_entried(self):
        rng = np.random.default_rng(54)
        g = rng.uniform(-1.0, 1.0, size=(3, 3))
        t = HMatrix.from_real(g)
        f = HoloFunction.polynomial([0.5, 1.0, -2.0])
        d = spectrum(t, "right-chiC")
        pts = [Quaternion(it.center, it.radius) for it in d.items]
        center = Quaternion(float(np.mean([p.w for p in pts])))
        r = 1.4 * max(abs(p - center) for p in pts) + 0.6
        out_i = cauchy_funcalc(t, f, path=build_contour(center, r, I))
        out_j = cauchy_funcalc(t, f, path=build_contour(center, r, J))
        assert out_i.distance(out_j) < 1e-7
        assert out_i.distance(poly_eval_noncomm(t, f)) < 1e-7

    def test_linearity_additive_and_sandwich(self):
        rng = np.random.default_rng(55)
        t = tri_slice(rng)
        f = HoloFunction.polynomial([0.0, 1.0, 0.5])
        g = HoloFunction.polynomial([1.0, 0.0, 0.0, -0.75])
        both = HoloFunction.power_series(list(f.terms) + list(g.terms))
        lhs = cauchy_funcalc(t, both)
        rhs = cauchy_funcalc(t, f) + cauchy_funcalc(t, g)
        assert lhs.distance(rhs) < 1e-7
        # constants: arbitrary on the left, slice-confined on the right
        a = Quaternion(0.3, -1.0, 2.0, 0.7)
        c = Quaternion(0.5, -0.25)
        lhs2 = cauchy_funcalc(t, sandwich(f, a, c))
        rhs2 = (HMatrix.scalar(3, a) @ cauchy_funcalc(t, f)
                @ HMatrix.scalar(3, c))
        assert lhs2.distance(rhs2) < 1e-7

    def test_product_rule_real_coefficients(self):
        rng = np.random.default_rng(56)
        fc = [0.5, -1.0, 0.25]
        gc = [1.0, 2.0]
        prod = np.polynomial.polynomial.polymul(fc, gc)
        f, g = HoloFunction.polynomial(fc), HoloFunction.polynomial(gc)
        fg = HoloFunction.polynomial(list(prod))
        for _ in range(3):
            t = tri_slice(rng)
            path, d = default_contour(t, N=2048)
            lhs = (cauchy_funcalc(t, f, path=path)
                   @ cauchy_funcalc(t, g, path=path))
            rhs = cauchy_funcalc(t, fg, path=path)
            assert op_norm(lhs - rhs) < 1e-6

    def test_spectral_mapping_triangular(self):
        rng = np.random.default_rng(57)
        f = HoloFunction.polynomial([1.0, 0.0, 2.0])
        t = tri_slice(rng, n=4)
        ft = poly_eval_noncomm(t, f)
        mapped = sorted((f.eval(q).w, abs(f.eval(q))) for q in
                        spectrum(t, "triangular-exact").representatives
                        for _ in range(1))
        got = sorted((q.w, abs(q)) for q in
                     spectrum(ft, "triangular-exact").representatives)
        # compare multisets of diagonal images
        diag_imgs = sorted([f.eval(q) for q in t.diagonal()],
                           key=lambda q: (q.w, q.x, q.y, q.z))
        diag_got = sorted(ft.diagonal(), key=lambda q: (q.w, q.x, q.y, q.z))
        assert all(abs(a - b) < 1e-8 for a, b in zip(diag_imgs, diag_got))
        assert len(got) == len(mapped)

    def test_composition_real_polynomials(self):
        # exact route on Hermitian input; the coefficient composition is the
        # thing under test
        P = np.polynomial.Polynomial
        f, g = P([0.5, 1.0, 0.25]), P([1.0, -2.0])
        comp = g(f)
        hf = HoloFunction.polynomial(list(f.coef))
        hg = HoloFunction.polynomial(list(g.coef))
        hcomp = HoloFunction.polynomial(list(comp.coef))
        for t in generate(CorpusSpec(seed=58, count=3, family="hermitian")):
            staged = poly_eval_noncomm(poly_eval_noncomm(t, hf), hg)
            direct = poly_eval_noncomm(t, hcomp)
            assert staged.distance(direct) < 1e-6

    def test_composition_through_contour_on_slice(self):
        rng = np.random.default_rng(59)
        P = np.polynomial.Polynomial
        f, g = P([0.0, 1.0, 0.5]), P([1.0, 1.0])
        t = tri_slice(rng)
        stage1 = cauchy_funcalc(t, HoloFunction.polynomial(list(f.coef)))
        staged = cauchy_funcalc(stage1, HoloFunction.polynomial(list(g.coef)))
        direct = cauchy_funcalc(t, HoloFunction.polynomial(list(g(f).coef)))
        assert staged.distance(direct) < 1e-6

    def test_adjoint_rule_exact_route(self):
        rng = np.random.default_rng(60)
        t = HMatrix(rng.uniform(-1, 1, size=(3, 3, 4)))
        f = HoloFunction.power_series([((I, 2),), ((Quaternion(0.5, 0, 1), 1),)])
        lhs = poly_eval_noncomm(t.adjoint(), f.star())
        rhs = poly_eval_noncomm(t, f).adjoint()
        assert lhs.distance(rhs) < 1e-12

    def test_quadrature_doubling_converged(self):
        rng = np.random.default_rng(61)
        t = tri_slice(rng)
        f = HoloFunction.exponential()
        path, d = default_contour(t, N=1024)
        from hspec.funcalc import _cauchy_once

        a = _cauchy_once(t, f, path, 1024)
        b = _cauchy_once(t, f, path, 2048)
        assert a.distance(b) < 1e-8

    def test_enclosure_violation(self):
        t = HMatrix.diag([I])
        with pytest.raises(PreconditionError):
            cauchy_funcalc(t, HoloFunction.exponential(),
                           path=build_contour(Quaternion(5.0), 0.5, I))

    def test_spectrum_on_contour_rejected(self):
        t = HMatrix.diag([I])
        # radius-1 circle around 0 passes through i exactly: inside the
        # safety margin, so the declared-spectrum check fires
        with pytest.raises(PreconditionError):
            cauchy_funcalc(t, HoloFunction.exponential(),
                           path=build_contour(Quaternion(), 1.0, I, N=64))

    def test_node_guard_backstops_incomplete_descriptor(self):
        from hspec.spectra import SpectrumDescriptor, SpectrumItem

        t = HMatrix.diag([I])
        # a descriptor that undersells the spectrum passes the enclosure
        # check, so the per-node conditioning guard has to catch the hit
        bogus = SpectrumDescriptor(
            items=(SpectrumItem(0.0, 0.0, 1),), method="triangular-exact",
            representatives=(Quaternion(),))
        with pytest.raises(ContourError):
            cauchy_funcalc(t, HoloFunction.exponential(),
                           path=build_contour(Quaternion(), 1.0, I, N=64),
                           descriptor=bogus)


class TestPolyEval:
    def test_identity_series(self):
        rng = np.random.default_rng(62)
        t = HMatrix(rng.uniform(-1, 1, size=(3, 3, 4)))
        f = HoloFunction.polynomial([0.0, 1.0])
        assert poly_eval_noncomm(t, f).distance(t) == 0.0

    def test_square(self):
        t = HMatrix.from_quaternions([[I, ONE], [Quaternion(), I]])
        out = poly_eval_noncomm(t, HoloFunction.polynomial([0.0, 0.0, 1.0]))
        assert out.distance(t @ t) < 1e-15

    def test_scalar_monomial_chain(self):
        out = poly_eval_noncomm(HMatrix.diag([K]),
                                HoloFunction.power_series([((I, 1), (J, 1))]))
        assert out.entry(0, 0) == K

    def test_radius_certificate(self):
        f = HoloFunction.power_series([((ONE, 1),)], radius=0.5)
        with pytest.raises(DivergenceError):
            poly_eval_noncomm(HMatrix.diag([Quaternion(1.0)]), f)
        ok = poly_eval_noncomm(HMatrix.diag([Quaternion(0.25)]), f)
        assert abs(ok.entry(0, 0) - Quaternion(0.25)) < 1e-15

    def test_rejects_exp(self):
        with pytest.raises(MethodError):
            poly_eval_noncomm(HMatrix.zeros(1), HoloFunction.exponential())


class TestExtended:
    def test_constant(self):
        out = extended_funcalc(HMatrix.diag([I, J]),
                               HoloFunction.constant(Quaternion(2.5)),
                               Quaternion(5.0))
        assert out.distance(HMatrix.scalar(2, Quaternion(2.5))) == 0.0

    def test_inverse_shift_same_point(self):
        rng = np.random.default_rng(63)
        t = tri_slice(rng)
        a = Quaternion(4.0)
        out = extended_funcalc(t, HoloFunction.inverse_shift(a), a)
        ref = -1.0 * resolvent(t, a)
        assert out.distance(ref) < 1e-9

    def test_inverse_shift_other_point(self):
        rng = np.random.default_rng(64)
        t = tri_slice(rng)
        c = Quaternion(3.0, 2.0)
        out = extended_funcalc(t, HoloFunction.inverse_shift(c), Quaternion(5.0))
        ref = -1.0 * resolvent(t, c)
        assert out.distance(ref) < 1e-9

    def test_a_independence(self):
        rng = np.random.default_rng(65)
        t = tri_slice(rng)
        f = HoloFunction.inverse_shift(Quaternion(3.0, 2.0))
        out1 = extended_funcalc(t, f, Quaternion(5.0))
        out2 = extended_funcalc(t, f, Quaternion(0.0, -4.0))
        assert out1.distance(out2) < 1e-7

    def test_requires_value_at_infinity(self):
        with pytest.raises(PreconditionError):
            extended_funcalc(HMatrix.zeros(1), HoloFunction.exponential(),
                             Quaternion(1.0))

    def test_rejects_a_in_spectrum(self):
        with pytest.raises(PreconditionError):
            extended_funcalc(HMatrix.diag([I]),
                             HoloFunction.inverse_shift(Quaternion(2.0)), I)

    def test_pole_spectrum_collision(self):
        t = HMatrix.diag([Quaternion(0.5), Quaternion(-0.5)])
        f = HoloFunction.inverse_shift(Quaternion())  # pole at 0, inside spread
        with pytest.raises(ContourError):
            extended_funcalc(t, f, Quaternion(5.0))


class TestLaurent:
    def test_nilpotent_coefficients(self):
        t = HMatrix.from_quaternions([[Quaternion(), ONE],
                                      [Quaternion(), Quaternion()]])
        lc = laurent_coeffs(t, Quaternion(), 0.5, 1.5, nmax=3)
        assert lc.phi[0].distance(HMatrix.identity(2)) < 1e-10
        assert lc.phi[1].distance(t) < 1e-10
        assert lc.phi[2].max_abs() < 1e-12
        assert lc.phi[3].max_abs() < 1e-12

    def test_simple_pole(self):
        lc = laurent_coeffs(HMatrix.zeros(1), Quaternion(), 0.5, 1.5, nmax=2)
        assert lc.phi[0].distance(HMatrix.identity(1)) < 1e-12
        assert lc.phi[1].max_abs() < 1e-12

    def test_spectrum_free_disc_vanishes(self):
        lc = laurent_coeffs(HMatrix.diag([Quaternion(5.0)]), Quaternion(),
                            1.0, 2.0, M=I, nmax=3)
        assert all(c.max_abs() < 1e-8 for c in lc.phi)

    def test_reconstruction_on_annulus(self):
        lam, mu = Quaternion(0.1, 0.2), Quaternion(4.0, 1.0)
        d = HMatrix.diag([lam, mu])
        lc = laurent_coeffs(d, Quaternion(), 0.6, 2.5, nmax=25)
        z = Quaternion(0.0, 1.4)
        assert lc.resolvent_at(z).distance(resolvent(d, z)) < 1e-9

    def test_annulus_through_spectrum_rejected(self):
        with pytest.raises(ContourError):
            laurent_coeffs(HMatrix.diag([Quaternion(1.0)]), Quaternion(),
                           0.5, 1.5, M=I, nmax=2)

    def test_needs_slice_unit_for_generic_matrix(self):
        rng = np.random.default_rng(66)
        t = HMatrix(rng.uniform(-1, 1, size=(2, 2, 4)))
        with pytest.raises(MethodError):
            laurent_coeffs(t, Quaternion(10.0), 0.5, 1.0, nmax=1)


class TestPoleOrder:
    def test_nilpotent_index_two(self):
        t = HMatrix.from_quaternions([[Quaternion(), ONE],
                                      [Quaternion(), Quaternion()]])
        assert pole_order(t, Quaternion(), 0.5) == 2

    def test_simple(self):
        assert pole_order(HMatrix.zeros(1), Quaternion(), 0.5) == 1

    def test_empty_disc(self):
        with pytest.raises(EmptySpectralSetError):
            pole_order(HMatrix.diag([Quaternion(1.0)]), Quaternion(), 0.5)

    def test_index_three_nilpotent(self):
        a = np.zeros((3, 3, 4))
        a[0, 1, 0] = a[1, 2, 0] = 1.0
        t = HMatrix(a)
        assert pole_order(t, Quaternion(), 0.5) == 3

    def test_inconclusive_when_window_too_small(self):
        a = np.zeros((3, 3, 4))
        a[0, 1, 0] = a[1, 2, 0] = 1.0
        t = HMatrix(a)
        with pytest.raises(InconclusiveError):
            pole_order(t, Quaternion(), 0.5, nmax=1)

    def test_separates_isolated_part(self):
        # disc centered at the eigenvalue 0.2i; 5 stays outside: order 1
        t = HMatrix.diag([Quaternion(0.0, 0.2), Quaternion(5.0)])
        assert pole_order(t, Quaternion(0.0, 0.2), 0.6) == 1

    def test_center_must_carry_the_singularity(self):
        # 0.2i is inside the disc but the expansion center 0 is not the
        # singular point, so the principal tail never terminates
        t = HMatrix.diag([Quaternion(0.0, 0.2), Quaternion(5.0)])
        with pytest.raises(InconclusiveError):
            pole_order(t, Quaternion(), 0.6, nmax=4)


class TestSliceUnit:
    def test_detects_slice(self):
        rng = np.random.default_rng(67)
        t = tri_slice(rng)
        m = slice_unit_of(t)
        assert m is not None and abs(abs(m.x) - 1.0) < 1e-12

    def test_real_matrix_defaults_to_i(self):
        assert slice_unit_of(HMatrix.from_real(np.eye(2))) == I

    def test_generic_matrix_is_not_confined(self):
        rng = np.random.default_rng(68)
        assert slice_unit_of(HMatrix(rng.uniform(-1, 1, size=(2, 2, 4)))) is None

    def test_tilted_slice(self):
        m = ImaginaryUnit(1.0, 1.0, 0.0)
        q = Quaternion(0.5) + Quaternion.from_array(0.7 * m.array)
        t = HMatrix.diag([q, q * q])
        got = slice_unit_of(t)
        assert got is not None and min(abs(got - m), abs(got - (-m))) < 1e-12
