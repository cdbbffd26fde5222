import cmath
import json
import math

import numpy as np
import pytest

from anosovlab import catmap, weyl
from anosovlab.weyl import StateFunctional, WeylPolynomial

from conftest import max_coeff, random_polynomial

W = WeylPolynomial.generator
GAMMA = weyl.DEFAULT_GAMMA


def oracle_mul(a_terms, b_terms, gamma):
    """Independent dict-based twisted product (no shared code with weyl_mul)."""
    out = {}
    for (n1, n2), ca in a_terms.items():
        for (m1, m2), cb in b_terms.items():
            kappa = n1 * m2 - n2 * m1
            key = (n1 + m1, n2 + m2)
            out[key] = out.get(key, 0.0) + ca * cb * cmath.exp(1j * gamma * kappa)
    return {k: v for k, v in out.items() if abs(v) > 1e-15}


class TestProduct:
    def test_single_generator_phase(self):
        prod = W((1, 0)) * W((0, 1))
        assert prod.terms() == {(1, 1): pytest.approx(cmath.exp(1j * GAMMA))}

    def test_inverse_pair_gives_identity(self):
        for nu in [(3, -2), (1, 1), (-7, 4)]:
            prod = W(nu) * W((-nu[0], -nu[1]))
            assert prod.terms() == {(0, 0): 1.0 + 0.0j}

    def test_twisted_commutation(self):
        nu, nu_p = (2, -1), (1, 3)
        kappa = nu[0] * nu_p[1] - nu[1] * nu_p[0]
        lhs = W(nu) * W(nu_p)
        rhs = cmath.exp(2j * GAMMA * kappa) * (W(nu_p) * W(nu))
        assert max_coeff(lhs - rhs) <= 1e-15

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(25):
            a = random_polynomial(rng, max_support=12, max_index=8)
            b = random_polynomial(rng, max_support=12, max_index=8)
            got = (a * b).terms()
            want = oracle_mul(a.terms(), b.terms(), GAMMA)
            assert set(got) == set(want)
            for key in want:
                assert got[key] == pytest.approx(want[key], abs=1e-12)

    def test_associative(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            a = random_polynomial(rng, 10, 10)
            b = random_polynomial(rng, 10, 10)
            c = random_polynomial(rng, 10, 10)
            assert max_coeff((a * b) * c - a * (b * c)) <= 1e-12

    def test_distributive_exact(self):
        rng = np.random.default_rng(23)
        a = random_polynomial(rng, 8, 6)
        b = random_polynomial(rng, 8, 6)
        c = random_polynomial(rng, 8, 6)
        assert max_coeff(a * (b + c) - (a * b + a * c)) <= 1e-14

    def test_gamma_mismatch_rejected(self):
        with pytest.raises(ValueError, match="deformation"):
            W((1, 0), gamma=0.1) * W((0, 1), gamma=0.2)
        with pytest.raises(ValueError, match="deformation"):
            W((1, 0), gamma=0.1) + W((0, 1), gamma=0.2)

    def test_nan_gamma_rejected(self):
        with pytest.raises(ValueError):
            W((1, 0), gamma=float("nan"))

    def test_index_overflow_rejected(self):
        with pytest.raises(OverflowError):
            W((2 ** 31, 0))


class TestAdjoint:
    def test_single_term(self):
        a = (2.0 - 3.0j) * W((4, -1))
        assert a.adjoint().terms() == {(-4, 1): (2.0 + 3.0j)}

    def test_antihomomorphism_on_generators(self):
        lhs = (W((1, 0)) * W((0, 1))).adjoint()
        rhs = W((0, 1)).adjoint() * W((1, 0)).adjoint()
        assert max_coeff(lhs - rhs) <= 1e-15

    def test_antihomomorphism_random(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            a = random_polynomial(rng, 10, 10)
            b = random_polynomial(rng, 10, 10)
            assert max_coeff((a * b).adjoint() - b.adjoint() * a.adjoint()) <= 1e-12

    def test_involutive(self):
        rng = np.random.default_rng(32)
        a = random_polynomial(rng, 10, 10)
        again = a.adjoint().adjoint()
        assert np.array_equal(again.nu, a.nu)
        assert np.array_equal(again.coeff, a.coeff)

    def test_identity_selfadjoint(self):
        ident = WeylPolynomial.identity()
        assert ident.adjoint().terms() == ident.terms()


class TestTraceAndNorm:
    def test_offdiagonal_generator_traceless(self):
        assert weyl.trace_state(W((3, -2))) == 0.0

    def test_linearity(self):
        a = 2.0 * WeylPolynomial.identity() + 1j * W((1, 1))
        assert weyl.trace_state(a) == 2.0 + 0.0j

    def test_positivity_witness(self):
        a = W((1, 0)) + W((0, 1))
        assert weyl.trace_state(a.adjoint() * a) == pytest.approx(2.0, abs=1e-15)

    def test_positivity_random(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            a = random_polynomial(rng, 15, 10)
            val = weyl.trace_state(a.adjoint() * a)
            want = float(np.sum(np.abs(a.coeff) ** 2))
            assert val.imag == pytest.approx(0.0, abs=1e-12)
            assert val.real == pytest.approx(want, abs=1e-12)

    def test_generator_norms(self):
        for nu in [(0, 0), (1, 0), (-5, 17)]:
            assert weyl.gns_norm(W(nu)) == 1.0

    def test_two_term_norm(self):
        a = 3.0 * W((1, 0)) + 4.0j * W((0, 1))
        assert weyl.gns_norm(a) == pytest.approx(5.0, rel=1e-15)

    def test_zero(self):
        assert weyl.gns_norm(WeylPolynomial.zero()) == 0.0


class TestEvolve:
    def test_time_zero(self):
        a = W((3, 4)) + 2.0 * W((-1, 2))
        out = weyl.evolve(a, 0)
        assert out.terms() == a.terms()

    def test_generator_step(self):
        # t = -1 maps W((1,0)) to W(phi (1,0)) = W((1,1))
        out = weyl.evolve(W((1, 0)), -1)
        assert out.terms() == {(1, 1): 1.0 + 0.0j}

    def test_norm_preserved_exactly(self):
        rng = np.random.default_rng(51)
        for t in (-7, -1, 2, 6):
            a = random_polynomial(rng, 20, 15)
            assert weyl.gns_norm(weyl.evolve(a, t)) == weyl.gns_norm(a)

    def test_trace_preserved_exactly(self):
        rng = np.random.default_rng(52)
        a = random_polynomial(rng, 20, 15)
        for t in (-3, 4):
            assert weyl.trace_state(weyl.evolve(a, t)) == weyl.trace_state(a)

    def test_multiplicative(self):
        rng = np.random.default_rng(53)
        for t in (-4, 3):
            a = random_polynomial(rng, 10, 10)
            b = random_polynomial(rng, 10, 10)
            lhs = weyl.evolve(a * b, t)
            rhs = weyl.evolve(a, t) * weyl.evolve(b, t)
            assert max_coeff(lhs - rhs) <= 1e-12

    def test_commutes_with_adjoint(self):
        rng = np.random.default_rng(54)
        a = random_polynomial(rng, 10, 10)
        lhs = weyl.evolve(a, 3).adjoint()
        rhs = weyl.evolve(a.adjoint(), 3)
        assert max_coeff(lhs - rhs) == 0.0

    def test_large_horizon_overflow_detected(self):
        # the mapped index grows like 2.618^|t| and must not wrap int64
        with pytest.raises(OverflowError):
            weyl.evolve(W((1, 0)), -60)


class TestHorocycleTwist:
    def test_s_zero(self):
        a = W((3, 4)) + 2.0 * W((-1, 2))
        assert weyl.horocycle_twist(a, 1, 0.0).terms() == a.terms()

    def test_one_parameter_group(self):
        a = W((5, -2))
        two = weyl.horocycle_twist(weyl.horocycle_twist(a, 1, 0.3), 1, 0.5)
        one = weyl.horocycle_twist(a, 1, 0.8)
        assert max_coeff(two - one) <= 1e-12

    def test_trace_invariant_exactly(self):
        rng = np.random.default_rng(61)
        a = random_polynomial(rng, 20, 15) + 0.5 * WeylPolynomial.identity()
        for j in (1, 2):
            assert weyl.trace_state(weyl.horocycle_twist(a, j, 0.37)) == weyl.trace_state(a)

    def test_multiplicative(self):
        rng = np.random.default_rng(62)
        a = random_polynomial(rng, 10, 10)
        b = random_polynomial(rng, 10, 10)
        lhs = weyl.horocycle_twist(a * b, 2, 0.41)
        rhs = weyl.horocycle_twist(a, 2, 0.41) * weyl.horocycle_twist(b, 2, 0.41)
        assert max_coeff(lhs - rhs) <= 1e-12

    def test_commutes_with_adjoint(self):
        rng = np.random.default_rng(63)
        a = random_polynomial(rng, 10, 10)
        for j in (1, 2):
            lhs = weyl.horocycle_twist(a, j, 0.59).adjoint()
            rhs = weyl.horocycle_twist(a.adjoint(), j, 0.59)
            assert max_coeff(lhs - rhs) <= 1e-12


class TestHyperbolicityDefect:
    def test_zero_at_t0(self):
        assert weyl.hyperbolicity_defect(W((5, 3)), 1, 0, 0.8) == 0.0

    def test_expanding(self):
        assert weyl.hyperbolicity_defect(W((5, 3)), 1, 4, 0.2) <= 1e-8

    def test_contracting_negative_time(self):
        assert weyl.hyperbolicity_defect(W((5, 3)), 2, -4, 0.5) <= 1e-8

    def test_wrong_rate_detected(self):
        assert weyl.hyperbolicity_defect(W((5, 3)), 1, 2, 0.2, rate=1.0) >= 0.1

    def test_random_polynomials(self):
        rng = np.random.default_rng(71)
        system = weyl.CAT_SYSTEM
        for _ in range(10):
            a = random_polynomial(rng, 10, 20)
            t = int(rng.integers(-6, 7))
            s = float(rng.uniform(-1, 1))
            j = int(rng.integers(1, 3))
            bound = 1e-8 * catmap.stretch_factor(system, 1, abs(t))
            assert weyl.hyperbolicity_defect(a, j, t, s) <= bound


class TestVectorState:
    def test_identity_gives_tracial(self):
        f = weyl.vector_state(WeylPolynomial.identity())
        assert f.coeffs() == {(0, 0): 1.0 + 0.0j}

    def test_single_generator_gives_tracial(self):
        # the phases cancel: W(mu)* W(nu) W(mu) has zero trace unless nu = 0
        f = weyl.vector_state(W((2, -3)))
        assert f.coeffs() == {(0, 0): 1.0 + 0.0j}

    def test_two_term_element(self):
        f = weyl.vector_state(WeylPolynomial.identity() + W((1, 0)))
        assert f.value((0, 0)) == 1.0 + 0.0j
        assert f.value((1, 0)) == pytest.approx(0.5, abs=1e-15)
        assert f.value((-1, 0)) == pytest.approx(0.5, abs=1e-15)

    def test_matches_triple_product_oracle(self):
        rng = np.random.default_rng(81)
        for _ in range(10):
            b = random_polynomial(rng, 5, 4)
            f = weyl.vector_state(b)
            norm_sq = weyl.trace_state(b.adjoint() * b).real
            support = {tuple(map(int, row)) for row in b.nu}
            probes = {(int(m1 - k1), int(m2 - k2))
                      for (m1, m2) in support for (k1, k2) in support}
            for nu in probes:
                direct = weyl.trace_state(b.adjoint() * W(nu) * b) / norm_sq
                assert f.value(nu) == pytest.approx(direct, abs=1e-12)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            weyl.vector_state(WeylPolynomial.zero())

    def test_invariants_validated(self):
        with pytest.raises(ValueError, match="normalization"):
            StateFunctional.from_coeffs({(0, 0): 0.5})
        with pytest.raises(ValueError, match="Hermiticity"):
            StateFunctional.from_coeffs({(0, 0): 1.0, (1, 0): 0.5})


class TestDualActions:
    def test_evolve_state_time_zero(self):
        f = weyl.vector_state(WeylPolynomial.identity() + W((1, 0)))
        assert weyl.evolve_state(f, 0).coeffs() == f.coeffs()

    def test_entry_moves_along_lattice(self):
        f = StateFunctional.from_coeffs(
            {(0, 0): 1.0, (1, 0): 0.25, (-1, 0): 0.25})
        out = weyl.evolve_state(f, 1)
        # phi (1,0) = (1,1)
        assert out.value((1, 1)) == 0.25 + 0.0j
        assert out.value((1, 0)) == 0.0

    def test_roundtrip(self):
        f = weyl.vector_state(WeylPolynomial.identity() + 0.3 * W((2, 1)))
        back = weyl.evolve_state(weyl.evolve_state(f, 5), -5)
        assert back.coeffs() == f.coeffs()

    def test_generator_norm_tracial_state(self):
        assert weyl.horocycle_generator_norm(StateFunctional.tracial(), 1) == 0.0

    def test_generator_norm_single_entry_formula(self):
        # raw single-entry check of |2 pi (nu . V_j)|
        got = weyl._generator_norm(
            np.array([[1, 0]], dtype=np.int64),
            np.array([1.0 + 0.0j]), 1)
        assert got == pytest.approx(2 * math.pi * abs(weyl.CAT_SYSTEM.V1[0]), rel=1e-14)

    def test_generator_norm_scaling(self):
        f1 = StateFunctional.from_coeffs({(0, 0): 1.0, (1, 0): 0.4, (-1, 0): 0.4})
        f2 = StateFunctional.from_coeffs({(0, 0): 1.0, (1, 0): 0.2, (-1, 0): 0.2})
        n1 = weyl.horocycle_generator_norm(f1, 1)
        n2 = weyl.horocycle_generator_norm(f2, 1)
        assert n1 == pytest.approx(2.0 * n2, rel=1e-14)


class TestDivergenceRatio:
    def test_time_zero(self):
        f1 = weyl.vector_state(WeylPolynomial.identity() + W((1, 0)))
        f2 = weyl.vector_state(WeylPolynomial.identity() + W((0, 1)))
        assert weyl.divergence_ratio(f1, f2, 1, 0) == 1.0

    @pytest.mark.parametrize("j,t", [(1, 3), (2, 3), (1, -4), (2, -2)])
    def test_lyapunov_law(self, j, t):
        rng = np.random.default_rng(91)
        f1 = weyl.vector_state(WeylPolynomial.identity() + 0.7 * W((1, 2)))
        f2 = weyl.vector_state(WeylPolynomial.identity() + 0.4 * W((3, -1)))
        ratio = weyl.divergence_ratio(f1, f2, j, t)
        expected = catmap.stretch_factor(weyl.CAT_SYSTEM, j, t)
        assert ratio == pytest.approx(expected, rel=1e-8)

    def test_degenerate_pair_rejected(self):
        f = weyl.vector_state(WeylPolynomial.identity() + W((1, 0)))
        with pytest.raises(ValueError, match="degenerate"):
            weyl.divergence_ratio(f, f, 1, 2)


class TestSerialization:
    def test_polynomial_roundtrip_bit_exact(self):
        rng = np.random.default_rng(101)
        a = random_polynomial(rng, 20, 25)
        text = a.to_json()
        back = WeylPolynomial.from_json(text)
        assert np.array_equal(back.nu, a.nu)
        assert np.array_equal(back.coeff, a.coeff)
        assert back.gamma == a.gamma
        assert back.to_json() == text

    def test_state_roundtrip_bit_exact(self):
        f = weyl.vector_state(
            WeylPolynomial.identity() + 0.3712 * W((2, 1)) - 0.11j * W((-1, 3)))
        text = f.to_json()
        back = StateFunctional.from_json(text)
        assert np.array_equal(back.nu, f.nu)
        assert np.array_equal(back.coeff, f.coeff)
        assert back.to_json() == text

    def test_record_shape(self):
        data = json.loads((2.5 * W((1, -2))).to_json())
        assert set(data) == {"gamma", "terms"}
        assert data["terms"] == [{"nu": [1, -2], "re": 2.5, "im": 0.0}]


class TestClockShiftRep:
    def test_zero_index_is_identity(self):
        assert np.array_equal(weyl.clock_shift_rep((0, 0), 6), np.eye(6))

    def test_n4_example(self):
        lhs = weyl.clock_shift_rep((1, 0), 4) @ weyl.clock_shift_rep((0, 1), 4)
        rhs = cmath.exp(1j * math.pi / 4) * weyl.clock_shift_rep((1, 1), 4)
        assert np.abs(lhs - rhs).max() <= 1e-14

    def test_structure_constants(self):
        for n in (4, 8, 16):
            gamma = math.pi / n
            for nu in [(1, 0), (0, 1), (2, -1), (-3, 3)]:
                for nu_p in [(1, 1), (-2, 0), (3, -3)]:
                    lhs = weyl.clock_shift_rep(nu, n) @ weyl.clock_shift_rep(nu_p, n)
                    kappa = nu[0] * nu_p[1] - nu[1] * nu_p[0]
                    target = (nu[0] + nu_p[0], nu[1] + nu_p[1])
                    rhs = cmath.exp(1j * gamma * kappa) * weyl.clock_shift_rep(target, n)
                    assert np.abs(lhs - rhs).max() <= 1e-14

    def test_trace_inside_window(self):
        assert abs(weyl.rep_normalized_trace((1, 0), 8)) <= 1e-15
        assert weyl.rep_normalized_trace((0, 0), 8) == 1.0 + 0.0j

    def test_window_violation_rejected(self):
        with pytest.raises(ValueError, match="N/2"):
            weyl.rep_normalized_trace((4, 0), 8)

    def test_unitary(self):
        r = weyl.clock_shift_rep((2, 3), 8)
        assert np.abs(r @ r.conj().T - np.eye(8)).max() <= 1e-14
