import cmath
import math

import numpy as np
import pytest

from anosovlab import obstruction as ob


class TestFiniteQuantumSystem:
    def test_valid(self):
        sys2 = ob.FiniteQuantumSystem((0.0, 1.0), (0.5, 0.5))
        assert sys2.n == 2

    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError):
            ob.FiniteQuantumSystem((0.0, 1.0), (0.7, 0.7))
        with pytest.raises(ValueError):
            ob.FiniteQuantumSystem((0.0, 1.0), (-0.5, 1.5))
        with pytest.raises(ValueError):
            ob.FiniteQuantumSystem((0.0, 1.0), (0.0, 0.0))

    def test_rejects_unsorted_levels(self):
        with pytest.raises(ValueError):
            ob.FiniteQuantumSystem((1.0, 0.0), (0.5, 0.5))


class TestBuildGns:
    def test_two_level_full_support(self):
        data = ob.build_gns(ob.FiniteQuantumSystem((0.0, 1.0), (0.5, 0.5)))
        assert data.spectrum == (-1.0, 0.0, 0.0, 1.0)
        assert len(data.pairs) == 4

    def test_pure_state_support_filter(self):
        data = ob.build_gns(ob.FiniteQuantumSystem((0.0, 1.0), (1.0, 0.0)))
        assert set(data.pairs) == {(0, 0), (1, 0)}
        assert data.spectrum == (-1.0, 0.0)

    def test_single_level(self):
        data = ob.build_gns(ob.FiniteQuantumSystem((2.5,), (1.0,)))
        assert data.spectrum == (0.0,)

    def test_spectrum_negation_symmetric_with_full_support(self):
        levels = (0.0, 0.3, 1.1, 2.4)
        weights = (0.1, 0.2, 0.3, 0.4)
        spec = ob.build_gns(ob.FiniteQuantumSystem(levels, weights)).spectrum
        assert sorted(-w for w in spec) == pytest.approx(sorted(spec))

    def test_frequencies_match_definition(self):
        sysd = ob.FiniteQuantumSystem((0.0, 0.5, 2.0), (0.2, 0.3, 0.5))
        data = ob.build_gns(sysd)
        for (k, l), w in data.frequencies.items():
            assert w == sysd.levels[l] - sysd.levels[k]


class TestHeisenbergPhase:
    SYS = ob.FiniteQuantumSystem((0.0, 1.0), (0.5, 0.5))

    def test_diagonal_is_one(self):
        for t in (0.0, 1.7, -3.2):
            assert ob.heisenberg_phase(1, 1, t, self.SYS) == 1.0 + 0.0j

    def test_pi_rotation(self):
        assert ob.heisenberg_phase(0, 1, math.pi, self.SYS) == pytest.approx(-1.0, abs=1e-12)

    def test_conjugate_swaps_indices(self):
        p = ob.heisenberg_phase(0, 1, 0.83, self.SYS)
        q = ob.heisenberg_phase(1, 0, 0.83, self.SYS)
        assert p.conjugate() == pytest.approx(q, abs=1e-15)

    def test_group_property(self):
        a = ob.heisenberg_phase(0, 1, 0.4, self.SYS)
        b = ob.heisenberg_phase(0, 1, 1.1, self.SYS)
        c = ob.heisenberg_phase(0, 1, 1.5, self.SYS)
        assert a * b == pytest.approx(c, abs=1e-14)

    def test_modulus_one(self):
        assert abs(ob.heisenberg_phase(0, 1, 12.34, self.SYS)) == pytest.approx(1.0, abs=1e-15)

    def test_index_check(self):
        with pytest.raises(IndexError):
            ob.heisenberg_phase(0, 2, 1.0, self.SYS)


class TestSylvesterObstruction:
    def test_two_level_lam_one(self):
        nullity, sigma_min = ob.sylvester_obstruction(np.diag([0.0, 1.0]), 1.0)
        assert nullity == 0
        assert sigma_min == pytest.approx(1.0, abs=1e-12)

    def test_two_level_lam_zero_commutant(self):
        nullity, _ = ob.sylvester_obstruction(np.diag([0.0, 1.0]), 0.0)
        assert nullity == 2

    def test_modulus_bound_random(self):
        rng = np.random.default_rng(7)
        h = ob.random_hermitian(8, rng)
        _, sigma_min = ob.sylvester_obstruction(h, 0.5)
        assert sigma_min >= 0.5 - 1e-9

    def test_sigma_min_matches_eigh_oracle(self):
        # independent oracle: min over eigenvalue differences of
        # sqrt(omega^2 + lam^2)
        rng = np.random.default_rng(8)
        for n in (2, 4, 7):
            h = ob.random_hermitian(n, rng)
            lam = 0.75
            evals = np.linalg.eigvalsh(h)
            omegas = (evals[:, None] - evals[None, :]).ravel()
            want = math.sqrt(np.min(omegas ** 2) + lam ** 2)
            _, sigma_min = ob.sylvester_obstruction(h, lam)
            assert sigma_min == pytest.approx(want, rel=1e-10)

    def test_commutant_dimension_with_multiplicities(self):
        rng = np.random.default_rng(9)
        # eigenvalues (0, 0, 1): commutant dimension 2^2 + 1^2 = 5
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        h = q @ np.diag([0.0, 0.0, 1.0]) @ q.conj().T
        nullity, _ = ob.sylvester_obstruction((h + h.conj().T) / 2, 0.0)
        assert nullity == 5

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            ob.sylvester_obstruction(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)


class TestSurveyExport:
    def test_record_schema_and_roundtrip(self):
        import json

        records = ob.obstruction_survey((2, 5), (0.5, 1.0), seed=3)
        assert len(records) == 4
        for rec in records:
            assert set(rec) == {"n", "lambda", "nullity", "sigma_min", "seed"}
            assert rec["nullity"] == 0
            assert rec["sigma_min"] >= rec["lambda"] - 1e-9
            assert rec["seed"] == 3
        assert json.loads(ob.survey_to_json(records)) == records

    def test_cli_side_artifact(self, tmp_path):
        import json

        from anosovlab import cli

        conf = tmp_path / "conf.ini"
        survey = tmp_path / "survey.json"
        conf.write_text(
            f"[nogo-sylvester]\nsamples = 4\ncommutant_cases = 2\n"
            f"survey_out = {survey}\n")
        code = cli.main(["run", "--experiment", "nogo-sylvester",
                         "--config", str(conf), "--out", str(tmp_path / "r.csv")])
        assert code == 0
        data = json.loads(survey.read_text())
        assert {rec["n"] for rec in data} == set(range(2, 13))


class TestConjugationSearch:
    GRID_S = np.linspace(-1.0, 1.0, 5)
    GRID_T = np.linspace(-2.0, 2.0, 5)

    def test_commuting_generator_at_lam_zero(self):
        h = np.diag([0.0, 1.0])
        g = np.diag([1.0, 1.0]) / math.sqrt(2.0)
        assert ob.conjugation_defect(h, g, 0.0, self.GRID_S, self.GRID_T) <= 1e-12

    def test_search_stays_bounded_away_from_zero(self):
        best = ob.conjugation_defect_search(np.diag([0.0, 1.0]), 1.0, trials=25, seed=0)
        assert best >= 0.05

    def test_grid_refinement_stability(self):
        h = np.diag([0.0, 1.0])
        base = ob.conjugation_defect_search(h, 1.0, trials=25, seed=0)
        dense = ob.conjugation_defect_search(
            h, 1.0, trials=25, seed=0,
            s_values=np.linspace(-1, 1, 9), t_values=np.linspace(-2, 2, 9))
        assert dense >= 0.9 * base

    def test_deterministic_given_seed(self):
        h = np.diag([0.0, 1.0])
        a = ob.conjugation_defect_search(h, 1.0, trials=10, seed=42)
        b = ob.conjugation_defect_search(h, 1.0, trials=10, seed=42)
        assert a == b


class TestAffineControl:
    def test_resolution_validation(self):
        for bad in (128, 255, 300):
            with pytest.raises(ValueError):
                ob.affine_pair_defect(bad)

    def test_trivial_rows(self):
        for res in (256, 512):
            assert ob.affine_pair_defect(res, s=0.0) <= 1e-10
            assert ob.affine_pair_defect(res, t=0.0) <= 1e-10

    def test_defect_decreases_256_to_512(self):
        d256 = ob.affine_pair_defect(256)
        d512 = ob.affine_pair_defect(512)
        assert d512 < d256

    def test_unitarity_of_flows(self):
        x, k, evals, evecs = ob._affine_operators(256)
        f = np.exp(-(x ** 2) / 2.0).astype(complex)
        f /= np.linalg.norm(f)
        dilated = ob._dilate(f, 0.7, evals, evecs)
        shifted = ob._translate(f, 1.3, k)
        assert np.linalg.norm(dilated) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(shifted) == pytest.approx(1.0, abs=1e-12)
