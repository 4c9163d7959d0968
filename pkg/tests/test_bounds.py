"""Tests for dense Mermin operators, closed-form expectations, and maxima."""

import math

import numpy as np
import pytest
from scipy.optimize import minimize

from merminkit import bounds as bd
from merminkit.states import StateVector, dicke, ghz, sym_dicke

from conftest import kron_word, random_nonzero_coeffs, random_unit_vector


def random_setting(n, rng):
    return bd.MeasurementSetting(
        np.array([random_unit_vector(rng) for _ in range(n)]),
        np.array([random_unit_vector(rng) for _ in range(n)]),
    )


def collinear_max(state_id, tries=40, seed=5):
    """Best |mu| over the two-variable collinear landscapes, via multistart."""
    rng = np.random.default_rng(seed)
    best = 0.0
    for sign in (1, -1):
        for flip in (1.0, -1.0):
            def objective(angles):
                x3, y3 = math.cos(angles[0]), math.cos(angles[1])
                return -flip * bd.collinear_mu(state_id, sign, x3, y3)

            for _ in range(tries):
                res = minimize(
                    objective, rng.uniform(0, math.pi, size=2),
                    method="Nelder-Mead",
                    options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000},
                )
                best = max(best, -res.fun)
    return best


class TestMerminTerms:
    def test_three_qubit_pattern(self):
        assert bd.mermin_terms(3) == [
            (1, (0, 0, 0)), (-1, (0, 1, 1)), (-1, (1, 0, 1)), (-1, (1, 1, 0)),
        ]

    def test_four_qubit_pattern(self):
        terms = bd.mermin_terms(4)
        assert [sign for sign, _ in terms] == [1, -1, -1, -1, -1, -1, -1, 1]
        assert terms[0][1] == (0, 0, 0, 0)
        assert terms[-1][1] == (1, 1, 1, 1)

    def test_unsupported_size(self):
        with pytest.raises(ValueError):
            bd.mermin_terms(5)


class TestMerminOperator:
    def test_pauli12_fixes_ghz3(self):
        m = bd.mermin_operator(3, bd.MeasurementSetting.pauli12(3))
        u3 = ghz(3)
        assert np.allclose(m @ u3.amps, 4 * u3.amps)

    def test_pauli12_fixes_ghz4(self):
        m = bd.mermin_operator(4, bd.MeasurementSetting.pauli12(4))
        u4 = ghz(4)
        assert np.allclose(m @ u4.amps, 8 * u4.amps)

    def test_equal_observables_collapse_to_one_word(self):
        # with X = Y the three negative terms equal the positive one
        setting = bd.MeasurementSetting.uniform(3, (1, 0, 0), (1, 0, 0))
        m = bd.mermin_operator(3, setting)
        assert np.allclose(m, -2.0 * kron_word((1, 1, 1)))

    def test_hermitian(self, rng):
        for n in (3, 4):
            m = bd.mermin_operator(n, random_setting(n, rng))
            assert np.allclose(m, m.conj().T)

    def test_norm_bounds(self, rng):
        for n, bound in ((3, 4.0), (4, 8.0)):
            for _ in range(30):
                m = bd.mermin_operator(n, random_setting(n, rng))
                assert np.linalg.svd(m, compute_uv=False)[0] <= bound + 1e-9

    def test_setting_validation(self):
        with pytest.raises(ValueError):
            bd.MeasurementSetting(np.ones((3, 3)), np.ones((3, 3)))
        with pytest.raises(ValueError):
            bd.mermin_operator(4, bd.MeasurementSetting.pauli12(3))


class TestExpectation:
    def test_ghz3_saturates(self):
        assert bd.expectation(ghz(3), bd.MeasurementSetting.pauli12(3)) == 4.0

    def test_ghz4_saturates(self):
        assert bd.expectation(ghz(4), bd.MeasurementSetting.pauli12(4)) == 8.0

    def test_symmetrized_states_annihilated_at_pauli12(self, rng):
        from merminkit.states import sym_coeff_count

        for n, m in ((3, 1), (4, 1), (4, 2)):
            for _ in range(20):
                coeffs = random_nonzero_coeffs(rng, sym_coeff_count(n, m))
                v = sym_dicke(n, m, coeffs)
                assert abs(bd.expectation(v, bd.MeasurementSetting.pauli12(n))) < 1e-12

    def test_balanced_dicke_annihilated_at_pauli12(self):
        assert bd.expectation(dicke(4, 2), bd.MeasurementSetting.pauli12(4)) == 0.0

    def test_real_for_random_states_and_settings(self, rng):
        for _ in range(25):
            n = int(rng.integers(3, 5))
            amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
            v = StateVector(n, amps)
            setting = random_setting(n, rng)
            m = bd.mermin_operator(n, setting)
            raw = complex(np.vdot(v.amps, m @ v.amps)) / v.norm_sq
            assert abs(raw.imag) < 1e-9
            assert bd.expectation(v, setting) == pytest.approx(raw.real)

    def test_zero_state_rejected(self):
        with pytest.raises(ValueError):
            bd.expectation(StateVector(3, np.zeros(8)),
                           bd.MeasurementSetting.pauli12(3))


class TestRestrictedMu:
    def test_z_axis_values(self):
        z = (0.0, 0.0, 1.0)
        assert bd.restricted_mu("v31", z, z) == 2.0
        assert bd.restricted_mu("v41", z, z) == 4.0

    def test_orthogonal_plane_vectors_vanish_for_balanced_state(self):
        assert bd.restricted_mu("v42", (1, 0, 0), (0, 1, 0)) == 0.0

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            bd.restricted_mu("v31", (0, 0, 2), (0, 0, 1))

    def test_unknown_state(self):
        with pytest.raises(ValueError):
            bd.restricted_mu("u3", (0, 0, 1), (0, 0, 1))

    @pytest.mark.parametrize("state_id,n", [("v31", 3), ("v41", 4), ("v42", 4)])
    def test_matches_dense_expectation(self, state_id, n, rng):
        v = bd.bound_state(state_id)
        for _ in range(60):
            x = random_unit_vector(rng)
            y = random_unit_vector(rng)
            setting = bd.MeasurementSetting.uniform(n, x, y)
            assert bd.restricted_mu(state_id, x, y) == pytest.approx(
                bd.expectation(v, setting), abs=1e-9
            )


class TestCollinearMu:
    def test_origin_vanishes(self):
        assert bd.collinear_mu("v31", 1, 0.0, 0.0) == 0.0

    def test_w_state_optimum_value(self):
        value = bd.collinear_mu("v31", 1, bd.W_OPT_X3, -bd.W_OPT_Y3)
        assert abs(value) == pytest.approx(bd.EXACT_BOUNDS["v31"], abs=1e-12)

    def test_balanced_state_edge_value(self):
        assert bd.collinear_mu("v42", 1, 1.0, 0.0) == 6.0

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            bd.collinear_mu("v31", 1, 1.5, 0.0)
        with pytest.raises(ValueError):
            bd.collinear_mu("v31", 2, 0.5, 0.0)

    def test_consistent_with_restricted_on_collinear_settings(self, rng):
        for state_id in ("v31", "v41", "v42"):
            for _ in range(40):
                x3, y3 = rng.uniform(-1, 1, size=2)
                phi = rng.uniform(0, 2 * math.pi)
                for sign, psi in ((1, phi), (-1, phi + math.pi)):
                    rx = math.sqrt(1 - x3 * x3)
                    ry = math.sqrt(1 - y3 * y3)
                    x = (rx * math.cos(phi), rx * math.sin(phi), x3)
                    y = (ry * math.cos(psi), ry * math.sin(psi), y3)
                    assert bd.collinear_mu(state_id, sign, x3, y3) == pytest.approx(
                        bd.restricted_mu(state_id, x, y), abs=1e-12
                    )


class TestContour:
    def test_reflection_between_sign_branches(self):
        for state_id in ("v31", "v41", "v42"):
            plus = bd.contour(state_id, 1, 21)
            minus = bd.contour(state_id, -1, 21)
            assert np.max(np.abs(minus.values - plus.values[:, ::-1])) == 0.0

    def test_w_state_grid_maximum(self):
        grid = bd.contour("v31", 1, 201)
        assert abs(grid.values).max() == pytest.approx(
            bd.EXACT_BOUNDS["v31"], abs=0.01
        )

    def test_balanced_state_attains_six_on_the_orbit(self):
        grid = bd.contour("v42", 1, 201)
        axis = grid.axis
        assert abs(grid.values).max() == pytest.approx(6.0, abs=1e-9)
        for x3, y3 in ((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)):
            i = int(np.argmin(np.abs(axis - x3)))
            j = int(np.argmin(np.abs(axis - y3)))
            assert abs(grid.values[i, j]) == pytest.approx(6.0, abs=1e-9)
        # interior orbit points: each sign branch picks up one diagonal
        # orientation, the other shows up mirrored on the opposite branch
        r = 1 / math.sqrt(2)
        assert abs(bd.collinear_mu("v42", 1, r, -r)) == pytest.approx(6.0, abs=1e-9)
        assert abs(bd.collinear_mu("v42", -1, r, r)) == pytest.approx(6.0, abs=1e-9)
        i = int(np.argmin(np.abs(axis - r)))
        j = int(np.argmin(np.abs(axis + r)))
        assert abs(grid.values[i, j]) == pytest.approx(6.0, abs=0.01)

    def test_axis_is_symmetric(self):
        axis = bd.contour("v31", 1, 11).axis
        assert np.array_equal(axis, -axis[::-1])

    def test_csv_lines(self):
        grid = bd.contour("v31", 1, 3)
        lines = bd.contour_csv_lines(grid)
        assert lines[0] == "x3,y3,mu"
        assert len(lines) == 1 + 9
        assert lines[1].split(",")[:2] == ["-1", "-1"]

    def test_resolution_validation(self):
        with pytest.raises(ValueError):
            bd.contour("v31", 1, 1)


class TestMaximize:
    def test_w_state_uniform(self):
        result = bd.maximize(bd.bound_state("v31"), mode="uniform",
                             target=bd.EXACT_BOUNDS["v31"])
        assert result.gap < 1e-6
        assert abs(abs(result.setting.x[0][2]) - bd.W_OPT_X3) < 1e-4
        assert abs(abs(result.setting.y[0][2]) - bd.W_OPT_Y3) < 1e-4

    def test_deterministic_under_fixed_seed(self):
        a = bd.maximize(bd.bound_state("v31"), mode="uniform", seed=11)
        b = bd.maximize(bd.bound_state("v31"), mode="uniform", seed=11)
        assert a.value == b.value
        assert np.array_equal(a.setting.x, b.setting.x)
        assert np.array_equal(a.setting.y, b.setting.y)

    def test_value_is_expectation_at_returned_setting(self):
        result = bd.maximize(bd.bound_state("v42"), mode="uniform")
        assert result.value == abs(
            bd.expectation(bd.bound_state("v42"), result.setting)
        )

    def test_value_respects_operator_norm(self):
        result = bd.maximize(ghz(3), mode="uniform")
        assert 0.0 <= result.value <= 4.0 + 1e-9

    def test_uniform_never_beats_collinear_for_dicke_states(self):
        for state_id in ("v31", "v41", "v42"):
            uniform = bd.maximize(bd.bound_state(state_id), mode="uniform")
            assert uniform.value <= collinear_max(state_id) + 1e-6

    def test_general_vs_uniform_on_w_state(self):
        uniform = bd.maximize(bd.bound_state("v31"), mode="uniform")
        general = bd.maximize(bd.bound_state("v31"), mode="general")
        assert general.value >= uniform.value - 1e-9
        assert general.value - uniform.value < 1e-5

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            bd.maximize(ghz(3), mode="global")


class TestFastPath:
    def test_tensor_contraction_matches_dense_expectation(self, rng):
        for state in (ghz(3), dicke(3, 1), dicke(4, 2), sym_dicke(4, 1)):
            n = state.n
            tensor = bd._pauli_expectation_tensor(state)
            for _ in range(10):
                setting = random_setting(n, rng)
                zs = [setting.x[a] + 1j * setting.y[a] for a in range(n)]
                fast = float(np.real(np.einsum(bd._EINSUM_SUBS[n], tensor, *zs)))
                assert fast == pytest.approx(bd.expectation(state, setting),
                                             abs=1e-9)
