import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import functions_on, symbols

from wco_reciprocal import mp_oracle
from wco_reciprocal.measure_space import ValidationError, build_symbol
from wco_reciprocal.operator_core import from_frame, matrix_of, to_frame
from wco_reciprocal.reciprocal import (
    adjoint_reciprocal,
    adjoint_reciprocal_matrix,
    adjoint_reciprocal_via_composition,
    barcelona_reciprocal,
    composition_reciprocal,
    derived_symbol_hat,
    derived_symbol_one_hat,
    hat_weight,
    multiplication_reciprocal,
    reciprocal_matrix,
    reciprocal_pair,
    unitary_part,
    wco_reciprocal,
)

SETTINGS = settings(max_examples=60, deadline=None)
SQ5 = np.sqrt(5.0)


class TestWcoReciprocal:
    def test_sigma1_point_mass(self, sigma1):
        np.testing.assert_allclose(wco_reciprocal(sigma1, [1, 0, 0]), [0, 0.2, 0])

    def test_sigma1_matrix(self, sigma1):
        expected = [[0, 0, 0], [0.2, 0.4, 0], [0, 0, 0]]
        np.testing.assert_allclose(reciprocal_matrix(sigma1), expected, atol=1e-15)
        np.testing.assert_allclose(mp_oracle.pseudoinverse(matrix_of(sigma1)), expected, atol=1e-14)

    def test_identity(self, identity):
        f = np.array([1, -2j, 3])
        np.testing.assert_allclose(wco_reciprocal(identity, f), f)

    def test_zero_weight(self, zero_weight):
        np.testing.assert_array_equal(wco_reciprocal(zero_weight, [1, 2, 3]), [0, 0, 0])

    @SETTINGS
    @given(symbols())
    def test_matches_oracle(self, sym):
        oracle = mp_oracle.pseudoinverse(matrix_of(sym))
        assert mp_oracle.relative_residual(reciprocal_matrix(sym) - oracle, oracle) <= 1e-9


class TestAdjointReciprocal:
    def test_sigma1(self, sigma1):
        np.testing.assert_allclose(adjoint_reciprocal(sigma1, [0, 1, 0]), [0.2, 0.4, 0])

    def test_identity(self, identity):
        f = np.array([2, 1j, -1])
        np.testing.assert_allclose(adjoint_reciprocal(identity, f), f)

    def test_support_on_zero_density(self, sigma1):
        # h = (0, 5, 0), so f supported on {0, 2} is sent to 0
        np.testing.assert_array_equal(adjoint_reciprocal(sigma1, [3, 0, -1]), [0, 0, 0])

    def test_is_conjugate_transpose(self, sigma1):
        np.testing.assert_allclose(adjoint_reciprocal_matrix(sigma1), reciprocal_matrix(sigma1).conj().T)

    @SETTINGS
    @given(symbols())
    def test_matches_oracle(self, sym):
        oracle = mp_oracle.pseudoinverse(matrix_of(sym).conj().T)
        assert mp_oracle.relative_residual(adjoint_reciprocal_matrix(sym) - oracle, oracle) <= 1e-9

    @SETTINGS
    @given(symbols().flatmap(lambda s: st.tuples(st.just(s), functions_on(s.size))))
    def test_via_composition_on_positive_atoms(self, data):
        sym, f = data
        via, positive = adjoint_reciprocal_via_composition(sym, f)
        direct = adjoint_reciprocal(sym, f)
        np.testing.assert_allclose(via[positive], direct[positive], rtol=1e-10, atol=1e-10)


class TestHatWeight:
    def test_sigma1(self, sigma1):
        np.testing.assert_allclose(hat_weight(sigma1), [0.2, 0.4, 0])

    def test_identity(self, identity):
        np.testing.assert_array_equal(hat_weight(identity), [1, 1, 1])

    def test_hat_symbol_matrix(self, sigma1):
        np.testing.assert_allclose(matrix_of(derived_symbol_hat(sigma1)), adjoint_reciprocal_matrix(sigma1), atol=1e-12)

    def test_one_hat_sigma1(self, sigma1):
        # h_phi(1) = 3, so 1-hat = 1/3 everywhere
        np.testing.assert_allclose(derived_symbol_one_hat(sigma1).weight, [1 / 3] * 3)


class TestMultiplicationReciprocal:
    def test_coordinatewise(self):
        np.testing.assert_allclose(multiplication_reciprocal([1, 2, 0], [1, 1, 1]), [1, 0.5, 0])

    def test_unit_weight(self):
        f = np.array([1j, 2, 3])
        np.testing.assert_array_equal(multiplication_reciprocal([1, 1, 1], f), f)

    def test_support_in_zero_set(self):
        np.testing.assert_array_equal(multiplication_reciprocal([1, 2, 0], [0, 0, 7]), [0, 0, 0])

    def test_shape_mismatch(self):
        with pytest.raises(ValidationError):
            multiplication_reciprocal([1, 2], [1, 2, 3])


class TestCompositionReciprocal:
    def test_collapsing_map_constant(self, s1):
        sym = build_symbol(s1, [1, 1, 1], [1, 1, 1])
        np.testing.assert_allclose(composition_reciprocal(sym, [1, 1, 1]), [0, 1, 0])
        oracle = mp_oracle.pseudoinverse(matrix_of(sym))
        np.testing.assert_allclose(from_frame(s1, oracle @ to_frame(s1, [1, 1, 1])), [0, 1, 0], atol=1e-12)

    def test_collapsing_map_point_mass(self, s1):
        sym = build_symbol(s1, [1, 1, 1], [1, 1, 1])
        np.testing.assert_allclose(composition_reciprocal(sym, [3, 0, 0]), [0, 1, 0])

    def test_identity(self, identity):
        f = np.array([4, 5j, 6])
        np.testing.assert_allclose(composition_reciprocal(identity, f), f)

    def test_rejects_weighted_symbol(self, sigma1):
        with pytest.raises(ValidationError):
            composition_reciprocal(sigma1, [1, 1, 1])


class TestUnitaryPart:
    def test_sigma1_column(self, sigma1):
        u = unitary_part(sigma1)
        np.testing.assert_allclose(u[:, 1], [1 / SQ5, 2 / SQ5, 0])
        np.testing.assert_array_equal(u[:, [0, 2]], 0)

    def test_identity(self, identity):
        np.testing.assert_allclose(unitary_part(identity), np.eye(3))

    def test_zero_weight(self, zero_weight):
        np.testing.assert_array_equal(unitary_part(zero_weight), np.zeros((3, 3)))

    @SETTINGS
    @given(symbols())
    def test_partial_isometry(self, sym):
        u = unitary_part(sym)
        np.testing.assert_allclose(u @ u.conj().T @ u, u, atol=1e-12)


class TestReciprocalPair:
    def test_sigma1(self, sigma1):
        pair = reciprocal_pair(sigma1)
        np.testing.assert_allclose(pair.reciprocal, [[0, 0, 0], [0.2, 0.4, 0], [0, 0, 0]], atol=1e-15)
        np.testing.assert_array_equal(pair.kernel_proj, np.diag([1, 0, 1]))
        # range of C is spanned by (1, 2, 0)/sqrt(5)
        v = np.array([1, 2, 0]) / SQ5
        np.testing.assert_allclose(pair.range_proj, np.outer(v, v), atol=1e-15)

    def test_identity(self, identity):
        pair = reciprocal_pair(identity)
        for mat in (pair.forward, pair.reciprocal, pair.range_proj):
            np.testing.assert_allclose(mat, np.eye(3))
        np.testing.assert_array_equal(pair.kernel_proj, np.zeros((3, 3)))

    def test_zero_weight(self, zero_weight):
        pair = reciprocal_pair(zero_weight)
        np.testing.assert_array_equal(pair.reciprocal, np.zeros((3, 3)))
        np.testing.assert_array_equal(pair.range_proj, np.zeros((3, 3)))
        np.testing.assert_array_equal(pair.kernel_proj, np.eye(3))


class TestQuotientFormula:
    def test_collapsing_map(self, s1):
        sym = build_symbol(s1, [1, 1, 1], [1, 2, 3])
        out = barcelona_reciprocal(sym, [1, 0, 0])
        # E(f conj w) = 1/3 and E(|w|^2) = 14/3 on the single fiber
        np.testing.assert_allclose(out, [0, 1 / 14, 0])
        np.testing.assert_allclose(wco_reciprocal(sym, [1, 0, 0]), out)
        oracle = mp_oracle.pseudoinverse(matrix_of(sym))
        np.testing.assert_allclose(from_frame(s1, oracle @ to_frame(s1, [1, 0, 0])), out, atol=1e-12)

    def test_identity(self, identity):
        f = np.array([1, 2, 3j])
        np.testing.assert_allclose(barcelona_reciprocal(identity, f), f)

    def test_rejects_zero_weight(self, sigma1):
        with pytest.raises(ValidationError, match="weight vanishes at 2"):
            barcelona_reciprocal(sigma1, [1, 0, 0])

    @SETTINGS
    @given(symbols(nonzero=True).flatmap(lambda s: st.tuples(st.just(s), functions_on(s.size))))
    def test_agrees_with_fiber_formula(self, data):
        sym, f = data
        np.testing.assert_allclose(barcelona_reciprocal(sym, f), wco_reciprocal(sym, f), rtol=1e-10, atol=1e-10)
