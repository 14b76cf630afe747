import numpy as np
import pytest
from conftest import brute_density
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import functions_on, symbols

from wco_reciprocal.measure_space import build_symbol, inner_product
from wco_reciprocal.operator_core import (
    adjoint_matrix_by_duality,
    conditional_expectation,
    expectation_pushforward,
    from_frame,
    kernel_projector,
    matrix_from_action,
    matrix_of,
    radon_nikodym,
    to_frame,
)

SETTINGS = settings(max_examples=60, deadline=None)


class TestMatrixOf:
    def test_sigma1_rows(self, sigma1):
        np.testing.assert_array_equal(matrix_of(sigma1), [[0, 1, 0], [0, 2, 0], [0, 0, 0]])

    def test_identity(self, identity):
        np.testing.assert_array_equal(matrix_of(identity), np.eye(3))

    def test_zero_weight(self, zero_weight):
        np.testing.assert_array_equal(matrix_of(zero_weight), np.zeros((3, 3)))

    def test_matches_pointwise_action(self, sigma1):
        action = matrix_from_action(sigma1.space, lambda f: sigma1.weight * f[sigma1.phi])
        np.testing.assert_array_equal(action, matrix_of(sigma1))

    def test_sigma1_adjoint_by_duality(self, sigma1):
        np.testing.assert_allclose(adjoint_matrix_by_duality(sigma1), matrix_of(sigma1).conj().T, atol=1e-12)

    @SETTINGS
    @given(symbols())
    def test_frame_adjoint_is_conjugate_transpose(self, sym):
        np.testing.assert_allclose(adjoint_matrix_by_duality(sym), matrix_of(sym).conj().T, atol=1e-12)

    @SETTINGS
    @given(symbols())
    def test_frame_round_trip(self, sym):
        f = np.arange(sym.size) + 1j
        np.testing.assert_allclose(from_frame(sym.space, to_frame(sym.space, f)), f)


class TestRadonNikodym:
    def test_sigma1(self, sigma1):
        np.testing.assert_allclose(radon_nikodym(sigma1), [0, 5, 0])
        np.testing.assert_allclose(brute_density(sigma1), [0, 5, 0])

    def test_identity(self, identity):
        np.testing.assert_array_equal(radon_nikodym(identity), [1, 1, 1])

    def test_zero_weight(self, zero_weight):
        np.testing.assert_array_equal(radon_nikodym(zero_weight), [0, 0, 0])

    @SETTINGS
    @given(symbols())
    def test_matches_loop_oracle(self, sym):
        np.testing.assert_allclose(radon_nikodym(sym), brute_density(sym), rtol=1e-12, atol=1e-14)

    @SETTINGS
    @given(symbols().flatmap(lambda s: st.tuples(st.just(s), functions_on(s.size))))
    def test_change_of_variables(self, data):
        sym, f = data
        mu = sym.space.masses
        lhs = np.sum(f[sym.phi] * np.abs(sym.weight) ** 2 * mu)
        rhs = np.sum(f * radon_nikodym(sym) * mu)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


class TestConditionalExpectation:
    def test_constant(self, sigma1):
        np.testing.assert_allclose(conditional_expectation(sigma1, [1, 1, 1]), [1, 1, 1])

    def test_sigma1_point_mass(self, sigma1):
        # mu_w = (1, 4, 0) on the single fiber {0, 1, 2}; average of (5, 0, 0) is 5/5
        np.testing.assert_allclose(conditional_expectation(sigma1, [5, 0, 0]), [1, 1, 1])

    def test_zero_weight(self, zero_weight):
        np.testing.assert_array_equal(conditional_expectation(zero_weight, [1, 2, 3]), [0, 0, 0])

    @SETTINGS
    @given(symbols().flatmap(lambda s: st.tuples(st.just(s), functions_on(s.size), functions_on(s.size))))
    def test_projection_in_weighted_space(self, data):
        sym, f, g = data
        e = conditional_expectation(sym, f)
        np.testing.assert_allclose(conditional_expectation(sym, e), e, atol=1e-10)
        # self-adjoint in L^2(mu_w): <E f, g>_w = <f, E g>_w
        wm = sym.weighted_mass
        lhs = np.sum(e * np.conj(g) * wm)
        rhs = np.sum(f * np.conj(conditional_expectation(sym, g)) * wm)
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))

    @SETTINGS
    @given(symbols().flatmap(lambda s: st.tuples(st.just(s), functions_on(s.size))))
    def test_pushforward_composes_back(self, data):
        sym, f = data
        back = expectation_pushforward(sym, f)[sym.phi]
        support = sym.weight != 0
        np.testing.assert_allclose(back[support], conditional_expectation(sym, f)[support], atol=1e-10)


class TestPushforward:
    def test_sigma1_constant(self, sigma1):
        np.testing.assert_allclose(expectation_pushforward(sigma1, [1, 1, 1]), [0, 1, 0])

    def test_sigma1_zero(self, sigma1):
        np.testing.assert_array_equal(expectation_pushforward(sigma1, [0, 0, 0]), [0, 0, 0])

    def test_identity(self, identity):
        f = np.array([1 + 2j, -3, 0.5j])
        np.testing.assert_allclose(expectation_pushforward(identity, f), f)

    @SETTINGS
    @given(symbols().flatmap(lambda s: st.tuples(st.just(s), functions_on(s.size))))
    def test_adjoint_identity(self, data):
        # C* f = h * E(f_w) o phi^{-1} with f_w = f conj(w) / |w|^2 on {w != 0}
        sym, f = data
        w = sym.weight
        fw = np.zeros(sym.size, dtype=complex)
        nz = w != 0
        fw[nz] = f[nz] / w[nz]
        via_expectation = radon_nikodym(sym) * expectation_pushforward(sym, fw)
        adjoint = from_frame(sym.space, matrix_of(sym).conj().T @ to_frame(sym.space, f))
        np.testing.assert_allclose(via_expectation, adjoint, atol=1e-9)


class TestKernelProjector:
    def test_sigma1(self, sigma1):
        np.testing.assert_array_equal(kernel_projector(sigma1), np.diag([1, 0, 1]))

    def test_identity(self, identity):
        np.testing.assert_array_equal(kernel_projector(identity), np.zeros((3, 3)))

    def test_zero_weight(self, zero_weight):
        np.testing.assert_array_equal(kernel_projector(zero_weight), np.eye(3))

    @SETTINGS
    @given(symbols())
    def test_annihilated_by_operator(self, sym):
        c = matrix_of(sym)
        np.testing.assert_allclose(c @ kernel_projector(sym), 0, atol=1e-12)

    def test_complex_inner_product_consistency(self, s1):
        sym = build_symbol(s1, [2, 2, 0], [1j, -1, 2])
        f = np.array([1, 1j, 2])
        g = np.array([0.5, 2, -1j])
        cf = sym.weight * f[sym.phi]
        cstar_g = from_frame(s1, matrix_of(sym).conj().T @ to_frame(s1, g))
        assert inner_product(s1, cf, g) == pytest.approx(inner_product(s1, f, cstar_g))
