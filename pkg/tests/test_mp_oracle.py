import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wco_reciprocal import mp_oracle
from wco_reciprocal.operator_core import matrix_of
from wco_reciprocal.reciprocal import reciprocal_matrix


@st.composite
def complex_matrices(draw, max_dim=7):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    rank = draw(st.integers(0, min(m, n)))
    rng = np.random.default_rng(seed)
    left = rng.normal(size=(m, rank)) + 1j * rng.normal(size=(m, rank))
    right = rng.normal(size=(rank, n)) + 1j * rng.normal(size=(rank, n))
    return left @ right


class TestSvd:
    def test_identity(self):
        np.testing.assert_allclose(mp_oracle.svd(np.eye(4)).singular_values, np.ones(4))

    def test_sigma1(self, sigma1):
        np.testing.assert_allclose(mp_oracle.svd(matrix_of(sigma1)).singular_values, [np.sqrt(5), 0, 0], atol=1e-15)

    def test_zero(self):
        np.testing.assert_array_equal(mp_oracle.svd(np.zeros((3, 3))).singular_values, np.zeros(3))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            mp_oracle.svd(np.array([[1.0, np.nan]]))

    def test_sweep_cap(self):
        a = np.random.default_rng(0).normal(size=(6, 6))
        with pytest.raises(mp_oracle.SvdConvergenceError) as info:
            mp_oracle.svd(a, max_sweeps=1)
        assert info.value.sweeps == 1
        assert info.value.residual > 0

    @settings(max_examples=80, deadline=None)
    @given(complex_matrices())
    def test_reconstruction_and_unitarity(self, a):
        res = mp_oracle.svd(a)
        scale = max(1.0, np.linalg.norm(a))
        assert np.linalg.norm(res.reconstruct() - a) <= 1e-12 * scale
        u, v = res.left_vectors, res.right_vectors
        np.testing.assert_allclose(u.conj().T @ u, np.eye(u.shape[1]), atol=1e-12)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(v.shape[1]), atol=1e-12)
        assert np.all(np.diff(res.singular_values) <= 0)

    @settings(max_examples=80, deadline=None)
    @given(complex_matrices())
    def test_singular_values_match_lapack(self, a):
        ours = mp_oracle.svd(a).singular_values
        ref = np.linalg.svd(a, compute_uv=False)
        np.testing.assert_allclose(ours, ref, atol=1e-12 * max(1.0, ref.max(initial=0)))


class TestPseudoinverse:
    def test_sigma1(self, sigma1):
        np.testing.assert_allclose(
            mp_oracle.pseudoinverse(matrix_of(sigma1)), [[0, 0, 0], [0.2, 0.4, 0], [0, 0, 0]], atol=1e-15
        )

    def test_identity(self):
        np.testing.assert_allclose(mp_oracle.pseudoinverse(np.eye(3)), np.eye(3))

    def test_zero(self):
        np.testing.assert_array_equal(mp_oracle.pseudoinverse(np.zeros((2, 3))), np.zeros((3, 2)))

    def test_rank(self, sigma1):
        assert mp_oracle.rank(matrix_of(sigma1)) == 1
        assert mp_oracle.rank(np.zeros((2, 2))) == 0

    @settings(max_examples=80, deadline=None)
    @given(complex_matrices())
    def test_penrose_and_involution(self, a):
        b = mp_oracle.pseudoinverse(a)
        rep = mp_oracle.penrose_report(a, b)
        assert rep.passed, rep.to_text()
        np.testing.assert_allclose(mp_oracle.pseudoinverse(b), a, atol=1e-9 * max(1.0, np.linalg.norm(a)))
        np.testing.assert_allclose(mp_oracle.pseudoinverse(a.conj().T), b.conj().T, atol=1e-10 * max(1.0, np.linalg.norm(b)))

    @settings(max_examples=80, deadline=None)
    @given(complex_matrices())
    def test_matches_lapack(self, a):
        ref = np.linalg.pinv(a, rcond=mp_oracle.DEFAULT_RANK_TOL)
        ours = mp_oracle.pseudoinverse(a)
        assert mp_oracle.relative_residual(ours - ref, ref) <= 1e-9

    def test_range_projector(self, sigma1):
        v = np.array([1, 2, 0]) / np.sqrt(5)
        np.testing.assert_allclose(mp_oracle.range_projector(matrix_of(sigma1)), np.outer(v, v), atol=1e-15)


class TestPenroseReport:
    def test_formula_reciprocal_passes(self, sigma1):
        rep = mp_oracle.penrose_report(matrix_of(sigma1), reciprocal_matrix(sigma1))
        assert rep.passed

    def test_identity_exact(self):
        rep = mp_oracle.penrose_report(np.eye(3), np.eye(3))
        assert [c.residual for c in rep.checks] == [0.0, 0.0, 0.0, 0.0]

    def test_conjugate_transpose_fails_first_two(self, sigma1):
        a = matrix_of(sigma1)
        rep = mp_oracle.penrose_report(a, a.conj().T)
        # A A* A = 5 A and A* A A* = 5 A*, so both relative residuals equal 4
        assert rep["penrose_aba_eq_a"].residual == pytest.approx(4.0)
        assert rep["penrose_bab_eq_b"].residual == pytest.approx(4.0)
        assert not rep["penrose_aba_eq_a"].passed
        assert not rep["penrose_bab_eq_b"].passed
        assert rep["penrose_ab_hermitian"].passed
        assert rep["penrose_ba_hermitian"].passed

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mp_oracle.penrose_report(np.eye(2), np.eye(3))
