import numpy as np
import pytest
from numpy.testing import assert_allclose

from qschmidt.errors import InputError
from qschmidt.linalg import (
    dagger,
    eig_hermitian,
    matrix_from_json,
    matrix_to_json,
    outer,
    partial_trace,
    require_hermitian,
    svd,
    tensor,
    trace,
)


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


def random_complex(rng, rows, cols):
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


class TestBasics:
    def test_tensor_plus_plus(self):
        plus = np.array([[1.0], [1.0]]) / np.sqrt(2)
        got = tensor(plus, plus)
        assert_allclose(got, np.full((4, 1), 0.5), atol=1e-15)

    def test_tensor_matches_kron_entrywise(self):
        rng = np.random.default_rng(7)
        a = random_complex(rng, 2, 3)
        b = random_complex(rng, 3, 2)
        got = tensor(a, b)
        assert got.shape == (6, 6)
        for i in range(2):
            for j in range(3):
                for p in range(3):
                    for q in range(2):
                        assert got[i * 3 + p, j * 2 + q] == pytest.approx(a[i, j] * b[p, q])

    def test_outer_projector(self):
        v = np.array([0.6, 0.8j])
        p = outer(v, v)
        assert_allclose(p, np.array([[0.36, -0.48j], [0.48j, 0.64]]), atol=1e-15)
        assert trace(p) == pytest.approx(1.0)

    def test_outer_rejects_matrices(self):
        with pytest.raises(InputError):
            outer(np.eye(2), np.eye(2))

    def test_trace_requires_square(self):
        with pytest.raises(InputError):
            trace(np.ones((2, 3)))

    def test_rejects_nonfinite(self):
        with pytest.raises(InputError):
            trace(np.array([[np.nan, 0], [0, 1]]))


class TestPartialTrace:
    def test_product_state_factors(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a = rng.normal(size=2) + 1j * rng.normal(size=2)
            b = rng.normal(size=4) + 1j * rng.normal(size=4)
            a /= np.linalg.norm(a)
            b /= np.linalg.norm(b)
            rho = outer(np.kron(a, b), np.kron(a, b))
            assert_allclose(partial_trace(rho, 2, 4, "B"), outer(a, a), atol=1e-12)
            assert_allclose(partial_trace(rho, 2, 4, "A"), outer(b, b), atol=1e-12)

    def test_trace_preserved(self):
        rng = np.random.default_rng(5)
        rho = random_hermitian(rng, 6)
        for traced in ("A", "B"):
            assert trace(partial_trace(rho, 2, 3, traced)) == pytest.approx(trace(rho))

    def test_bell_state_reduction_is_maximally_mixed(self):
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        rho = outer(bell, bell)
        assert_allclose(partial_trace(rho, 2, 2, "B"), np.eye(2) / 2, atol=1e-15)
        assert_allclose(partial_trace(rho, 2, 2, "A"), np.eye(2) / 2, atol=1e-15)

    def test_w_state_reductions(self):
        # |psi> = (|001> + |010> + |100>)/sqrt(3), split as qubit 1 vs qubits 2,3
        w = np.zeros(8)
        w[[1, 2, 4]] = 1 / np.sqrt(3)
        rho = outer(w, w)
        rho_a = partial_trace(rho, 2, 4, "B")
        assert_allclose(rho_a, np.diag([2 / 3, 1 / 3]), atol=1e-15)
        rho_b = partial_trace(rho, 2, 4, "A")
        expected = np.array(
            [
                [1 / 3, 0, 0, 0],
                [0, 1 / 3, 1 / 3, 0],
                [0, 1 / 3, 1 / 3, 0],
                [0, 0, 0, 0],
            ]
        )
        assert_allclose(rho_b, expected, atol=1e-15)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(InputError):
            partial_trace(np.eye(6), 2, 2, "B")


class TestEigHermitian:
    def test_diagonal_passthrough(self):
        res = eig_hermitian(np.diag([2 / 3, 1 / 3]))
        assert_allclose(res.eigenvalues, [2 / 3, 1 / 3], atol=1e-15)
        assert_allclose(res.eigenvectors, np.eye(2), atol=1e-15)

    def test_half_ones_matrix(self):
        res = eig_hermitian(np.full((2, 2), 0.5))
        assert_allclose(res.eigenvalues, [1.0, 0.0], atol=1e-14)
        s = 1 / np.sqrt(2)
        assert_allclose(np.abs(res.eigenvectors[:, 0]), [s, s], atol=1e-14)

    def test_w_state_reduced_spectrum(self):
        m = np.array(
            [
                [1 / 3, 0, 0, 0],
                [0, 1 / 3, 1 / 3, 0],
                [0, 1 / 3, 1 / 3, 0],
                [0, 0, 0, 0],
            ]
        )
        res = eig_hermitian(m)
        assert_allclose(res.eigenvalues, [2 / 3, 1 / 3, 0, 0], atol=1e-14)

    def test_against_numpy_random_hermitian(self):
        rng = np.random.default_rng(42)
        for n in (2, 3, 4, 8, 16):
            for _ in range(5):
                m = random_hermitian(rng, n)
                res = eig_hermitian(m)
                assert_allclose(res.eigenvalues, np.linalg.eigvalsh(m)[::-1], atol=1e-10)

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(3)
        for n in (2, 5, 9):
            m = random_hermitian(rng, n)
            res = eig_hermitian(m)
            v = res.eigenvectors
            assert_allclose(dagger(v) @ v, np.eye(n), atol=1e-12)
            assert_allclose(v @ np.diag(res.eigenvalues) @ dagger(v), m, atol=1e-11)

    def test_descending_order(self):
        rng = np.random.default_rng(17)
        m = random_hermitian(rng, 7)
        lam = eig_hermitian(m).eigenvalues
        assert np.all(np.diff(lam) <= 1e-12)

    def test_eigenvector_phase_convention(self):
        rng = np.random.default_rng(23)
        v = eig_hermitian(random_hermitian(rng, 5)).eigenvectors
        for k in range(5):
            lead = v[np.abs(v[:, k]) > 1e-10, k][0]
            assert lead.real > 0
            assert abs(lead.imag) < 1e-12

    def test_determinism(self):
        rng = np.random.default_rng(9)
        m = random_hermitian(rng, 6)
        a = eig_hermitian(m)
        b = eig_hermitian(m.copy())
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    def test_rejects_non_hermitian(self):
        with pytest.raises(InputError, match="not Hermitian"):
            eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_require_hermitian_names_worst_entry(self):
        m = np.eye(3, dtype=complex)
        m[0, 2] = 1e-3
        with pytest.raises(InputError, match=r"m\[0,2\]"):
            require_hermitian(m)


class TestSvd:
    def test_bell_correlation_matrix(self):
        c = np.full((2, 2), 0.5)
        res = svd(c)
        assert_allclose(res.singular_values, [1.0, 0.0], atol=1e-14)
        s = 1 / np.sqrt(2)
        assert_allclose(res.v[:, 0], [s, s], atol=1e-14)
        assert_allclose(res.u[:, 0], [s, s], atol=1e-14)
        # the zero-value pair still comes back orthonormal
        assert_allclose(dagger(res.u) @ res.u, np.eye(2), atol=1e-12)
        assert_allclose(dagger(res.v) @ res.v, np.eye(2), atol=1e-12)

    def test_values_match_numpy(self):
        rng = np.random.default_rng(31)
        for rows, cols in [(2, 2), (3, 5), (5, 3), (4, 4), (8, 8)]:
            m = random_complex(rng, rows, cols)
            got = svd(m).singular_values
            assert_allclose(got, np.linalg.svd(m, compute_uv=False), atol=1e-10)

    def test_reconstruction(self):
        rng = np.random.default_rng(13)
        for rows, cols in [(2, 2), (2, 4), (4, 2), (6, 6), (3, 7)]:
            m = random_complex(rng, rows, cols)
            res = svd(m)
            approx = res.u @ np.diag(res.singular_values) @ dagger(res.v)
            assert_allclose(approx, m, atol=1e-10)

    def test_rank_deficient_reconstruction(self):
        rng = np.random.default_rng(29)
        a = random_complex(rng, 4, 2)
        b = random_complex(rng, 2, 4)
        m = a @ b  # rank two inside a 4x4
        res = svd(m)
        assert res.singular_values[2] < 1e-10
        assert res.singular_values[3] < 1e-10
        approx = res.u @ np.diag(res.singular_values) @ dagger(res.v)
        assert_allclose(approx, m, atol=1e-10)
        assert_allclose(dagger(res.u) @ res.u, np.eye(4), atol=1e-10)

    def test_descending_values(self):
        rng = np.random.default_rng(37)
        m = random_complex(rng, 6, 6)
        s = svd(m).singular_values
        assert np.all(np.diff(s) <= 1e-12)

    def test_degenerate_values_are_ordered_deterministically(self):
        # identity has a fully degenerate spectrum; repeated runs must agree
        first = svd(np.eye(4, dtype=complex))
        second = svd(np.eye(4, dtype=complex))
        assert np.array_equal(first.v, second.v)
        assert np.array_equal(first.u, second.u)
        assert_allclose(first.singular_values, np.ones(4), atol=1e-14)
        approx = first.u @ np.diag(first.singular_values) @ dagger(first.v)
        assert_allclose(approx, np.eye(4), atol=1e-12)

    def test_right_vector_phase_convention(self):
        rng = np.random.default_rng(41)
        res = svd(random_complex(rng, 5, 5))
        for k in range(5):
            lead = res.v[np.abs(res.v[:, k]) > 1e-10, k][0]
            assert lead.real > 0
            assert abs(lead.imag) < 1e-12

    def test_thin_shapes(self):
        rng = np.random.default_rng(43)
        m = random_complex(rng, 5, 3)
        res = svd(m)
        assert res.u.shape == (5, 3)
        assert res.v.shape == (3, 3)
        assert res.singular_values.shape == (3,)

    def test_true_zeros_stay_tiny(self):
        # rank-1 outer products must not pick up a sqrt(eps) noise floor
        rng = np.random.default_rng(47)
        for _ in range(20):
            x = rng.normal(size=4) + 1j * rng.normal(size=4)
            y = rng.normal(size=4) + 1j * rng.normal(size=4)
            x /= np.linalg.norm(x)
            y /= np.linalg.norm(y)
            s = svd(np.outer(x, y)).singular_values
            assert s[0] == pytest.approx(1.0, abs=1e-12)
            assert np.all(s[1:] < 1e-12)


class TestMatrixJson:
    def test_round_trip(self):
        rng = np.random.default_rng(19)
        m = random_complex(rng, 3, 2)
        assert_allclose(matrix_from_json(matrix_to_json(m)), m, atol=0)

    def test_rejects_bad_payloads(self):
        with pytest.raises(InputError):
            matrix_from_json([1, 2, 3])
        with pytest.raises(InputError):
            matrix_from_json({"rows": 2, "cols": 2})
        with pytest.raises(InputError):
            matrix_from_json({"rows": 2, "cols": 2, "entries": [[0, 0]]})
        with pytest.raises(InputError):
            matrix_from_json({"rows": 1, "cols": 1, "entries": [[np.inf, 0]]})
        with pytest.raises(InputError):
            matrix_from_json({"rows": 0, "cols": 1, "entries": []})
