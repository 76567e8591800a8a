import numpy as np
import pytest
from numpy.testing import assert_allclose

from qschmidt.errors import InputError
from qschmidt.ketparse import Partition, StateVector, state_from_text
from qschmidt.linalg import eig_hermitian, outer, partial_trace
from qschmidt.schmidt import (
    Method,
    Verdict,
    analyze,
    correlation_matrix,
    decompose_ptrace,
    decompose_svd,
    phase_aligned_residual,
)

QUARTER = "1/2(|00>+|01>+|10>+|11>)"
W_STATE = "1/sqrt(3)(|001>+|010>+|100>)"
BELL = "1/sqrt(2)(|00>+|11>)"


def random_state(rng, qubits):
    amps = rng.normal(size=2**qubits) + 1j * rng.normal(size=2**qubits)
    return StateVector.from_amplitudes(amps)


def random_unitary(rng, n):
    h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return eig_hermitian(h + h.conj().T).eigenvectors


class TestCorrelationMatrix:
    def test_quarter_state(self):
        c = correlation_matrix(state_from_text(QUARTER), Partition(1, 2))
        assert_allclose(c, np.full((2, 2), 0.5), atol=1e-15)

    def test_basis_state(self):
        c = correlation_matrix(state_from_text("|01>"), Partition(1, 2))
        assert_allclose(c, [[0, 1], [0, 0]], atol=0)

    def test_w_state_grid(self):
        c = correlation_matrix(state_from_text(W_STATE), Partition(1, 3))
        r = 1 / np.sqrt(3)
        assert_allclose(c, [[0, r, r, 0], [r, 0, 0, 0]], atol=1e-15)

    def test_partition_must_match_state(self):
        with pytest.raises(InputError, match="partition"):
            correlation_matrix(state_from_text("|01>"), Partition(1, 3))


class TestDecomposeSvd:
    def test_quarter_state_is_separable(self):
        res = decompose_svd(state_from_text(QUARTER), Partition(1, 2))
        assert res.schmidt_number == 1
        assert res.verdict is Verdict.SEPARABLE
        assert res.method is Method.SVD
        assert_allclose(res.coefficients, [1.0], atol=1e-10)
        s = 1 / np.sqrt(2)
        assert_allclose(res.basis_a[:, 0], [s, s], atol=1e-10)
        assert_allclose(res.basis_b[:, 0], [s, s], atol=1e-10)

    def test_w_state(self):
        res = decompose_svd(state_from_text(W_STATE), Partition(1, 3))
        assert res.schmidt_number == 2
        assert res.verdict is Verdict.ENTANGLED
        assert_allclose(res.coefficients, [np.sqrt(2 / 3), np.sqrt(1 / 3)], atol=1e-10)

    def test_bell_state(self):
        res = decompose_svd(state_from_text(BELL), Partition(1, 2))
        assert res.schmidt_number == 2
        s = 1 / np.sqrt(2)
        assert_allclose(res.coefficients, [s, s], atol=1e-10)

    def test_completeness(self):
        res = decompose_svd(state_from_text(W_STATE), Partition(1, 3))
        assert res.completeness == pytest.approx(1.0, abs=1e-9)


class TestDecomposePtrace:
    def test_w_state_reduced_matrix_and_vectors(self):
        state = state_from_text(W_STATE)
        rho = outer(state.amplitudes, state.amplitudes)
        assert_allclose(partial_trace(rho, 2, 4, "B"), np.diag([2 / 3, 1 / 3]), atol=1e-15)

        res = decompose_ptrace(state, Partition(1, 3))
        assert_allclose(res.coefficients, [np.sqrt(2 / 3), np.sqrt(1 / 3)], atol=1e-10)
        s = 1 / np.sqrt(2)
        assert_allclose(res.basis_b[:, 0], [0, s, s, 0], atol=1e-10)
        assert_allclose(res.basis_b[:, 1], [1, 0, 0, 0], atol=1e-10)
        assert res.verdict is Verdict.ENTANGLED
        assert res.method is Method.PARTIAL_TRACE

    def test_product_basis_state(self):
        res = decompose_ptrace(state_from_text("|00>"), Partition(1, 2))
        assert res.schmidt_number == 1
        assert_allclose(res.coefficients, [1.0], atol=1e-12)
        assert res.verdict is Verdict.SEPARABLE

    def test_rho_a_rho_b_share_nonzero_spectrum(self):
        rng = np.random.default_rng(53)
        state = random_state(rng, 4)
        rho = outer(state.amplitudes, state.amplitudes)
        lam_a = eig_hermitian(partial_trace(rho, 2, 8, "B")).eigenvalues
        lam_b = eig_hermitian(partial_trace(rho, 2, 8, "A")).eigenvalues
        assert_allclose(lam_a, lam_b[:2], atol=1e-9)
        assert_allclose(lam_b[2:], 0.0, atol=1e-9)


class TestReconstruction:
    def test_both_methods_random_complex_states(self):
        rng = np.random.default_rng(59)
        for _ in range(25):
            qubits = int(rng.integers(2, 6))
            k = int(rng.integers(1, qubits))
            state = random_state(rng, qubits)
            part = Partition(k, qubits)
            for decompose in (decompose_svd, decompose_ptrace):
                res = decompose(state, part)
                residual = phase_aligned_residual(state.amplitudes, res.reconstruct())
                assert residual < 1e-9

    def test_basis_columns_orthonormal(self):
        rng = np.random.default_rng(61)
        state = random_state(rng, 4)
        for decompose in (decompose_svd, decompose_ptrace):
            res = decompose(state, Partition(2, 4))
            for basis in (res.basis_a, res.basis_b):
                gram = basis.conj().T @ basis
                assert_allclose(gram, np.eye(basis.shape[1]), atol=1e-10)


class TestProperties:
    def test_product_states_are_separable(self):
        rng = np.random.default_rng(67)
        for _ in range(20):
            x = rng.normal(size=2) + 1j * rng.normal(size=2)
            y = rng.normal(size=8) + 1j * rng.normal(size=8)
            state = StateVector.from_amplitudes(np.kron(x, y))
            for decompose in (decompose_svd, decompose_ptrace):
                res = decompose(state, Partition(1, 4))
                assert res.schmidt_number == 1
                assert res.coefficients[0] == pytest.approx(1.0, abs=1e-9)

    def test_methods_agree_on_random_states(self):
        rng = np.random.default_rng(71)
        for _ in range(15):
            qubits = int(rng.integers(2, 6))
            k = int(rng.integers(1, qubits))
            state = random_state(rng, qubits)
            a = decompose_svd(state, Partition(k, qubits))
            b = decompose_ptrace(state, Partition(k, qubits))
            assert a.schmidt_number == b.schmidt_number
            assert_allclose(a.coefficients, b.coefficients, atol=1e-9)

    def test_verdict_invariant_under_global_phase(self):
        rng = np.random.default_rng(73)
        state = random_state(rng, 3)
        rotated = StateVector.from_amplitudes(state.amplitudes * np.exp(1.3j))
        for s in (state, rotated):
            assert analyze(s, Partition(1, 3)).verdict is Verdict.ENTANGLED

    def test_coefficients_invariant_under_local_unitaries(self):
        rng = np.random.default_rng(79)
        state = random_state(rng, 4)
        part = Partition(2, 4)
        base = decompose_svd(state, part).coefficients
        for _ in range(5):
            u_a = random_unitary(rng, 4)
            u_b = random_unitary(rng, 4)
            moved = StateVector.from_amplitudes(np.kron(u_a, u_b) @ state.amplitudes)
            got = decompose_svd(moved, part).coefficients
            assert_allclose(got, base, atol=1e-9)


class TestAnalyze:
    def test_quarter_state(self):
        outcome = analyze(state_from_text(QUARTER), Partition(1, 2))
        assert outcome.verdict is Verdict.SEPARABLE
        assert outcome.max_deviation < 1e-12
        assert outcome.svd_residual < 1e-10
        assert outcome.ptrace_residual < 1e-10

    def test_w_state(self):
        outcome = analyze(state_from_text(W_STATE), Partition(1, 3))
        assert outcome.verdict is Verdict.ENTANGLED
        assert outcome.svd_result.schmidt_number == 2
        assert outcome.ptrace_result.schmidt_number == 2

    def test_threshold_leaving_nothing_is_an_input_error(self):
        with pytest.raises(InputError, match="leaves no Schmidt coefficients"):
            decompose_svd(state_from_text(BELL), Partition(1, 2), threshold=0.9)

    def test_negative_threshold_rejected(self):
        with pytest.raises(InputError, match="nonnegative"):
            decompose_svd(state_from_text(BELL), Partition(1, 2), threshold=-1.0)

    def test_high_threshold_trims_coefficients(self):
        res = decompose_svd(state_from_text(W_STATE), Partition(1, 3), threshold=0.6)
        assert res.schmidt_number == 1
        assert res.threshold == 0.6

    def test_coarse_threshold_truncation_is_not_an_inconsistency(self):
        # dropping sigma_2 = 1/sqrt(3) leaves residual equal to the dropped mass
        outcome = analyze(state_from_text(W_STATE), Partition(1, 3), threshold=0.6)
        assert outcome.verdict is Verdict.SEPARABLE
        assert outcome.svd_residual == pytest.approx(np.sqrt(1 / 3), abs=1e-9)
        assert outcome.ptrace_residual == pytest.approx(np.sqrt(1 / 3), abs=1e-9)
