"""Operator Schmidt decomposition and the witness W = mu1*I - X.

A bipartite operator X on a (dim_a * dim_b)-dimensional space decomposes as
X = sum_i mu_i G^A_i (x) G^B_i with Hilbert-Schmidt-orthonormal factors.  The
construction realigns X into a dim_a^2 x dim_b^2 matrix whose SVD supplies
the coefficients and (reshaped) factor operators.  The witness built from the
largest coefficient flags a state rho as entangled when tr[W rho] < 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputError
from .linalg import as_matrix, eig_hermitian, require_hermitian, svd, trace

DEFAULT_THRESHOLD = 1e-10
DETECTION_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-10

TRACE_TOL = 1e-9
PSD_TOL = 1e-9


class WitnessVerdict(str, Enum):
    DETECTED = "detected"
    NOT_DETECTED = "not_detected"


@dataclass(frozen=True)
class OperatorSchmidt:
    """Operator Schmidt data: X = sum_i mu_i kron(ops_a[i], ops_b[i])."""

    coefficients: np.ndarray
    ops_a: list[np.ndarray]
    ops_b: list[np.ndarray]

    def reconstruct(self) -> np.ndarray:
        terms = (
            mu * np.kron(ga, gb)
            for mu, ga, gb in zip(self.coefficients, self.ops_a, self.ops_b)
        )
        return sum(terms)


@dataclass(frozen=True)
class WitnessReport:
    witness: np.ndarray
    mu1: float | None
    expectation: float
    verdict: WitnessVerdict


def _check_sides(x: np.ndarray, dim_a: int, dim_b: int) -> None:
    if dim_a < 1 or dim_b < 1:
        raise InputError(f"subsystem dimensions must be positive, got ({dim_a}, {dim_b})")
    side = dim_a * dim_b
    if x.shape != (side, side):
        raise InputError(
            f"operator shape {x.shape} does not match subsystem dimensions "
            f"({dim_a}, {dim_b})"
        )


def realign(x, dim_a: int, dim_b: int) -> np.ndarray:
    """Index shuffle R[(i,i'),(j,j')] = x[(i*dim_b+j),(i'*dim_b+j')].

    Rows of R enumerate A-side index pairs, columns B-side pairs, both
    row-major; the result has shape dim_a^2 x dim_b^2.
    """
    a = as_matrix(x)
    _check_sides(a, dim_a, dim_b)
    return (
        a.reshape(dim_a, dim_b, dim_a, dim_b)
        .transpose(0, 2, 1, 3)
        .reshape(dim_a * dim_a, dim_b * dim_b)
        .copy()
    )


def realign_inverse(r, dim_a: int, dim_b: int) -> np.ndarray:
    """Undo :func:`realign`; the shuffle is an involution on the index layout."""
    a = as_matrix(r)
    if a.shape != (dim_a * dim_a, dim_b * dim_b):
        raise InputError(
            f"realigned shape {a.shape} does not match subsystem dimensions "
            f"({dim_a}, {dim_b})"
        )
    side = dim_a * dim_b
    return (
        a.reshape(dim_a, dim_a, dim_b, dim_b)
        .transpose(0, 2, 1, 3)
        .reshape(side, side)
        .copy()
    )


def operator_schmidt(
    x, dim_a: int, dim_b: int, threshold: float = DEFAULT_THRESHOLD
) -> OperatorSchmidt:
    """Operator Schmidt decomposition via realignment plus SVD.

    mu_i are the singular values of the realigned matrix (those above
    ``threshold``); G^A_i is the left singular vector reshaped to dim_a x
    dim_a, G^B_i the conjugated right singular vector reshaped to dim_b x
    dim_b, making the reconstruction sum exact.
    """
    if threshold < 0:
        raise InputError(f"threshold must be nonnegative, got {threshold}")
    r = realign(x, dim_a, dim_b)
    res = svd(r)
    keep = res.singular_values > threshold
    if not np.any(keep):
        raise InputError(
            f"threshold {threshold} leaves no operator Schmidt coefficients "
            f"(largest is {res.singular_values.max():.3e})"
        )
    mu = res.singular_values[keep]
    ops_a = [res.u[:, k].reshape(dim_a, dim_a).copy() for k in np.flatnonzero(keep)]
    ops_b = [
        res.v[:, k].conj().reshape(dim_b, dim_b).copy() for k in np.flatnonzero(keep)
    ]
    return OperatorSchmidt(coefficients=mu, ops_a=ops_a, ops_b=ops_b)


def build_witness(x, dim_a: int, dim_b: int) -> tuple[np.ndarray, float]:
    """W = mu1*I - x for Hermitian x, with mu1 its largest operator Schmidt
    coefficient.  Returns (W, mu1)."""
    a = as_matrix(x)
    _check_sides(a, dim_a, dim_b)
    require_hermitian(a, name="witness target")
    mu1 = float(operator_schmidt(a, dim_a, dim_b).coefficients[0])
    w = mu1 * np.eye(a.shape[0], dtype=np.complex128) - a
    return w, mu1


def _require_density_matrix(rho: np.ndarray) -> None:
    require_hermitian(rho, name="test operator")
    tr = trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InputError(f"test operator trace must be 1, got {tr.real:.6g}")
    lam = eig_hermitian(rho).eigenvalues
    if lam.min() < -PSD_TOL:
        raise InputError(
            f"test operator is not positive semidefinite "
            f"(smallest eigenvalue {lam.min():.3e})"
        )


def evaluate_witness(w, rho, mu1: float | None = None) -> WitnessReport:
    """tr[W rho] with the sign verdict: Detected iff expectation < -1e-10.

    ``rho`` must be a density matrix (Hermitian, unit trace, PSD); the first
    violated property is named in the error.  ``mu1`` is carried through to
    the report when the caller has it.
    """
    wm = as_matrix(w)
    rm = as_matrix(rho)
    if wm.shape != rm.shape or wm.shape[0] != wm.shape[1]:
        raise InputError(
            f"witness shape {wm.shape} does not match test operator shape {rm.shape}"
        )
    _require_density_matrix(rm)
    value = trace(wm @ rm)
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise InputError(
            f"expectation has imaginary residue {value.imag:.3e}; "
            f"the witness is not Hermitian"
        )
    expectation = float(value.real)
    verdict = (
        WitnessVerdict.DETECTED
        if expectation < -DETECTION_TOL
        else WitnessVerdict.NOT_DETECTED
    )
    return WitnessReport(witness=wm, mu1=mu1, expectation=expectation, verdict=verdict)
