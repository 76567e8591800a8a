"""Dense complex linear algebra sized for few-qubit systems.

All routines operate on plain ``numpy`` arrays of ``complex128`` and are
written for matrices up to 64x64 (six qubits).  Robustness and deterministic
output take priority over speed: the Hermitian eigensolver is a cyclic Jacobi
iteration, and the SVD is built on top of it, so results are reproducible
bit-for-bit across runs on the same input.

Deterministic output conventions:

* eigenvalues and singular values are returned in descending order;
* every eigenvector / right singular vector is rescaled so that its first
  component of magnitude above 1e-10 is real and positive;
* groups of singular values equal within 1e-10 are ordered by descending
  lexicographic comparison of their phase-fixed right singular vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InputError

HERMITIAN_TOL = 1e-10
PHASE_TOL = 1e-10
DEGENERACY_TOL = 1e-10

_OFF_DIAGONAL_TARGET = 1e-14
_MAX_SWEEPS = 100
_SMALL_SINGULAR = 1e-12
_EPS = float(np.finfo(np.float64).eps)


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a 2-d complex128 array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InputError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise InputError("matrix entries must be finite")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def hermitian_deviation(m: np.ndarray) -> tuple[float, int, int]:
    """Largest ``|m[i,j] - conj(m[j,i])|`` and the indices where it occurs."""
    dev = np.abs(m - dagger(m))
    i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return float(dev[i, j]), int(i), int(j)


def require_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL, name: str = "matrix") -> None:
    if m.shape[0] != m.shape[1]:
        raise InputError(f"{name} must be square, got shape {m.shape}")
    dev, i, j = hermitian_deviation(m)
    if dev > tol:
        raise InputError(
            f"{name} is not Hermitian: max asymmetry |m[{i},{j}] - conj(m[{j},{i}])| = {dev:.3e}"
        )


def tensor(a, b) -> np.ndarray:
    """Kronecker (tensor) product of two matrices.

    ``out[(i*b.rows+p), (j*b.cols+q)] = a[i,j] * b[p,q]``.
    """
    return np.kron(as_matrix(a), as_matrix(b))


def outer(a, b) -> np.ndarray:
    """Outer product ``a b†`` of two column vectors.

    1-d arrays are treated as columns; matrices with more than one column
    are rejected.
    """
    ca = _as_column(a, "a")
    cb = _as_column(b, "b")
    return ca @ dagger(cb)


def _as_column(v, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[1] != 1:
        raise InputError(f"{name} must be a column vector, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise InputError(f"{name} entries must be finite")
    return a


def trace(m) -> complex:
    """Sum of the diagonal; rejects non-square input."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InputError(f"trace needs a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def partial_trace(rho, dim_a: int, dim_b: int, traced: Literal["A", "B"]) -> np.ndarray:
    """Trace out one subsystem of a (dim_a*dim_b) x (dim_a*dim_b) operator.

    ``traced="B"`` keeps subsystem A: ``out[i,j] = sum_p rho[i*dim_b+p, j*dim_b+p]``.
    ``traced="A"`` keeps subsystem B: ``out[p,q] = sum_i rho[i*dim_b+p, i*dim_b+q]``.
    """
    a = as_matrix(rho)
    side = dim_a * dim_b
    if dim_a < 1 or dim_b < 1:
        raise InputError(f"subsystem dimensions must be positive, got ({dim_a}, {dim_b})")
    if a.shape != (side, side):
        raise InputError(
            f"operator shape {a.shape} does not match subsystem dimensions ({dim_a}, {dim_b})"
        )
    blocks = a.reshape(dim_a, dim_b, dim_a, dim_b)
    if traced == "B":
        return np.trace(blocks, axis1=1, axis2=3)
    if traced == "A":
        return np.trace(blocks, axis1=0, axis2=2)
    raise InputError(f"traced must be 'A' or 'B', got {traced!r}")


@dataclass
class EigenResult:
    """Hermitian eigendecomposition, eigenvalues descending.

    ``eigenvectors[:, k]`` is the unit eigenvector for ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass
class SvdResult:
    """Thin SVD ``m = u @ diag(singular_values) @ v†`` with descending values."""

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray


def eig_hermitian(m) -> EigenResult:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    The input must be Hermitian within 1e-10 (checked; the error names the
    worst offending entry).  Sweeps continue until the off-diagonal Frobenius
    norm drops below 1e-14, no rotation fires in a whole sweep, or 100 sweeps
    have run.
    """
    a = as_matrix(m)
    require_hermitian(a)
    n = a.shape[0]
    a = (a + dagger(a)) / 2.0
    v = np.eye(n, dtype=np.complex128)
    if n > 1:
        skip = _EPS * max(float(np.linalg.norm(a)), 1.0)
        for _ in range(_MAX_SWEEPS):
            if _offdiagonal_norm(a) < _OFF_DIAGONAL_TARGET:
                break
            rotated = False
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if abs(a[p, q]) > skip:
                        _jacobi_rotate(a, v, p, q)
                        rotated = True
            if not rotated:
                break
    lam = np.diag(a).real.copy()
    order = np.argsort(-lam, kind="stable")
    return EigenResult(lam[order], _fix_column_phases(v[:, order]))


def _offdiagonal_norm(a: np.ndarray) -> float:
    # norm of the strictly off-diagonal part, summed directly: computing it
    # as total minus diagonal mass would cancel away everything below
    # sqrt(eps) and fake convergence
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    # Unitary G differing from the identity only on the (p, q) plane, chosen
    # so that (G† a G)[p, q] = 0.  The complex phase of a[p, q] is absorbed
    # first, then a standard real rotation is applied.
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    app = a[p, p].real
    aqq = a[q, q].real
    tau = (aqq - app) / (2.0 * r)
    t = 1.0 / (abs(tau) + math.sqrt(1.0 + tau * tau))
    if tau < 0.0:
        t = -t
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    gpp, gpq = c, s
    gqp, gqq = -s * np.conj(phase), c * np.conj(phase)

    colp, colq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = colp * gpp + colq * gqp
    a[:, q] = colp * gpq + colq * gqq
    rowp, rowq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = np.conj(gpp) * rowp + np.conj(gqp) * rowq
    a[q, :] = np.conj(gpq) * rowp + np.conj(gqq) * rowq
    # exact values on the rotated 2x2 block
    a[p, p] = app - t * r
    a[q, q] = aqq + t * r
    a[p, q] = 0.0
    a[q, p] = 0.0

    colp, colq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = colp * gpp + colq * gqp
    v[:, q] = colp * gpq + colq * gqq


def _fix_column_phases(mat: np.ndarray, tol: float = PHASE_TOL) -> np.ndarray:
    out = mat.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        big = np.flatnonzero(np.abs(col) > tol)
        if big.size:
            lead = col[big[0]]
            out[:, k] = col * (np.conj(lead) / abs(lead))
    return out


def svd(m) -> SvdResult:
    """Thin complex SVD with descending singular values (zeros retained).

    Right singular vectors come from the Hermitian eigendecomposition of
    ``m† m``.  Each singular value is then evaluated as ``|m v_k|`` rather
    than as the square root of the corresponding eigenvalue: the two agree
    within 1e-9, but the norm form avoids the sqrt(eps) noise floor that
    squaring puts under exact zeros.  Left vectors are ``m v_k / s_k`` for
    ``s_k > 1e-12``; the remaining columns are completed by Gram-Schmidt
    against the computed ones.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    k = min(rows, cols)
    gram = eig_hermitian(dagger(a) @ a)
    lam = np.clip(gram.eigenvalues[:k], 0.0, None)
    sing = np.sqrt(lam)
    v = gram.eigenvectors[:, :k].copy()
    sing, v = _order_degenerate_groups(sing, v)

    mapped = a @ v
    sing = np.linalg.norm(mapped, axis=0)
    order = np.argsort(-sing, kind="stable")
    sing, v, mapped = sing[order], v[:, order], mapped[:, order]

    u = np.zeros((rows, k), dtype=np.complex128)
    nonzero = [j for j in range(k) if sing[j] > _SMALL_SINGULAR]
    for j in nonzero:
        u[:, j] = mapped[:, j] / sing[j]
    done = _orthonormalize_in_place(u, nonzero)
    for j in range(k):
        if j in done:
            continue
        u[:, j] = _fresh_orthonormal_column(u[:, done], rows)
        done.append(j)
        done.sort()
    return SvdResult(u, sing, v)


def _order_degenerate_groups(sing: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Deterministic ordering inside groups of equal singular values: sort the
    # phase-fixed right singular vectors lexicographically, largest first.
    order = list(range(sing.size))
    i = 0
    while i < sing.size:
        j = i
        while j + 1 < sing.size and sing[i] - sing[j + 1] <= DEGENERACY_TOL:
            j += 1
        if j > i:
            group = order[i : j + 1]
            group.sort(key=lambda idx: _lexicographic_key(v[:, idx]), reverse=True)
            order[i : j + 1] = group
        i = j + 1
    return sing[order], v[:, order]


def _lexicographic_key(col: np.ndarray) -> tuple:
    return tuple(part for z in col for part in (z.real, z.imag))


def _orthonormalize_in_place(u: np.ndarray, columns: list[int]) -> list[int]:
    # Two modified Gram-Schmidt passes; columns are already near-orthonormal.
    # A column that collapses (numerically dependent on earlier ones) is left
    # for Gram-Schmidt completion; the list of surviving columns is returned.
    kept: list[int] = []
    for j in columns:
        x = u[:, j]
        ok = True
        for _ in range(2):
            for i in kept:
                x = x - u[:, i] * np.vdot(u[:, i], x)
            nx = float(np.linalg.norm(x))
            if nx < 1e-8:
                ok = False
                break
            x = x / nx
        if ok:
            u[:, j] = x
            kept.append(j)
    return kept


def _fresh_orthonormal_column(existing: np.ndarray, rows: int) -> np.ndarray:
    # Start from the standard basis vector least represented in the span of
    # the existing columns, then orthogonalize twice.
    row_mass = np.sum(np.abs(existing) ** 2, axis=1) if existing.size else np.zeros(rows)
    i = int(np.argmin(row_mass))
    w = np.zeros(rows, dtype=np.complex128)
    w[i] = 1.0
    for _ in range(2):
        if existing.size:
            w = w - existing @ (dagger(existing) @ w)
    w = w / np.linalg.norm(w)
    return _fix_column_phases(w.reshape(-1, 1)).ravel()


def matrix_to_json(m) -> dict:
    """Serializable form: ``{"rows", "cols", "entries": [[re, im], ...]}`` row-major."""
    a = as_matrix(m)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Parse the matrix JSON format produced by :func:`matrix_to_json`."""
    if not isinstance(obj, dict):
        raise InputError("matrix JSON must be an object")
    missing = {"rows", "cols", "entries"} - set(obj)
    if missing:
        raise InputError(f"matrix JSON missing keys: {sorted(missing)}")
    rows, cols = obj["rows"], obj["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise InputError("matrix JSON rows/cols must be positive integers")
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise InputError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = []
    for idx, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise InputError(f"entry {idx} must be a [re, im] pair")
        re, im = pair
        if not all(isinstance(x, (int, float)) and math.isfinite(x) for x in (re, im)):
            raise InputError(f"entry {idx} must hold finite numbers")
        flat.append(complex(re, im))
    return np.array(flat, dtype=np.complex128).reshape(rows, cols)
