"""Dense complex linear algebra on square matrices.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Bipartite
operators use the composite index ``i * dimB + j`` for the pair ``(i, j)``, so
subsystem A is always the slow index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DimensionError, ValidationError

HERMITIAN_ATOL = 1e-10
DEFAULT_EIG_TOL = 1e-12
MAX_SWEEPS = 100


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a square complex matrix, raising DimensionError otherwise."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"matmul dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``(i, j)`` lands on row ``i * b.dim + j``."""
    return np.kron(as_matrix(a), as_matrix(b))


def _split(rho, dimA: int, dimB: int) -> np.ndarray:
    rho = as_matrix(rho)
    if dimA < 1 or dimB < 1 or rho.shape[0] != dimA * dimB:
        raise DimensionError(
            f"matrix of dim {rho.shape[0]} does not factor as {dimA} x {dimB}"
        )
    # axes: (i, j, k, l) for element <i j| rho |k l>
    return rho.reshape(dimA, dimB, dimA, dimB)


def partial_trace(rho, dimA: int, dimB: int, which: str = "B") -> np.ndarray:
    """Trace out subsystem ``which`` ("A" or "B") of a ``dimA * dimB`` operator."""
    t = _split(rho, dimA, dimB)
    if which == "B":
        return np.einsum("ijkj->ik", t)
    if which == "A":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def partial_transpose(rho, dimA: int, dimB: int) -> np.ndarray:
    """Transpose subsystem B: ``<i j|rho|k l>`` moves to ``<i l|.|k j>``."""
    t = _split(rho, dimA, dimB)
    return t.transpose(0, 3, 2, 1).reshape(dimA * dimB, dimA * dimB)


def is_hermitian(a, atol: float = HERMITIAN_ATOL) -> bool:
    a = as_matrix(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= atol)


@dataclass(frozen=True)
class EigenResult:
    eigenvalues: np.ndarray
    offdiag_residual: float
    sweeps: int


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # n - 1 rounds of n/2 disjoint pairs covering every (p, q) once per sweep
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        pairs = [(players[i], players[n - 1 - i]) for i in range(n // 2)]
        p = np.array([min(x) for x in pairs])
        q = np.array([max(x) for x in pairs])
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _offdiag_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_symmetric(a: np.ndarray, tol: float = DEFAULT_EIG_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so that
    the ``n/2`` rotations of a round touch disjoint rows and can be applied
    together. Iteration stops once the off-diagonal Frobenius norm drops to
    ``tol * ||a||_F``.

    Returns
    -------
    (eigenvalues, relative_residual, sweeps)
        Eigenvalues in ascending order.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.sort(np.diag(a)), 0.0, 0
    if n % 2:
        # pad with an isolated zero so the round-robin schedule is complete
        a = np.pad(a, ((0, 1), (0, 1)))
    rounds = _round_robin(a.shape[0])

    off = _offdiag_norm(a)
    sweeps = 0
    while off > tol * scale:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps", residual=off / scale
            )
        for p, q in rounds:
            apq = a[p, q]
            app = a[p, p]
            aqq = a[q, q]
            active = apq != 0.0
            safe = np.where(active, apq, 1.0)
            with np.errstate(over="ignore"):
                # huge theta means a negligible a_pq; t underflows to 0 harmlessly
                theta = (aqq - app) / (2.0 * safe)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(theta == 0.0, 1.0, t)
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            colp = a[:, p].copy()
            colq = a[:, q]
            a[:, p] = c * colp - s * colq
            a[:, q] = s * colp + c * colq
            rowp = a[p, :].copy()
            rowq = a[q, :]
            a[p, :] = c[:, None] * rowp - s[:, None] * rowq
            a[q, :] = s[:, None] * rowp + c[:, None] * rowq
            a[p, q] = 0.0
            a[q, p] = 0.0
        sweeps += 1
        off = _offdiag_norm(a)

    # a padded row stays decoupled and sits at index n, past the slice
    return np.sort(np.diag(a)[:n]), off / scale, sweeps


def hermitian_eigenvalues(a, tol: float = DEFAULT_EIG_TOL) -> EigenResult:
    """Spectrum of a Hermitian matrix.

    The complex ``N x N`` problem is embedded in the real symmetric ``2N x 2N``
    matrix ``[[Re A, -Im A], [Im A, Re A]]``, whose spectrum is that of ``A``
    with every eigenvalue doubled. After Jacobi diagonalization every second
    sorted value is kept.

    Raises
    ------
    ValidationError
        If ``a`` is not Hermitian within 1e-10 elementwise.
    ConvergenceError
        If the sweep cap is reached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_matrix(a)
    if not is_hermitian(a):
        raise ValidationError("hermitian_eigenvalues needs a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    re, im = a.real, a.imag
    emb = np.block([[re, -im], [im, re]])
    vals, residual, sweeps = jacobi_symmetric(emb, tol=tol)
    return EigenResult(eigenvalues=vals[0::2].copy(), offdiag_residual=residual, sweeps=sweeps)
