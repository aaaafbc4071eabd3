"""Initial states, density matrices and spin operators.

Basis conventions
-----------------
* Qubits: ``|0>`` is the excited level (``sigma_z = +1``) and ``sigma_minus =
  |1><0|`` lowers it.
* Spin ``f``: levels are ordered by descending magnetic number, so index ``k``
  carries ``m = f - k`` and ``S_z = diag(f, f-1, ..., -f)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError, ValidationError

NORM_ATOL = 1e-12
TRACE_ATOL = 1e-10
PSD_SLACK = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValidationError(f"state vector has norm {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Bipartite density matrix on ``dimA * dimB`` levels.

    Construction checks Hermiticity (1e-10 elementwise), unit trace (1e-10) and
    positivity down to ``-psd_slack``. A single-particle state is the case
    ``dimB == 1``.
    """

    mat: np.ndarray
    dimA: int
    dimB: int = 1
    psd_slack: float = field(default=PSD_SLACK, compare=False, repr=False)

    def __post_init__(self):
        m = linalg.as_matrix(self.mat)
        if m.shape[0] != self.dimA * self.dimB:
            raise DimensionError(
                f"matrix dim {m.shape[0]} != dimA * dimB = {self.dimA * self.dimB}"
            )
        if not linalg.is_hermitian(m):
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        lo = linalg.hermitian_eigenvalues(m).eigenvalues[0]
        if lo < -self.psd_slack:
            raise ValidationError(f"density matrix has negative eigenvalue {lo!r}")
        object.__setattr__(self, "mat", _frozen(m))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def reduced(self, which: str = "B") -> np.ndarray:
        """Partial trace over subsystem ``which``."""
        return linalg.partial_trace(self.mat, self.dimA, self.dimB, which)


def _check_d(d: int) -> None:
    if int(d) != d or d < 2:
        raise ValueError(f"local dimension must be an integer >= 2, got {d!r}")


def max_entangled(d: int) -> PureState:
    """``(1/sqrt(d)) sum_i |i, i>`` on ``d x d`` levels."""
    _check_d(d)
    amps = np.zeros(d * d, dtype=complex)
    amps[np.arange(d) * (d + 1)] = 1.0 / np.sqrt(d)
    return PureState(amps)


def singlet() -> PureState:
    """``(|01> - |10>) / sqrt(2)``."""
    return PureState(np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0))


def triplet0() -> PureState:
    """``(|01> + |10>) / sqrt(2)``, the symmetric partner of :func:`singlet`."""
    return PureState(np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0))


def anticorrelated(d: int) -> PureState:
    """Equal superposition of ``|m, -m>`` over the ``d`` spin levels.

    Normalized with ``1/sqrt(d)``. Under the descending-``m`` ordering the level
    ``-m`` of index ``k`` is index ``d - 1 - k``.
    """
    _check_d(d)
    amps = np.zeros(d * d, dtype=complex)
    k = np.arange(d)
    amps[k * d + (d - 1 - k)] = 1.0 / np.sqrt(d)
    return PureState(amps)


def projector(psi: PureState, dimA: int, dimB: int = 1) -> DensityMatrix:
    if psi.dim != dimA * dimB:
        raise DimensionError(f"state of dim {psi.dim} does not match {dimA} x {dimB}")
    v = psi.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), dimA, dimB)


def product_state(rho_a, rho_b) -> DensityMatrix:
    rho_a, rho_b = linalg.as_matrix(rho_a), linalg.as_matrix(rho_b)
    return DensityMatrix(linalg.kron(rho_a, rho_b), rho_a.shape[0], rho_b.shape[0])


def maximally_mixed(dimA: int, dimB: int = 1) -> DensityMatrix:
    n = dimA * dimB
    return DensityMatrix(np.eye(n) / n, dimA, dimB)


@dataclass(frozen=True, eq=False)
class SpinOperators:
    two_f: int
    Sx: np.ndarray
    Sy: np.ndarray
    Sz: np.ndarray
    Splus: np.ndarray
    Sminus: np.ndarray

    @property
    def f(self) -> float:
        return self.two_f / 2

    @property
    def d(self) -> int:
        return self.two_f + 1

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic numbers in basis order, ``f`` down to ``-f``."""
        return self.f - np.arange(self.d)


def spin_operators(two_f: int) -> SpinOperators:
    """Angular-momentum matrices for spin ``f = two_f / 2`` (hbar = 1)."""
    if int(two_f) != two_f or two_f < 1:
        raise ValueError(f"two_f must be an integer >= 1, got {two_f!r}")
    two_f = int(two_f)
    f = two_f / 2
    m = f - np.arange(two_f + 1)
    # <m+1|S+|m> sits at row k-1, column k when m = m_k
    lower = m[1:]
    splus = np.diag(np.sqrt((f - lower) * (f + lower + 1)), k=1).astype(complex)
    sminus = splus.conj().T
    return SpinOperators(
        two_f=two_f,
        Sx=_frozen((splus + sminus) / 2),
        Sy=_frozen((splus - sminus) / 2j),
        Sz=_frozen(np.diag(m)),
        Splus=_frozen(splus),
        Sminus=_frozen(sminus),
    )


SIGMA_Z = _frozen(np.diag([1.0, -1.0]))
SIGMA_MINUS = _frozen(np.array([[0.0, 0.0], [1.0, 0.0]]))
SIGMA_PLUS = _frozen(SIGMA_MINUS.T)
