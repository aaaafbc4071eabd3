"""Lindblad master equations and a fixed-step RK4 propagator."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import linalg, states
from .errors import DimensionError, IntegrationError, ValidationError
from .states import DensityMatrix

logger = logging.getLogger(__name__)

TRAJECTORY_PSD_SLACK = 1e-6


@dataclass(frozen=True, eq=False)
class LindbladModel:
    """``drho/dt = -i[H, rho] + sum_j (g_j/2)(2 L rho L^+ - L^+L rho - rho L^+L)``."""

    hamiltonian: np.ndarray
    jumps: tuple = ()

    def __post_init__(self):
        h = linalg.as_matrix(self.hamiltonian).copy()
        if not linalg.is_hermitian(h):
            raise ValidationError("Hamiltonian is not Hermitian")
        jumps = []
        for op, rate in self.jumps:
            op = linalg.as_matrix(op).copy()
            if op.shape != h.shape:
                raise DimensionError("jump operator dimension differs from Hamiltonian")
            if rate < 0:
                raise ValidationError(f"negative jump rate {rate}")
            op.setflags(write=False)
            jumps.append((op, float(rate)))
        h.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jumps", tuple(jumps))
        # H_eff = H - (i/2) sum g L^+L; rhs = -i(H_eff rho - rho H_eff^+) + sum g L rho L^+
        h_eff = h.astype(complex)
        for op, rate in jumps:
            h_eff = h_eff - 0.5j * rate * (op.conj().T @ op)
        object.__setattr__(self, "_h_eff", h_eff)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def two_sided(self) -> "LindbladModel":
        """Two independent copies: ``H (x) I + I (x) H``, jumps ``L (x) I`` and ``I (x) L``."""
        eye = np.eye(self.dim)
        h = np.kron(self.hamiltonian, eye) + np.kron(eye, self.hamiltonian)
        jumps = [(np.kron(op, eye), r) for op, r in self.jumps]
        jumps += [(np.kron(eye, op), r) for op, r in self.jumps]
        return LindbladModel(h, tuple(jumps))


def lindblad_rhs(model: LindbladModel, rho) -> np.ndarray:
    rho = linalg.as_matrix(rho)
    if rho.shape[0] != model.dim:
        raise DimensionError(f"state dim {rho.shape[0]} != model dim {model.dim}")
    h_eff = model._h_eff
    out = -1j * (h_eff @ rho - rho @ h_eff.conj().T)
    for op, rate in model.jumps:
        if rate:
            out += rate * (op @ rho @ op.conj().T)
    return out


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    t_max: float = 1.0
    record_stride: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_max >= 0:
            raise ValueError("t_max must be nonnegative")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: tuple

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]


def rk4_step(model: LindbladModel, rho: np.ndarray, dt: float) -> np.ndarray:
    k1 = lindblad_rhs(model, rho)
    k2 = lindblad_rhs(model, rho + 0.5 * dt * k1)
    k3 = lindblad_rhs(model, rho + 0.5 * dt * k2)
    k4 = lindblad_rhs(model, rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve(model: LindbladModel, rho0: DensityMatrix, cfg: IntegratorConfig) -> Trajectory:
    """Classical RK4 with a fixed step.

    States are recorded every ``cfg.record_stride`` steps and always at the last
    step. Every recorded state is revalidated with a PSD slack of 1e-6; a
    violation raises :class:`IntegrationError` carrying the offending time.
    """
    if rho0.dim != model.dim:
        raise DimensionError(f"state dim {rho0.dim} != model dim {model.dim}")
    n = cfg.n_steps
    rho = np.array(rho0.mat, dtype=complex)
    times = [0.0]
    recorded = [rho0]
    for k in range(1, n + 1):
        rho = rk4_step(model, rho, cfg.dt)
        if k % cfg.record_stride == 0 or k == n:
            t = k * cfg.dt
            if not np.all(np.isfinite(rho)):
                raise IntegrationError(f"non-finite state at t={t:g}", time=t)
            try:
                state = DensityMatrix(
                    rho, rho0.dimA, rho0.dimB, psd_slack=TRAJECTORY_PSD_SLACK
                )
            except ValidationError as exc:
                raise IntegrationError(f"integration diverged at t={t:g}: {exc}", time=t) from exc
            times.append(t)
            recorded.append(state)
    return Trajectory(np.array(times), tuple(recorded))


def two_qubit_dissipation(omega: float, gamma: float) -> LindbladModel:
    """Both qubits decay via ``sigma_minus`` at rate ``gamma``; ``H = omega (sz_a + sz_b)``."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    single = LindbladModel(omega * states.SIGMA_Z, ((states.SIGMA_MINUS, gamma),))
    return single.two_sided()


def two_qubit_dephasing(omega: float, gamma: float) -> LindbladModel:
    """Both qubits dephase via ``sigma_z`` at rate ``gamma``; ``H = omega (sz_a + sz_b)``.

    The dissipator is kept in the literal form with ``sigma_z sigma_z`` terms.
    """
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    single = LindbladModel(omega * states.SIGMA_Z, ((states.SIGMA_Z, gamma),))
    return single.two_sided()


def spin_dissipation(two_f: int, Omega: float, gamma: float) -> LindbladModel:
    """Spin-``f`` decay through ``S_-`` with ``H = Omega S_z``."""
    ops = states.spin_operators(two_f)
    return LindbladModel(Omega * ops.Sz, ((ops.Sminus, gamma),))


def spin_dephasing(two_f: int, Omega: float, gamma: float) -> LindbladModel:
    """Spin-``f`` dephasing through ``S_z`` with ``H = Omega S_z``."""
    ops = states.spin_operators(two_f)
    return LindbladModel(Omega * ops.Sz, ((ops.Sz, gamma),))


def spin_dephasing_exact(rho0, two_f: int, Omega: float, gamma: float, t: float) -> np.ndarray:
    """Closed-form solution of :func:`spin_dephasing`.

    ``rho_mn(t) = rho_mn(0) exp(-gamma (m-n)^2 t / 2 - i Omega (m-n) t)``.
    """
    m = states.spin_operators(two_f).m_values
    diff = m[:, None] - m[None, :]
    return linalg.as_matrix(rho0) * np.exp(-0.5 * gamma * diff**2 * t - 1j * Omega * diff * t)


def uniform_superposition(d: int) -> DensityMatrix:
    """Single-particle ``(1/d) sum_{m,n} |m><n|``."""
    return DensityMatrix(np.full((d, d), 1.0 / d), d)


def perturbative_spin_rho(two_f: int, Omega: float, gamma: float, t: float) -> np.ndarray:
    """First-order-in-``gamma`` spin state started from ``(1/d) sum |m><n|``, evaluated term by term.

    ``rho_mn = 1/d + (gamma t/d) sqrt((f+m+1)(f-m)(f+n+1)(f-n))
    - (i t/d)(Omega m + Omega n - i gamma (f+m)(f-m+1) - i gamma (f+n)(f-n+1))``.

    Valid only for ``gamma t << 1``. The expression is reproduced verbatim; it
    is not the Taylor expansion of :func:`spin_dissipation` (see
    :func:`firstorder_spin_rho` for that).
    """
    ops = states.spin_operators(two_f)
    f, d = ops.f, ops.d
    m = ops.m_values[:, None]
    n = ops.m_values[None, :]
    feed = np.sqrt((f + m + 1) * (f - m) * (f + n + 1) * (f - n))
    bracket = (
        Omega * m + Omega * n
        - 1j * gamma * (f + m) * (f - m + 1)
        - 1j * gamma * (f + n) * (f - n + 1)
    )
    return (1.0 + gamma * t * feed - 1j * t * bracket) / d


def firstorder_spin_rho(two_f: int, Omega: float, gamma: float, t: float) -> np.ndarray:
    """``rho(0) + t L[rho(0)]`` for :func:`spin_dissipation` from ``(1/d) sum |m><n|``.

    ``rho_mn = 1/d + (gamma t/d) sqrt((f+m+1)(f-m)(f+n+1)(f-n))
    - (i t/d)(Omega (m - n) - (i gamma/2)((f+m)(f-m+1) + (f+n)(f-n+1)))``.
    """
    ops = states.spin_operators(two_f)
    f, d = ops.f, ops.d
    m = ops.m_values[:, None]
    n = ops.m_values[None, :]
    feed = np.sqrt((f + m + 1) * (f - m) * (f + n + 1) * (f - n))
    loss = (f + m) * (f - m + 1) + (f + n) * (f - n + 1)
    bracket = Omega * (m - n) - 0.5j * gamma * loss
    return (1.0 + gamma * t * feed - 1j * t * bracket) / d
