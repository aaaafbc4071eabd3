"""Kraus channels, the phase- and amplitude-damping families, and pure dephasing.

A :class:`KrausChannel` is a plain operator list. Completeness
``sum_i A_i^dagger A_i = I`` is not enforced on construction, so that
incomplete sets can still be built and inspected with :func:`validate`;
:func:`apply` refuses channels that fail it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson

from . import linalg
from .errors import DimensionError, ValidationError
from .states import DensityMatrix

COMPLETENESS_TOL = 1e-10
LAW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class KrausChannel:
    operators: tuple

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(a).copy() for a in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        if any(a.shape[0] != dim for a in ops):
            raise DimensionError("Kraus operators must share one dimension")
        for a in ops:
            a.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self) -> int:
        return len(self.operators)

    def completeness(self) -> np.ndarray:
        return sum(a.conj().T @ a for a in self.operators)


@dataclass(frozen=True)
class ValidationReport:
    max_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def validate(channel: KrausChannel, tol: float = COMPLETENESS_TOL) -> ValidationReport:
    """Largest elementwise deviation of ``sum A^dagger A`` from the identity."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    dev = np.max(np.abs(channel.completeness() - np.eye(channel.dim)))
    return ValidationReport(float(dev), tol)


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


def apply(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """``sum_i A_i rho A_i^dagger``, keeping the bipartite split of ``rho``."""
    if channel.dim != rho.dim:
        raise DimensionError(f"channel dim {channel.dim} != state dim {rho.dim}")
    report = validate(channel)
    if not report.passed:
        raise ValidationError(
            f"channel violates completeness by {report.max_deviation:.3e}"
        )
    out = sum(a @ rho.mat @ a.conj().T for a in channel.operators)
    return DensityMatrix(out, rho.dimA, rho.dimB)


def lift_one_sided(channel: KrausChannel, dimB: int) -> KrausChannel:
    """Act on subsystem A only: ``A_i -> A_i (x) I_dimB``."""
    eye = np.eye(dimB)
    return KrausChannel(tuple(linalg.kron(a, eye) for a in channel.operators))


def tensor(ch_a: KrausChannel, ch_b: KrausChannel) -> KrausChannel:
    """Product of independent local channels.

    The Kraus set of ``L_A (x) L_B`` is every cross term ``A_i (x) B_j``;
    pairing only ``A_i (x) B_i`` does not give a trace-preserving map in general.
    """
    return KrausChannel(
        tuple(linalg.kron(a, b) for a in ch_a.operators for b in ch_b.operators)
    )


def paired_tensor(ch_a: KrausChannel, ch_b: KrausChannel) -> KrausChannel:
    """Index-paired set ``{A_i (x) B_i}``.

    Kept for comparison with the full product in :func:`tensor`; it generally
    fails :func:`validate`.
    """
    if len(ch_a) != len(ch_b):
        raise ValueError("paired tensor needs channels with equal Kraus counts")
    return KrausChannel(
        tuple(linalg.kron(a, b) for a, b in zip(ch_a.operators, ch_b.operators))
    )


def _check_rate_time(gamma: float, t: float) -> None:
    if gamma < 0 or t < 0:
        raise ValueError(f"rate and time must be nonnegative, got gamma={gamma}, t={t}")


def phase_damping(gamma: float, t: float) -> KrausChannel:
    """Qubit dephasing: coherence between ``|0>`` and ``|1>`` decays as ``exp(-gamma t)``.

    ``A1 = diag(1, e^{-gamma t})``, ``A2 = diag(0, sqrt(1 - e^{-2 gamma t}))``.
    """
    _check_rate_time(gamma, t)
    q = np.exp(-gamma * t)
    a1 = np.diag([1.0, q])
    a2 = np.diag([0.0, np.sqrt(-np.expm1(-2.0 * gamma * t))])
    return KrausChannel((a1, a2))


def amplitude_damping(gamma: float, t: float) -> KrausChannel:
    """Qubit energy loss at rate ``gamma``.

    ``A1 = diag(1, e^{-gamma t / 2})`` and ``A2`` has the single entry
    ``-sqrt(1 - e^{-gamma t})`` in row 0, column 1, so population flows from
    ``|1>`` into ``|0>``.
    """
    _check_rate_time(gamma, t)
    a1 = np.diag([1.0, np.exp(-0.5 * gamma * t)])
    a2 = np.zeros((2, 2))
    a2[0, 1] = -np.sqrt(-np.expm1(-gamma * t))
    return KrausChannel((a1, a2))


@dataclass(frozen=True)
class DephasingLaw:
    """Decay exponent ``gamma_fn(m, n, t)`` and phase ``phase_fn(m, n, t)``.

    Both callables are evaluated on level labels and must be reentrant. A valid
    law has zero decay on the diagonal, nonnegative decay elsewhere, and an
    antisymmetric phase.
    """

    gamma_fn: Callable[[float, float, float], float]
    phase_fn: Callable[[float, float, float], float] = lambda m, n, t: 0.0

    def tables(self, labels: Sequence[float], t: float) -> tuple[np.ndarray, np.ndarray]:
        labels = list(labels)
        g = np.array([[self.gamma_fn(m, n, t) for n in labels] for m in labels], dtype=float)
        p = np.array([[self.phase_fn(m, n, t) for n in labels] for m in labels], dtype=float)
        return g, p

    def check(self, labels: Sequence[float], t: float, tol: float = LAW_TOL):
        """Evaluate the law on ``labels`` at time ``t`` and verify its invariants."""
        g, p = self.tables(labels, t)
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(p))):
            raise ValidationError("dephasing law returned non-finite values")
        if np.max(np.abs(np.diag(g)), initial=0.0) > tol:
            raise ValidationError("dephasing law has nonzero decay on the diagonal")
        if np.min(g) < -tol:
            raise ValidationError("dephasing law has negative decay")
        if np.max(np.abs(p + p.T)) > tol * max(1.0, np.max(np.abs(p))):
            raise ValidationError("dephasing phase is not antisymmetric")
        return g, p


def linear_dephasing_law(rate: float) -> DephasingLaw:
    """``gamma_mn(t) = rate * t`` off the diagonal, no phase."""
    return DephasingLaw(lambda m, n, t: 0.0 if m == n else rate * t)


def product_law(law_a: DephasingLaw, law_b: DephasingLaw) -> DephasingLaw:
    """Law on composite labels for independent local dephasing of A and B.

    Composite labels are pairs ``(a, b)`` (see :func:`composite_labels`);
    exponents and phases add.
    """

    def gamma(x, y, t):
        return law_a.gamma_fn(x[0], y[0], t) + law_b.gamma_fn(x[1], y[1], t)

    def phase(x, y, t):
        return law_a.phase_fn(x[0], y[0], t) + law_b.phase_fn(x[1], y[1], t)

    return DephasingLaw(gamma, phase)


def composite_labels(labels_a: Sequence[float], labels_b: Sequence[float]) -> list:
    return [(a, b) for a in labels_a for b in labels_b]


def dephase(rho0, law: DephasingLaw, t: float, labels: Sequence | None = None) -> np.ndarray:
    """Elementwise ``rho_mn(0) exp(-gamma_mn(t) - i Gamma_mn(t))``.

    ``labels`` names the basis levels passed to the law (default ``0..d-1``).
    Accepts a :class:`DensityMatrix` or a bare matrix and returns a matrix.
    """
    mat = rho0.mat if isinstance(rho0, DensityMatrix) else linalg.as_matrix(rho0)
    d = mat.shape[0]
    if labels is None:
        labels = range(d)
    labels = list(labels)
    if len(labels) != d:
        raise DimensionError(f"{len(labels)} labels for a matrix of dim {d}")
    g, p = law.check(labels, t)
    factor = np.exp(-g - 1j * p)
    np.fill_diagonal(factor, 1.0)
    return mat * factor


@dataclass(frozen=True)
class SpectralDensity:
    """Bath coupling ``g(omega)`` and spectral weight ``rho(omega)`` on ``[lo, hi]``."""

    coupling_fn: Callable[[np.ndarray], np.ndarray]
    weight_fn: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.support
        if not lo > 0:
            raise ValueError("spectral support must exclude omega = 0")
        if not hi > lo:
            raise ValueError("spectral support must be a nonempty interval")


def _ramp(x: np.ndarray) -> np.ndarray:
    # x - sin(x), with a series branch where the difference cancels
    x = np.asarray(x, dtype=float)
    x2 = x * x
    series = x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    return np.where(np.abs(x) < 1e-2, series, x - np.sin(x))


def phase_integral(
    sd: SpectralDensity, m: float, n: float, t: float, quad_points: int = 2001
) -> float:
    """Dephasing phase ``int g^2/w^2 (m^2 - n^2)(w t - sin w t) rho(w) dw``.

    Composite Simpson rule on ``quad_points`` equally spaced nodes of the
    support. Infinite supports must be truncated by the caller.
    """
    if quad_points < 2:
        raise ValueError("quad_points must be >= 2")
    if t < 0:
        raise ValueError("t must be nonnegative")
    lo, hi = sd.support
    if lo <= 0:
        raise ValueError("spectral support must exclude omega = 0")
    diff = m * m - n * n
    if diff == 0 or t == 0:
        return 0.0
    w = np.linspace(lo, hi, quad_points)
    g = np.asarray(sd.coupling_fn(w), dtype=float)
    weight = np.asarray(sd.weight_fn(w), dtype=float)
    if np.any(weight < 0):
        raise ValueError("spectral weight must be nonnegative")
    integrand = g * g / (w * w) * _ramp(w * t) * weight
    return float(diff * simpson(integrand, x=w))


def law_from_spectrum(
    sd: SpectralDensity,
    decay_fn: Callable[[float, float, float], float] | None = None,
    quad_points: int = 2001,
) -> DephasingLaw:
    """Dephasing law whose phase is :func:`phase_integral` on ``sd``."""
    if decay_fn is None:
        decay_fn = lambda m, n, t: 0.0  # noqa: E731
    return DephasingLaw(
        decay_fn, lambda m, n, t: phase_integral(sd, m, n, t, quad_points)
    )
