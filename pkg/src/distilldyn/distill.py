"""Distillability diagnostics along a trajectory.

Three criteria are evaluated:

* fidelity ``F = Tr(rho0 rho)`` with the initial maximally entangled state,
  necessary and sufficient for two qubits when ``F > 1/2``;
* reduction ``G = <psi|(Tr_B rho) (x) I - rho|psi>``, where ``G < 0`` is
  sufficient for distillability;
* partial transpose: a PPT state cannot be distilled.

Verdicts never overclaim; "inconclusive" is a regular outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from . import linalg
from .channels import DephasingLaw, KrausChannel
from .errors import BracketError, DimensionError, EvaluationError, ValidationError
from .states import DensityMatrix, PureState, spin_operators

IMAG_ATOL = 1e-12
PPT_ATOL = 1e-10
DEFAULT_BISECT_TOL = 1e-8


class Hint(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CriterionVerdict:
    value: float
    threshold: float
    distillable_hint: Hint
    criterion_name: str


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > IMAG_ATOL:
        raise ValidationError(f"{what} has imaginary part {z.imag!r}")
    return float(z.real)


def fidelity_F(rho0: DensityMatrix, rhof: DensityMatrix) -> float:
    """``Tr(rho0 rhof)``."""
    if rho0.dim != rhof.dim:
        raise DimensionError(f"state dims differ: {rho0.dim} vs {rhof.dim}")
    # Tr(AB) = sum_ij A_ij B_ji
    return _real(complex(np.sum(rho0.mat * rhof.mat.T)), "fidelity")


def fidelity_from_kraus(psi: PureState, channel: KrausChannel) -> float:
    """``sum_i |<psi|A_i|psi>|^2``; equals ``Tr(rho0 L(rho0))`` for ``rho0 = |psi><psi|``."""
    if psi.dim != channel.dim:
        raise DimensionError(f"state dim {psi.dim} != channel dim {channel.dim}")
    v = psi.amplitudes
    return float(sum(abs(np.vdot(v, a @ v)) ** 2 for a in channel.operators))


def reduction_G(rhof: DensityMatrix, psi: PureState) -> float:
    """``<psi|(Tr_B rho) (x) I|psi> - <psi|rho|psi>``."""
    if psi.dim != rhof.dim:
        raise DimensionError(f"state dim {psi.dim} != density matrix dim {rhof.dim}")
    v = psi.amplitudes
    reduced = np.kron(rhof.reduced("B"), np.eye(rhof.dimB))
    return _real(np.vdot(v, reduced @ v) - np.vdot(v, rhof.mat @ v), "reduction value")


def fidelity_verdict(value: float, dimA: int, dimB: int) -> CriterionVerdict:
    if dimA == dimB == 2 and value > 0.5:
        hint = Hint.YES
    else:
        hint = Hint.INCONCLUSIVE
    return CriterionVerdict(value, 0.5, hint, "fidelity")


def reduction_verdict(value: float) -> CriterionVerdict:
    hint = Hint.YES if value < 0 else Hint.INCONCLUSIVE
    return CriterionVerdict(value, 0.0, hint, "reduction")


def ppt_min_eigenvalue(rhof: DensityMatrix) -> CriterionVerdict:
    """Smallest eigenvalue of the partial transpose, with a Peres verdict.

    PPT (min eigenvalue >= -1e-10) means not distillable. A negative value
    means distillable for 2x2 and 2x3 systems and is inconclusive beyond.
    """
    pt = linalg.partial_transpose(rhof.mat, rhof.dimA, rhof.dimB)
    lo = float(linalg.hermitian_eigenvalues(pt).eigenvalues[0])
    if lo >= -PPT_ATOL:
        hint = Hint.NO
    elif rhof.dimA * rhof.dimB <= 6:
        hint = Hint.YES
    else:
        hint = Hint.INCONCLUSIVE
    return CriterionVerdict(lo, 0.0, hint, "partial_transpose")


CURVE_KINDS = ("dephase_one", "dephase_two", "dissipate_one", "dissipate_two")


def paper_curve_Ff(kind: str, gammas, t: float) -> float:
    """Closed-form two-qubit fidelity curves, evaluated term by term.

    ``gammas`` is ``gamma_a`` or a pair ``(gamma_a, gamma_b)``; the one-sided
    kinds use ``gamma_a`` only.

    * ``dephase_one``: ``1/2 + e^{-gamma_a t}/2``
    * ``dephase_two``: ``1/2 + e^{-(gamma_a + gamma_b) t}/2``
    * ``dissipate_one``: ``e^{-gamma_a t / 2}``
    * ``dissipate_two``: ``e^{-(gamma_a + gamma_b) t / 2}``
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    ga, gb = _rates(gammas)
    if kind == "dephase_one":
        return 0.5 + 0.5 * math.exp(-ga * t)
    if kind == "dephase_two":
        return 0.5 + 0.5 * math.exp(-(ga + gb) * t)
    if kind == "dissipate_one":
        return math.exp(-0.5 * ga * t)
    if kind == "dissipate_two":
        return math.exp(-0.5 * (ga + gb) * t)
    raise ValueError(f"unknown curve kind {kind!r}; expected one of {CURVE_KINDS}")


def amplitude_damping_fidelity(gamma: float, t: float) -> float:
    """``(1 + e^{-gamma t/2})^2 / 4``: singlet fidelity under one-sided amplitude damping.

    Only ``A1 (x) I`` has a nonzero diagonal element on the singlet,
    ``(1 + e^{-gamma t/2}) / 2``; ``A2 (x) I`` maps it onto ``|00>``.
    """
    return 0.25 * (1.0 + math.exp(-0.5 * gamma * t)) ** 2


def _rates(gammas) -> tuple[float, float]:
    if np.ndim(gammas) == 0:
        return float(gammas), float(gammas)
    ga, gb = gammas
    return float(ga), float(gb)


def closed_Gf_dephasing(
    d: int,
    law_a: DephasingLaw,
    law_b: DephasingLaw,
    t: float,
    labels=None,
    normalization: str = "calibrated",
) -> float:
    """Reduction value of ``max_entangled(d)`` after independent local dephasing.

    ``normalization="printed"`` evaluates
    ``-sum_{m,n} (1/d) e^{-g^a_mn - g^b_mn} cos(P^a_mn + P^b_mn)``
    literally. The default ``"calibrated"`` form
    ``-(1/d^2) sum_{m != n} e^{-g^a_mn - g^b_mn} cos(P^a_mn + P^b_mn)``
    equals :func:`reduction_G` with ``psi = max_entangled(d)`` at every ``t``:
    the marginal stays ``I/d`` and the diagonal terms cancel it.
    """
    if labels is None:
        labels = range(d)
    labels = list(labels)
    if len(labels) != d:
        raise DimensionError(f"{len(labels)} labels for d={d}")
    ga, pa = law_a.check(labels, t)
    gb, pb = law_b.check(labels, t)
    terms = np.exp(-ga - gb) * np.cos(pa + pb)
    if normalization == "printed":
        return float(-np.sum(terms) / d)
    if normalization == "calibrated":
        np.fill_diagonal(terms, 0.0)
        return float(-np.sum(terms) / d**2)
    raise ValueError(f"unknown normalization {normalization!r}")


def Gf_spin_dissipation_firstorder(two_f: int, Omega: float, gamma: float, t):
    """First-order reduction value for two-sided spin-``f`` dissipation, evaluated term by term.

    ``G = -(1/d^2) sum_{m>n} 2 Re[B_mn^2]`` with
    ``B_mn = 1 + gamma t sqrt((f+m+1)(f-m)) sqrt((f+n+1)(f-n))
    - i t (Omega m + Omega n - i gamma (f+m)(f-m+1) - i gamma (f+n)(f-n+1))``.

    ``t`` may be a scalar or an array.
    """
    ops = spin_operators(two_f)
    f, d = ops.f, ops.d
    mv = ops.m_values
    im, jn = np.triu_indices(d, k=1)  # descending order: index i < j means m > n
    m, n = mv[im], mv[jn]
    feed = np.sqrt((f + m + 1) * (f - m)) * np.sqrt((f + n + 1) * (f - n))
    inner = Omega * m + Omega * n - 1j * gamma * (f + m) * (f - m + 1) - 1j * gamma * (f + n) * (f - n + 1)
    tt = np.asarray(t, dtype=float)[..., None]
    bracket = 1.0 + gamma * tt * feed - 1j * tt * inner
    out = -(2.0 / d**2) * np.sum(np.real(bracket**2), axis=-1)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CriticalTime:
    t_c: float
    bracket: tuple[float, float]
    residual: float
    iterations: int


def critical_time(
    g: Callable[[float], float], t_lo: float, t_hi: float, tol: float = DEFAULT_BISECT_TOL
) -> CriticalTime:
    """Bisection for ``g(t_c) = 0`` inside a sign-changing bracket.

    Stops once the bracket is no wider than ``tol`` and returns its midpoint.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not t_hi > t_lo:
        raise BracketError("bracket must satisfy t_lo < t_hi")
    lo, hi = float(t_lo), float(t_hi)
    g_lo, g_hi = _eval(g, lo), _eval(g, hi)
    if g_lo == 0.0:
        return CriticalTime(lo, (lo, lo), 0.0, 0)
    if g_hi == 0.0:
        return CriticalTime(hi, (hi, hi), 0.0, 0)
    if g_lo * g_hi > 0:
        raise BracketError(f"no sign change on [{t_lo}, {t_hi}]")
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = _eval(g, mid)
        iterations += 1
        if g_mid == 0.0:
            lo = hi = mid
            break
        if (g_mid < 0) == (g_lo < 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    t_c = 0.5 * (lo + hi)
    return CriticalTime(t_c, (lo, hi), abs(_eval(g, t_c)), iterations)


def _eval(g, t: float) -> float:
    value = float(g(t))
    if not math.isfinite(value):
        raise EvaluationError(f"non-finite function value at t={t}")
    return value


def first_crossing(g_values: np.ndarray, times: np.ndarray):
    """Bracket around the first sign change of sampled ``g``, or ``None``."""
    s = np.sign(g_values)
    idx = np.flatnonzero(s[:-1] * s[1:] <= 0)
    if idx.size == 0:
        return None
    k = idx[0]
    return float(times[k]), float(times[k + 1])
