"""Scenario configuration, runners and CSV output.

Config documents are ``key = value`` lines; ``#`` starts a comment. Example::

    scenario = fig1
    gamma = 0.6     # in units of omega
    t_max = 5

Times are dimensionless, in units of ``1/omega`` (fig1) or ``1/Omega``
(fig2, fig3, custom).
"""

from __future__ import annotations

import dataclasses
import io
import logging
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import channels, distill, dynamics, states
from .errors import BracketError, ConfigError

logger = logging.getLogger(__name__)

SCENARIOS = ("fig1", "fig2", "fig3", "kraus2x2", "custom")
MODELS = ("dissipation", "dephasing")
INITIAL_STATES = ("max_entangled", "anticorrelated", "singlet")

FIG3_DIMS = (5, 7)
FIG2_T_LO = 1e-6

_DEFAULTS = {
    "fig1": dict(omega=1.0, gamma=0.6, t_max=5.0, dt=1e-3, record_stride=50),
    "fig2": dict(omega=1.0, gamma=0.2, t_max=10.0, dt=1e-3, record_stride=1,
                 d_values=(3, 4, 5, 6, 7, 8, 9)),
    "fig3": dict(omega=1.0, gamma=0.6, t_max=3.0, dt=1e-3, record_stride=50),
    "kraus2x2": dict(omega=1.0, gamma=1.0, t_max=5.0, dt=1e-2, record_stride=5),
    "custom": dict(omega=1.0, gamma=0.6, t_max=3.0, dt=1e-3, record_stride=50,
                   d=3, model="dissipation", initial="max_entangled", sides="two"),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """One experiment. ``None`` fields are filled by :func:`with_defaults`."""

    scenario: str
    d: Optional[int] = None
    omega: Optional[float] = None
    gamma: Optional[float] = None
    gamma_a: Optional[float] = None
    gamma_b: Optional[float] = None
    t_max: Optional[float] = None
    dt: Optional[float] = None
    record_stride: Optional[int] = None
    d_values: Optional[tuple] = None
    model: Optional[str] = None
    initial: Optional[str] = None
    sides: Optional[str] = None
    output: Optional[str] = field(default=None)


_FIELDS = {f.name: f for f in dataclasses.fields(ScenarioConfig)}
_INT_KEYS = {"d", "record_stride"}
_FLOAT_KEYS = {"omega", "gamma", "gamma_a", "gamma_b", "t_max", "dt"}
_STR_KEYS = {"scenario", "model", "initial", "sides", "output"}


def _coerce(key: str, raw: str, line: Optional[int]):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
            return value
        if key == "d_values":
            return tuple(int(x) for x in raw.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"bad value {raw!r}", key=key, line=line) from None
    return raw


def parse_config(text: str) -> ScenarioConfig:
    """Parse a ``key = value`` document into a validated, defaults-filled config."""
    values = {}
    lines = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"expected 'key = value', got {content!r}", line=lineno)
        key, raw = (part.strip() for part in content.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELDS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        if not raw:
            raise ConfigError("missing value", key=key, line=lineno)
        values[key] = _coerce(key, raw, lineno)
        lines[key] = lineno
    if "scenario" not in values:
        raise ConfigError("missing required key", key="scenario")
    return with_defaults(ScenarioConfig(**values), lines)


def override(cfg: ScenarioConfig, **changes) -> ScenarioConfig:
    """Replace fields (ignoring ``None``) and revalidate."""
    changes = {k: v for k, v in changes.items() if v is not None}
    for key in changes:
        if key not in _FIELDS:
            raise ConfigError("unknown key", key=key)
    return with_defaults(dataclasses.replace(cfg, **changes))


def with_defaults(cfg: ScenarioConfig, lines: Optional[dict] = None) -> ScenarioConfig:
    lines = lines or {}
    if cfg.scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {cfg.scenario!r}", key="scenario",
                          line=lines.get("scenario"))
    filled = {}
    for key, default in _DEFAULTS[cfg.scenario].items():
        if getattr(cfg, key) is None:
            filled[key] = default
    cfg = dataclasses.replace(cfg, **filled)
    if cfg.scenario == "kraus2x2":
        cfg = dataclasses.replace(
            cfg,
            gamma_a=cfg.gamma if cfg.gamma_a is None else cfg.gamma_a,
            gamma_b=cfg.gamma if cfg.gamma_b is None else cfg.gamma_b,
        )
    _validate(cfg, lines)
    return cfg


def _validate(cfg: ScenarioConfig, lines: dict) -> None:
    def fail(msg, key):
        raise ConfigError(msg, key=key, line=lines.get(key))

    for key in ("gamma", "gamma_a", "gamma_b"):
        value = getattr(cfg, key)
        if value is not None and value < 0:
            fail("rate must be nonnegative", key)
    for key in ("t_max", "dt"):
        value = getattr(cfg, key)
        if value is not None and not value > 0:
            fail("must be positive", key)
    if cfg.dt is not None and cfg.t_max is not None and cfg.dt > cfg.t_max:
        fail("dt exceeds t_max", "dt")
    if cfg.omega is not None and not math.isfinite(cfg.omega):
        fail("must be finite", "omega")
    if cfg.record_stride is not None and cfg.record_stride < 1:
        fail("must be a positive integer", "record_stride")
    if cfg.d is not None and cfg.d < 2:
        fail("dimension must be >= 2", "d")
    if cfg.d_values is not None:
        if not cfg.d_values or min(cfg.d_values) < 2:
            fail("dimensions must be >= 2", "d_values")
    if cfg.model is not None and cfg.model not in MODELS:
        fail(f"expected one of {MODELS}", "model")
    if cfg.initial is not None and cfg.initial not in INITIAL_STATES:
        fail(f"expected one of {INITIAL_STATES}", "initial")
    if cfg.initial == "singlet" and cfg.d != 2:
        fail("singlet initial state needs d = 2", "initial")
    if cfg.sides is not None and cfg.sides not in ("one", "two"):
        fail("expected 'one' or 'two'", "sides")


def serialize(cfg: ScenarioConfig) -> str:
    """Render ``cfg`` as a config document that :func:`parse_config` accepts."""
    out = []
    for name in _FIELDS:
        value = getattr(cfg, name)
        if value is None:
            continue
        if name == "d_values":
            value = ",".join(str(v) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        out.append(f"{name} = {value}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class CsvTable:
    header: tuple
    rows: tuple

    def __post_init__(self):
        width = len(self.header)
        if any(len(r) != width for r in self.rows):
            raise ValueError("ragged CSV table")

    def column(self, name: str) -> np.ndarray:
        k = self.header.index(name)
        return np.array([r[k] for r in self.rows], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.header) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(x) for x in row) + "\n")
        return buf.getvalue()


def _fmt(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.16e}"


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temp file in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _integrator(cfg: ScenarioConfig) -> dynamics.IntegratorConfig:
    return dynamics.IntegratorConfig(dt=cfg.dt, t_max=cfg.t_max, record_stride=cfg.record_stride)


def run_fig1(cfg: ScenarioConfig) -> CsvTable:
    """Singlet fidelity under two-qubit dissipation and dephasing."""
    rho0 = states.projector(states.singlet(), 2, 2)
    integ = _integrator(cfg)
    dis = dynamics.evolve(dynamics.two_qubit_dissipation(cfg.omega, cfg.gamma), rho0, integ)
    dep = dynamics.evolve(dynamics.two_qubit_dephasing(cfg.omega, cfg.gamma), rho0, integ)
    rows = tuple(
        (t, distill.fidelity_F(rho0, a), distill.fidelity_F(rho0, b))
        for t, a, b in zip(dis.times, dis.states, dep.states)
    )
    return CsvTable(("t", "Ff_dissipation", "Ff_dephasing"), rows)


def fig2_critical_time(d: int, omega: float, gamma: float, t_hi: float, dt: float) -> float:
    """First zero of the first-order spin-dissipation reduction value, or NaN."""
    g = lambda t: distill.Gf_spin_dissipation_firstorder(d - 1, omega, gamma, t)  # noqa: E731
    grid = np.linspace(FIG2_T_LO, t_hi, max(2, int(round((t_hi - FIG2_T_LO) / dt)) + 1))
    bracket = distill.first_crossing(g(grid), grid)
    if bracket is None:
        logger.warning("d=%d: no sign change of G_f on [%g, %g]", d, FIG2_T_LO, t_hi)
        return math.nan
    try:
        return distill.critical_time(g, *bracket).t_c
    except BracketError as exc:
        logger.warning("d=%d: %s", d, exc)
        return math.nan


def run_fig2(cfg: ScenarioConfig, jobs: int = 1) -> CsvTable:
    """Critical time versus local dimension; failed brackets give NaN rows."""
    dims = sorted(set(cfg.d_values))
    work = lambda d: fig2_critical_time(d, cfg.omega, cfg.gamma, cfg.t_max, cfg.dt)  # noqa: E731
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            t_c = list(pool.map(work, dims))
    else:
        t_c = [work(d) for d in dims]
    return CsvTable(("d", "t_c"), tuple(zip(map(float, dims), t_c)))


def _two_sided_reduction(model: dynamics.LindbladModel, psi, d: int, integ):
    rho0 = states.projector(psi, d, d)
    traj = dynamics.evolve(model.two_sided(), rho0, integ)
    return traj.times, [distill.reduction_G(s, psi) for s in traj.states]


def run_fig3(cfg: ScenarioConfig) -> CsvTable:
    """Reduction value from ``anticorrelated(d)`` under two-sided spin dynamics, d = 5, 7."""
    integ = _integrator(cfg)
    columns = []
    times = None
    for builder in (dynamics.spin_dissipation, dynamics.spin_dephasing):
        for d in FIG3_DIMS:
            model = builder(d - 1, cfg.omega, cfg.gamma)
            times, values = _two_sided_reduction(model, states.anticorrelated(d), d, integ)
            columns.append(values)
    header = ("t",) + tuple(
        f"Gf_{kind}_d{d}" for kind in ("dissip", "dephase") for d in FIG3_DIMS
    )
    rows = tuple((t,) + tuple(c[k] for c in columns) for k, t in enumerate(times))
    return CsvTable(header, rows)


def run_kraus2x2(cfg: ScenarioConfig) -> CsvTable:
    """Two-qubit Kraus-channel curves on the singlet.

    ``Gf`` and ``pt_min_eig`` refer to the one-sided phase-damped state.
    """
    psi = states.singlet()
    rho0 = states.projector(psi, 2, 2)
    ga, gb = cfg.gamma_a, cfg.gamma_b
    step = cfg.dt * cfg.record_stride
    n = int(round(cfg.t_max / step))
    rows = []
    for k in range(n + 1):
        t = k * step
        deph_one = channels.lift_one_sided(channels.phase_damping(ga, t), 2)
        deph_two = channels.tensor(channels.phase_damping(ga, t), channels.phase_damping(gb, t))
        diss_one = channels.lift_one_sided(channels.amplitude_damping(ga, t), 2)
        rhof = channels.apply(deph_one, rho0)
        rows.append((
            t,
            distill.fidelity_from_kraus(psi, deph_one),
            distill.fidelity_from_kraus(psi, deph_two),
            distill.fidelity_from_kraus(psi, diss_one),
            distill.paper_curve_Ff("dissipate_one", ga, t),
            distill.reduction_G(rhof, psi),
            distill.ppt_min_eigenvalue(rhof).value,
        ))
    header = ("t", "Ff_dephase_one", "Ff_dephase_two", "Ff_dissip_brute",
              "Ff_dissip_paperEq17", "Gf", "pt_min_eig")
    return CsvTable(header, tuple(rows))


def _initial_state(cfg: ScenarioConfig):
    if cfg.initial == "singlet":
        return states.singlet()
    if cfg.initial == "anticorrelated":
        return states.anticorrelated(cfg.d)
    return states.max_entangled(cfg.d)


def run_custom(cfg: ScenarioConfig) -> CsvTable:
    """Spin-``(d-1)/2`` dissipation or dephasing on one or both particles.

    Columns: fidelity with the initial state, reduction value with the initial
    state as witness, and the smallest partial-transpose eigenvalue.
    """
    d = cfg.d
    builder = dynamics.spin_dissipation if cfg.model == "dissipation" else dynamics.spin_dephasing
    local = builder(d - 1, cfg.omega, cfg.gamma)
    if cfg.sides == "two":
        model = local.two_sided()
    else:
        eye = np.eye(d)
        model = dynamics.LindbladModel(
            np.kron(local.hamiltonian, eye),
            tuple((np.kron(op, eye), r) for op, r in local.jumps),
        )
    psi = _initial_state(cfg)
    rho0 = states.projector(psi, d, d)
    traj = dynamics.evolve(model, rho0, _integrator(cfg))
    rows = tuple(
        (t, distill.fidelity_F(rho0, s), distill.reduction_G(s, psi),
         distill.ppt_min_eigenvalue(s).value)
        for t, s in zip(traj.times, traj.states)
    )
    return CsvTable(("t", "Ff", "Gf", "pt_min_eig"), rows)


def run(cfg: ScenarioConfig, jobs: int = 1) -> CsvTable:
    if cfg.scenario == "fig2":
        return run_fig2(cfg, jobs=jobs)
    runner = {
        "fig1": run_fig1,
        "fig3": run_fig3,
        "kraus2x2": run_kraus2x2,
        "custom": run_custom,
    }[cfg.scenario]
    return runner(cfg)
