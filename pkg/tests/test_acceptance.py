"""Acceptance gate: twelve criteria, one pass/fail line each in the terminal summary."""

import math
import time

import numpy as np
import pytest

from distilldyn import channels, distill, dynamics, scenarios, states
from distilldyn.scenarios import ScenarioConfig

from conftest import ACCEPTANCE_RESULTS, random_density

LN2 = math.log(2)


def record(number, ok, text):
    ACCEPTANCE_RESULTS[number] = (bool(ok), text)
    assert ok, text


def _grid(n_gamma=5, n_t=10):
    return [(g, t) for g in np.linspace(0.05, 2.0, n_gamma) for t in np.linspace(0.0, 5.0, n_t)]


def test_01_dephasing_fidelity_closed_form():
    start = time.perf_counter()
    psi = states.singlet()
    worst = 0.0
    for gamma, t in _grid():
        gb = 0.5 * gamma + 0.1
        one = channels.lift_one_sided(channels.phase_damping(gamma, t), 2)
        two = channels.tensor(channels.phase_damping(gamma, t), channels.phase_damping(gb, t))
        worst = max(
            worst,
            abs(distill.fidelity_from_kraus(psi, one) - (0.5 + 0.5 * math.exp(-gamma * t))),
            abs(distill.fidelity_from_kraus(psi, two) - (0.5 + 0.5 * math.exp(-(gamma + gb) * t))),
        )
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-12 and elapsed < 1,
           f"dephasing fidelity vs closed forms: max err {worst:.1e}, {elapsed:.2f}s")


def test_02_dissipation_curve_critical_time():
    start = time.perf_counter()
    worst = 0.0
    for gamma in (0.1, 0.6, 1.0, 3.0):
        g = lambda t: distill.paper_curve_Ff("dissipate_one", gamma, t) - 0.5  # noqa: E731
        res = distill.critical_time(g, 0.0, 4 / gamma)
        worst = max(worst, abs(res.t_c - 2 * LN2 / gamma))
    elapsed = time.perf_counter() - start
    record(2, worst <= 1e-8 and elapsed < 1,
           f"printed dissipation curve crosses 1/2 at 2 ln2/gamma: err {worst:.1e}, {elapsed:.2f}s")


def test_03_amplitude_damping_oracle():
    psi = states.singlet()
    worst = 0.0
    printed_gap = 0.0
    for gamma, t in _grid():
        ch = channels.lift_one_sided(channels.amplitude_damping(gamma, t), 2)
        brute = distill.fidelity_from_kraus(psi, ch)
        worst = max(worst, abs(brute - (1 + math.exp(-gamma * t / 2)) ** 2 / 4))
        printed_gap = max(printed_gap, abs(brute - distill.paper_curve_Ff("dissipate_one", gamma, t)))
    record(3, worst <= 1e-12,
           f"brute-force amplitude damping = (1+e^(-gt/2))^2/4: err {worst:.1e}; "
           f"max deviation from printed e^(-gt/2) {printed_gap:.3f}")


def test_04_fig1_qualitative():
    start = time.perf_counter()
    table = scenarios.run_fig1(scenarios.with_defaults(ScenarioConfig(scenario="fig1")))
    elapsed = time.perf_counter() - start
    t = table.column("t")
    diss, deph = table.column("Ff_dissipation"), table.column("Ff_dephasing")
    below = np.flatnonzero(diss < 0.5)
    crosses = below.size > 0 and t[-1] <= 5.0 + 1e-12
    ok = crosses and bool(np.all(deph > 0.5)) and elapsed < 10
    first = t[below[0]] if below.size else math.nan
    record(4, ok, f"fig1: dissipation below 1/2 from t={first:.2f}, dephasing min "
                  f"{deph.min():.6f} > 1/2, {elapsed:.2f}s")


def test_05_integrator_order():
    start = time.perf_counter()
    model = dynamics.two_qubit_dissipation(1.0, 0.6)
    rho0 = states.projector(states.singlet(), 2, 2)
    finals = [dynamics.evolve(model, rho0, dynamics.IntegratorConfig(dt, 2.0, 10**6)).final.mat
              for dt in (0.1, 0.05, 0.025)]
    ratio = np.max(np.abs(finals[0] - finals[1])) / np.max(np.abs(finals[1] - finals[2]))
    elapsed = time.perf_counter() - start
    record(5, 8 <= ratio <= 32 and elapsed < 10, f"RK4 step-halving error ratio {ratio:.2f}, {elapsed:.2f}s")


def test_06_perturbative_consistency():
    start = time.perf_counter()
    two_f, Omega, gamma = 4, 1.0, 0.2
    rho0 = dynamics.uniform_superposition(two_f + 1)
    model = dynamics.spin_dissipation(two_f, Omega, gamma)
    cs = []
    for gt in (0.1, 0.05, 0.025):
        t = gt / gamma
        numeric = dynamics.evolve(model, rho0, dynamics.IntegratorConfig(t / 1000, t, 1000)).final.mat
        diff = np.max(np.abs(dynamics.perturbative_spin_rho(two_f, Omega, gamma, t) - numeric))
        cs.append(diff / gt**2)
    elapsed = time.perf_counter() - start
    spread = max(cs) / min(cs)
    record(6, spread <= 2 and elapsed < 30,
           "perturbative spin state vs numerics, C = diff/(gt)^2 = "
           + ", ".join(f"{c:.1f}" for c in cs) + f" (spread {spread:.2f}), {elapsed:.2f}s")


def test_07_fig2_trend():
    start = time.perf_counter()
    cfg = scenarios.with_defaults(ScenarioConfig(scenario="fig2", d_values=(3, 5, 7, 9)))
    tc = scenarios.run_fig2(cfg).column("t_c")
    elapsed = time.perf_counter() - start
    ok = bool(np.all(np.isfinite(tc)) and np.all(np.diff(tc) < 0)) and elapsed < 5
    record(7, ok, "fig2 t_c(d=3,5,7,9) = " + ", ".join(f"{x:.4f}" for x in tc) + f", {elapsed:.2f}s")


def test_08_fig3_qualitative():
    start = time.perf_counter()
    table = scenarios.run_fig3(scenarios.with_defaults(ScenarioConfig(scenario="fig3")))
    elapsed = time.perf_counter() - start
    ok = elapsed < 60
    parts = []
    for d in scenarios.FIG3_DIMS:
        diss, deph = table.column(f"Gf_dissip_d{d}"), table.column(f"Gf_dephase_d{d}")
        start_ok = abs(diss[0] - (1 / d - 1)) <= 1e-10 and abs(deph[0] - (1 / d - 1)) <= 1e-10
        ok &= start_ok and diss.max() >= 0 and deph.max() < 0
        parts.append(f"d={d}: dissip max {diss.max():.3f}, dephase max {deph.max():.3f}")
    record(8, ok, "fig3 " + "; ".join(parts) + f", {elapsed:.2f}s")


def test_09_reduction_anchor():
    worst = 0.0
    for d in range(2, 10):
        psi = states.max_entangled(d)
        worst = max(worst, abs(distill.reduction_G(states.projector(psi, d, d), psi) - (1 / d - 1)))
    record(9, worst <= 1e-12, f"reduction value of max entangled state = 1/d - 1 for d=2..9: err {worst:.1e}")


def test_10_peres():
    rho0 = states.projector(states.singlet(), 2, 2)
    singlet_err = abs(distill.ppt_min_eigenvalue(rho0).value + 0.5)
    dephased_err = 0.0
    for t in np.linspace(0, 5, 21):
        rhof = channels.apply(channels.lift_one_sided(channels.phase_damping(0.6, t), 2), rho0)
        dephased_err = max(dephased_err, abs(distill.ppt_min_eigenvalue(rhof).value + math.exp(-0.6 * t) / 2))
    rng = np.random.default_rng(7)
    product_min = min(
        distill.ppt_min_eigenvalue(states.product_state(random_density(rng, a), random_density(rng, b))).value
        for a, b in [(2, 2), (2, 3), (3, 3), (3, 4)] * 5
    )
    ok = singlet_err <= 1e-10 and dephased_err <= 1e-10 and product_min >= -1e-8
    record(10, ok, f"PT min eig: singlet err {singlet_err:.1e}, dephased singlet err {dephased_err:.1e}, "
                   f"product states min {product_min:.1e}")


def test_11_channel_algebra():
    worst = 0.0
    for gamma, t in _grid():
        for ch in (channels.phase_damping(gamma, t), channels.amplitude_damping(gamma, t)):
            rep = channels.validate(ch, tol=1e-12)
            worst = max(worst, rep.max_deviation if rep.passed else math.inf)
    psi = states.singlet()
    ga, gb, t = 0.4, 0.9, 1.3
    pa, pb = channels.phase_damping(ga, t), channels.phase_damping(gb, t)
    cross_err = abs(distill.fidelity_from_kraus(psi, channels.tensor(pa, pb))
                    - (0.5 + 0.5 * math.exp(-(ga + gb) * t)))
    cross_valid = channels.validate(channels.tensor(pa, pb), tol=1e-12).passed
    paired_valid = channels.validate(channels.paired_tensor(pa, pb), tol=1e-12).passed
    ok = worst <= 1e-12 and cross_err <= 1e-12 and cross_valid and not paired_valid
    record(11, ok, f"completeness max dev {worst:.1e}; cross product reproduces two-sided "
                   f"dephasing (err {cross_err:.1e}); diagonal-pair set complete: {paired_valid}")


DETERMINISM_CONFIGS = [
    ScenarioConfig(scenario="fig1"),
    ScenarioConfig(scenario="fig2"),
    ScenarioConfig(scenario="fig3", t_max=0.3),
    ScenarioConfig(scenario="kraus2x2", gamma_a=0.3, gamma_b=0.8),
    ScenarioConfig(scenario="custom", d=3, initial="anticorrelated", model="dephasing", t_max=1.0),
]


def test_12_determinism():
    identical = []
    for cfg in DETERMINISM_CONFIGS:
        cfg = scenarios.with_defaults(cfg)
        first = scenarios.run(cfg, jobs=2).to_csv().encode()
        second = scenarios.run(cfg, jobs=1).to_csv().encode()
        identical.append(first == second)
    record(12, all(identical), f"byte-identical CSV on repeat runs: {sum(identical)}/{len(identical)} scenarios")
