"""Acceptance criteria, one test (or parametrized family) per criterion.

Every tolerance below is pinned to the acceptance text. Each test records a
PASS/FAIL line; the terminal summary prints one line per criterion.
"""

import math
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from zenocat import cli, dynamics, oracle
from zenocat.certify import fourier_grid, resolve_interference_factor
from zenocat.coefficients import (analytic_gamma_minus, measured_rates, rates_by_time_average,
                                  thermal_gamma_minus)
from zenocat.config import load_config
from zenocat.dynamics import EvolutionKernels, ShutterSchedule
from zenocat.reservoir import BoseEinstein, ConstantN, HighTemperature, ReservoirSpec
from zenocat.states import CatState, cat_density_matrix, cat_number_distribution

# pinned tolerances
RATE_IDENTITY_RTOL = 1e-6
RATE_IDENTITY_SECONDS = 60.0
ANALYTIC_RTOL = 1e-6
ANALYTIC_SECONDS = 60.0
MARKOV_RTOL = 0.02
MARKOV_OMEGA_C_TAU = 100.0
ZENO_WINDOW = 0.5  # sampled Gamma t in (0, 0.5]
NEAR_MARKOV_RTOL = 0.10
ZENO_SECONDS = 120.0
PN_ATOL = 1e-8
PN_SECONDS = 120.0
PN_N_MAX = 40
SCENARIO_ATOL = 1e-6
SCENARIO_G = 1e-2
SCENARIO_SECONDS = 300.0
SCENARIO_N_MAX = 40
DUALITY_ATOL = 1e-4
PARITY_T0_ATOL = 1e-10
PARITY_DECADE = 0.1  # first decoherence decade: C_none from 1 down to 0.1
TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-12
POSITIVITY_TOL = -1e-8

R_GRID = (0.1, 1.0, 10.0)
CAT = CatState(2.0)
RATE_GRID = tuple(10.0 ** k for k in np.linspace(-3.0, 2.0, 21))

# every oracle propagation below reports into this monitor (criterion 9)
MONITOR = oracle.StepMonitor()


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_1_rate_identity(acceptance):
    assert len(RATE_GRID) >= 20
    start = time.perf_counter()
    worst, where = 0.0, None
    for r in R_GRID:
        spec = ReservoirSpec.from_ratio(r, 0.1, HighTemperature(100.0))
        for x in RATE_GRID:
            a = measured_rates(x / r, spec)
            b = rates_by_time_average(x / r, spec)
            err = max(_rel(a.gamma_plus, b.gamma_plus), _rel(a.gamma_minus, b.gamma_minus))
            if err > worst:
                worst, where = err, (r, x)
    elapsed = time.perf_counter() - start
    ok = worst <= RATE_IDENTITY_RTOL and elapsed <= RATE_IDENTITY_SECONDS
    acceptance("1", "rate identity", ok,
               f"worst rel {worst:.2e} at r={where[0]:g}, wct={where[1]:.3g} (tol {RATE_IDENTITY_RTOL:g}); "
               f"{len(R_GRID) * len(RATE_GRID)} points in {elapsed:.1f}s (limit {RATE_IDENTITY_SECONDS:g}s)")
    assert ok


def _analytic_sweep(thermal):
    start = time.perf_counter()
    worst, where = 0.0, None
    for r in R_GRID:
        spec = ReservoirSpec.from_ratio(r, 0.1, thermal)
        for x in RATE_GRID:
            err = _rel(analytic_gamma_minus(x / r, spec), thermal_gamma_minus(x / r, spec))
            if err > worst:
                worst, where = err, (r, x)
    return worst, where, time.perf_counter() - start


def test_2_analytic_rate_constant_n(acceptance):
    # the literal reading: flat occupation N(w) = N(w0)
    worst, where, elapsed = _analytic_sweep(ConstantN(100.0))
    ok = worst <= ANALYTIC_RTOL and elapsed <= ANALYTIC_SECONDS
    acceptance("2", "analytic Ohmic rate", ok,
               f"ConstantN: worst rel {worst:.2e} at r={where[0]:g}, wct={where[1]:.3g} "
               f"(tol {ANALYTIC_RTOL:g}) in {elapsed:.1f}s")
    assert ok


def test_2_analytic_rate_high_temperature(acceptance):
    # supplementary: the occupation for which the closed form is exact
    worst, where, elapsed = _analytic_sweep(HighTemperature(100.0))
    ok = worst <= ANALYTIC_RTOL and elapsed <= ANALYTIC_SECONDS
    acceptance("2-supplementary", "analytic Ohmic rate, N(w) = theta w0/w", ok,
               f"worst rel {worst:.2e} at r={where[0]:g}, wct={where[1]:.3g} "
               f"(tol {ANALYTIC_RTOL:g}) in {elapsed:.1f}s")
    assert ok


@pytest.mark.parametrize("r", [10.0, 0.1])
def test_3_markov_recovery(acceptance, r):
    spec = ReservoirSpec.from_ratio(r, 0.1, HighTemperature(100.0))
    rs = measured_rates(MARKOV_OMEGA_C_TAU / r, spec)
    rate_err = max(_rel(rs.gamma_plus, rs.markov_plus), _rel(rs.gamma_minus, rs.markov_minus))
    k, km = EvolutionKernels.from_rates(rs), EvolutionKernels.markov(spec)
    # curves on the figure scale: deviation relative to the common initial value
    gt = np.union1d(np.linspace(0.0, load_config().t_end, 101), np.linspace(0.0, ZENO_WINDOW, 201))
    t = gt / spec.big_gamma
    lp, lpm = dynamics.log_wigner_peak(t, k, CAT), dynamics.log_wigner_peak(t, km, CAT)
    peak_dev = float(np.max(np.abs(np.exp(lp - lp[0]) - np.exp(lpm - lpm[0]))))
    peak_ratio = float(np.max(np.abs(np.expm1(lp - lp[0] - lpm + lpm[0]))))
    par_dev = float(np.max(np.abs(dynamics.parity_contrast(t, k, CAT)
                                  - dynamics.parity_contrast(t, km, CAT))))
    pn_dev = 0.0
    n_max = 60
    for tt in t[::15]:
        p = dynamics.pn_distribution(tt, k, CAT, n_max).probs
        pm = dynamics.pn_distribution(tt, km, CAT, n_max).probs
        pn_dev = max(pn_dev, float(np.max(np.abs(p - pm)) / np.max(pm)))
    ok = max(rate_err, peak_dev, par_dev, pn_dev) <= MARKOV_RTOL
    acceptance("3", "Markov recovery at omega_c tau = 100", ok,
               f"r={r:g}: rates {rate_err:.2%}, peak {peak_dev:.2%}, parity {par_dev:.2%}, "
               f"P_n {pn_dev:.2%} (tol {MARKOV_RTOL:.0%}; pointwise peak ratio {peak_ratio:.2%})")
    assert ok


def _log_peak_curves(r, x, spec=None):
    spec = spec or ReservoirSpec.from_ratio(r, 0.1, HighTemperature(100.0))
    gt = np.linspace(0.0, ZENO_WINDOW, 501)
    t = gt / spec.big_gamma
    k = EvolutionKernels.from_rates(measured_rates(x / r, spec))
    lk = dynamics.log_wigner_peak(t, k, CAT)
    lm = dynamics.log_wigner_peak(t, EvolutionKernels.markov(spec), CAT)
    # normalized curves in log form, t > 0 only
    return gt[1:], (lk - lk[0])[1:], (lm - lm[0])[1:]


@pytest.mark.parametrize("r,x,expect", [(10.0, 0.01, "slower"), (10.0, 0.1, "slower"),
                                        (0.1, 0.01, "faster"), (0.1, 0.1, "faster")])
def test_4_zeno_ordering(acceptance, r, x, expect):
    start = time.perf_counter()
    gt, lk, lm = _log_peak_curves(r, x)
    holds = lk > lm if expect == "slower" else lk < lm
    elapsed = time.perf_counter() - start
    ok = bool(np.all(holds)) and elapsed <= ZENO_SECONDS
    first_bad = "none" if np.all(holds) else f"Gamma t={gt[np.argmin(holds)]:.3g}"
    acceptance("4", "Zeno/anti-Zeno ordering of the Wigner peak", ok,
               f"r={r:g}, wct={x:g} {expect} than Markov at {int(holds.sum())}/{len(holds)} "
               f"samples (first violation: {first_bad})")
    assert ok


def test_4_near_markov(acceptance):
    gt, lk, lm = _log_peak_curves(10.0, 1.0)
    dev = np.abs(np.expm1(lk - lm))
    ok = float(np.max(dev)) <= NEAR_MARKOV_RTOL
    acceptance("4", "Zeno/anti-Zeno ordering of the Wigner peak", ok,
               f"r=10, wct=1 within {NEAR_MARKOV_RTOL:.0%} of Markov: worst {np.max(dev):.3g} "
               f"at Gamma t={gt[np.argmax(dev)]:.3g}")
    assert ok


@pytest.mark.parametrize("r", [10.0, 0.1])
def test_5_closed_form_vs_rate_equation(acceptance, r):
    start = time.perf_counter()
    spec = ReservoirSpec.from_ratio(r, 1e-2, BoseEinstein(1.0))
    rs = measured_rates(10.0 / r, spec)
    k = EvolutionKernels.from_rates(rs)
    times = np.linspace(0.0, 3.0 / rs.b_tau, 10)
    ode = oracle.integrate_rate_equation(cat_number_distribution(CAT, PN_N_MAX), times, rs)
    worst = 0.0
    for t, o in zip(times, ode):
        closed = np.array([dynamics.pn_closed_form(n, t, k, CAT) for n in range(PN_N_MAX + 1)])
        worst = max(worst, float(np.max(np.abs(closed - o.probs))))
    elapsed = time.perf_counter() - start
    ok = worst <= PN_ATOL and elapsed <= PN_SECONDS
    acceptance("5", "closed-form P_n vs rate equation", ok,
               f"r={r:g}, wct=10, N=Planck(theta=1), n_max={PN_N_MAX}: worst {worst:.2e} "
               f"(tol {PN_ATOL:g}) in {elapsed:.1f}s")
    assert ok


_SCENARIO_TIME = []


@pytest.mark.parametrize("r", [0.1, 10.0])
@pytest.mark.parametrize("x", [0.01, 0.1, 1.0])
def test_6_scenario_equivalence(acceptance, r, x):
    start = time.perf_counter()
    spec = ReservoirSpec.from_ratio(r, SCENARIO_G, HighTemperature(100.0))
    tau = x / r
    ms = (1, 5, 20)
    cfg = oracle.PropagationConfig(n_max=SCENARIO_N_MAX)
    rho0 = cat_density_matrix(CAT, SCENARIO_N_MAX)
    _, shut = oracle.propagate_shuttered(rho0, max(ms), tau, spec, cfg, MONITOR, snapshots=ms)
    _, meas = oracle.propagate_measured(rho0, max(ms), tau, spec, cfg, MONITOR, snapshots=ms)
    diag = max(float(np.max(np.abs(shut[m].diagonal().probs - meas[m].diagonal().probs))) for m in ms)
    coh = min(float(np.max(np.abs(shut[m].entries - np.diag(np.diag(shut[m].entries))))) for m in ms)
    exact = all(np.count_nonzero(meas[m].entries - np.diag(np.diag(meas[m].entries))) == 0 for m in ms)
    _SCENARIO_TIME.append(time.perf_counter() - start)
    total = sum(_SCENARIO_TIME)
    ok = diag <= SCENARIO_ATOL and coh > 0.0 and exact and total <= SCENARIO_SECONDS
    acceptance("6", "measured vs shuttered scenarios", ok,
               f"r={r:g}, wct={x:g}: diag {diag:.1e} (tol {SCENARIO_ATOL:g}), shuttered "
               f"coherence {coh:.2e}, measured diagonal={exact}, cumulative {total:.0f}s")
    assert ok


@pytest.mark.parametrize("r", [10.0, 0.1])
def test_7_fourier_duality(acceptance, r):
    cfg = load_config()
    factor, mismatch = resolve_interference_factor(CAT, cfg.fourier_spacing)
    assert factor == dynamics.INTERFERENCE_FACTOR
    spec = cfg.spec(r)
    axis = dynamics.default_grid(CAT, cfg.grid_points, cfg.half_width)
    grid = fourier_grid(CAT.alpha, cfg.fourier_spacing)
    worst = 0.0
    for x in cfg.omega_c_tau:
        tau = x / r
        rs = measured_rates(tau, spec, shutter=True)
        k = EvolutionKernels.from_rates(rs)
        integrals = (rs.big_gamma_tau, rs.delta_gamma_tau)
        for m in (0, 5, 50):
            sched = ShutterSchedule(tau, m)
            w_dft = oracle.wigner_from_qcf(
                lambda z: dynamics.recursive_qcf(z, sched, CAT, integrals=integrals), axis, axis, grid)
            w_an = dynamics.analytic_wigner(axis[:, None] + 1j * axis[None, :], m * tau, k, CAT)
            worst = max(worst, float(np.max(np.abs(w_dft - w_an))))
    ok = worst <= DUALITY_ATOL
    acceptance("7", "QCF/Wigner duality", ok,
               f"r={r:g}, wct in {list(cfg.omega_c_tau)}, m in [0, 5, 50], {len(axis)}^2 grid: "
               f"worst {worst:.1e} (tol {DUALITY_ATOL:g}); W_I factor {factor:g} "
               f"(origin mismatch {mismatch:.1e})")
    assert ok


def test_7_report_records_factor(acceptance, tmp_path):
    code = cli.main(["verify", "--out", str(tmp_path)])
    report = (tmp_path / "verify_report.txt").read_text()
    line = [l for l in report.splitlines() if l.startswith("interference amplitude factor")]
    ok = code == cli.EXIT_OK and line == [
        "interference amplitude factor resolved by the Fourier oracle: 2"]
    acceptance("7", "QCF/Wigner duality", ok,
               f"verify exit {code}; report line: {line[0] if line else 'missing'}")
    assert ok


def _parity_setup(r):
    spec = ReservoirSpec.from_ratio(r, 0.1, HighTemperature(100.0))
    return spec, EvolutionKernels.from_rates(measured_rates(0.01 / r, spec))


def _decade_end():
    spec = ReservoirSpec.from_ratio(10.0, 0.1, HighTemperature(100.0))
    km = EvolutionKernels.markov(spec)
    # the Markov reference is the same function of Gamma t for every r
    f = lambda gt: dynamics.parity_contrast(gt / spec.big_gamma, km, CAT) - PARITY_DECADE
    return brentq(f, 1e-9, 1.0, xtol=1e-14), km, spec


def test_8_parity_at_zero(acceptance):
    worst = 0.0
    for r in (10.0, 0.1):
        spec, k = _parity_setup(r)
        worst = max(worst, abs(dynamics.pn_distribution(0.0, k, CAT, 60).parity_contrast() - 1.0),
                    abs(float(dynamics.parity_contrast(0.0, k, CAT)) - 1.0))
    ok = worst <= PARITY_T0_ATOL
    acceptance("8", "parity persistence", ok, f"|C(0) - 1| = {worst:.1e} (tol {PARITY_T0_ATOL:g})")
    assert ok


@pytest.mark.parametrize("upper,lower", [(10.0, None), (None, 0.1)])
def test_8_parity_ordering(acceptance, upper, lower):
    end, km, ref_spec = _decade_end()
    gt = np.linspace(0.0, end, 51)[1:]
    c_none = np.array([dynamics.pn_distribution(g / ref_spec.big_gamma, km, CAT, 80).parity_contrast()
                       for g in gt])

    def contrast(r):
        spec, k = _parity_setup(r)
        return np.array([dynamics.pn_distribution(g / spec.big_gamma, k, CAT, 80).parity_contrast()
                         for g in gt])

    if upper is not None:
        holds, label = contrast(upper) > c_none, f"C_r={upper:g} > C_none"
    else:
        holds, label = c_none > contrast(lower), f"C_none > C_r={lower:g}"
    ok = bool(np.all(holds))
    first_bad = "none" if ok else f"Gamma t={gt[np.argmin(holds)]:.3g}"
    acceptance("8", "parity persistence", ok,
               f"{label} at wct=0.01 on {int(holds.sum())}/{len(gt)} samples of Gamma t in "
               f"(0, {end:.3g}] (first violation: {first_bad})")
    assert ok


def test_9_conservation(acceptance):
    # every propagator kind on a short run, plus whatever criterion 6 recorded
    spec = ReservoirSpec.from_ratio(10.0, SCENARIO_G, HighTemperature(100.0))
    rho0 = cat_density_matrix(CAT, 30)
    own = oracle.StepMonitor()
    for kind, tau in ((oracle.ScenarioKind.FREE, None), (oracle.ScenarioKind.MEASURED, 0.01),
                      (oracle.ScenarioKind.SHUTTERED, 0.01), (oracle.ScenarioKind.MARKOV, None)):
        cfg = oracle.PropagationConfig(n_max=30, scenario=oracle.Scenario(kind, tau))
        oracle.propagate(rho0, 0.05, spec, cfg, own)
    mon = oracle.StepMonitor()
    mon.merge(own)
    mon.merge(MONITOR)
    ok = (mon.trace_error <= TRACE_TOL and mon.hermiticity_error <= HERMITICITY_TOL
          and mon.min_eigenvalue >= POSITIVITY_TOL)
    acceptance("9", "conservation", ok,
               f"{mon.steps} steps: trace {mon.trace_error:.1e} (tol {TRACE_TOL:g}), hermiticity "
               f"{mon.hermiticity_error:.1e} (tol {HERMITICITY_TOL:g}), min eigenvalue "
               f"{mon.min_eigenvalue:.1e} (floor {POSITIVITY_TOL:g})")
    assert ok


def test_10_determinism(acceptance, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(["wigner-peak"]) == cli.EXIT_OK
    first = (tmp_path / "zenocat-out" / "wigner_peak.csv").read_bytes()
    assert cli.main(["wigner-peak"]) == cli.EXIT_OK
    second = (tmp_path / "zenocat-out" / "wigner_peak.csv").read_bytes()
    ok = first == second
    acceptance("10", "determinism", ok, f"two default wigner-peak runs, {len(first)} bytes, "
               f"identical={ok}")
    assert ok
