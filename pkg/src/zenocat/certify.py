"""Oracle certification suite behind ``zenocat verify``.

Each check compares a closed form against an independent route and reports
its worst error next to the tolerance it must meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import dynamics, oracle
from .coefficients import (RateSet, analytic_gamma_minus, measured_rates, rates_by_time_average,
                           thermal_gamma_minus)
from .config import RunConfig
from .dynamics import EvolutionKernels, ShutterSchedule
from .reservoir import BoseEinstein, HighTemperature, ReservoirSpec
from .states import CatState, cat_density_matrix, cat_number_distribution

RatePerturbation = Callable[[RateSet], RateSet]


@dataclass
class CheckResult:
    name: str
    worst: float
    tol: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        text = f"{flag} {self.name}: worst={self.worst:.3e} tol={self.tol:.1e}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    interference_factor: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, worst, tol, detail="", passed=None):
        ok = worst <= tol if passed is None else passed
        self.checks.append(CheckResult(name, float(worst), tol, bool(ok), detail))

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        if self.interference_factor is not None:
            out.append(f"interference amplitude factor resolved by the Fourier oracle: "
                       f"{self.interference_factor:g}")
        out.append("verification " + ("passed" if self.passed else "FAILED"))
        return out


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def check_rate_identity(report, r_values=(0.1, 1.0, 10.0), grid=(1e-3, 1e-1, 10.0)):
    worst = 0.0
    for r in r_values:
        spec = ReservoirSpec.from_ratio(r, 0.1)
        for x in grid:
            a = measured_rates(x / r, spec)
            b = rates_by_time_average(x / r, spec)
            worst = max(worst, _rel(a.gamma_plus, b.gamma_plus), _rel(a.gamma_minus, b.gamma_minus))
    report.add("rate-identity", worst, 1e-6, "sinc^2 rates vs time-averaged coefficients")


def check_analytic_rate(report, r_values=(0.1, 1.0, 10.0), grid=(1e-3, 1e-1, 10.0)):
    worst = 0.0
    for r in r_values:
        spec = ReservoirSpec.from_ratio(r, 0.1, HighTemperature(100.0))
        for x in grid:
            worst = max(worst, _rel(analytic_gamma_minus(x / r, spec), thermal_gamma_minus(x / r, spec)))
    report.add("analytic-rate", worst, 1e-6, "closed form vs quadrature, classical occupation")


def check_markov_recovery(report, cfg: RunConfig):
    worst = 0.0
    for r in cfg.r_values:
        rs = measured_rates(100.0 / r, cfg.spec(r))
        worst = max(worst, _rel(rs.gamma_plus, rs.markov_plus), _rel(rs.gamma_minus, rs.markov_minus))
    report.add("markov-recovery", worst, 0.02, "omega_c tau = 100")


def check_pn_rate_equation(report, perturb: RatePerturbation | None, cat: CatState, n_max=40):
    spec = ReservoirSpec.from_ratio(10.0, 1e-2, BoseEinstein(1.0))
    rates = measured_rates(1.0, spec)
    closed = perturb(rates) if perturb else rates
    kern = EvolutionKernels.from_rates(closed)
    times = np.linspace(0.0, 3.0 / rates.b_tau, 10)
    p0 = cat_number_distribution(cat, n_max)
    ode = oracle.integrate_rate_equation(p0, times, rates)
    worst = max(float(np.max(np.abs(dynamics.pn_distribution(t, kern, cat, n_max).probs - o.probs)))
                for t, o in zip(times, ode))
    report.add("pn-vs-rate-equation", worst, 1e-8, f"n_max={n_max}, 10 times over [0, 3/b]")


def check_oracle_scenarios(report, perturb: RatePerturbation | None, cat: CatState,
                           monitor: oracle.StepMonitor, n_max=30, ms=(1, 5), omega_c_tau=0.1):
    eq_worst = qcf_worst = pn_worst = 0.0
    offdiag_min = math.inf
    measured_offdiag = 0.0
    probes = (0.3 + 0.2j, 1.0 + 0.5j, -0.4 + 1.3j)
    for r in (0.1, 10.0):
        spec = ReservoirSpec.from_ratio(r, 1e-2, HighTemperature(100.0))
        tau = omega_c_tau / r
        rates = measured_rates(tau, spec, shutter=True)
        closed = perturb(rates) if perturb else rates
        cfg = oracle.PropagationConfig(n_max=n_max)
        rho0 = cat_density_matrix(cat, n_max)
        _, shut = oracle.propagate_shuttered(rho0, max(ms), tau, spec, cfg, monitor, snapshots=ms)
        _, meas = oracle.propagate_measured(rho0, max(ms), tau, spec, cfg, monitor, snapshots=ms)
        for m in ms:
            ds, dm = shut[m].diagonal().probs, meas[m].diagonal().probs
            eq_worst = max(eq_worst, float(np.max(np.abs(ds - dm))))
            off = shut[m].entries - np.diag(np.diag(shut[m].entries))
            offdiag_min = min(offdiag_min, float(np.max(np.abs(off))))
            offm = meas[m].entries - np.diag(np.diag(meas[m].entries))
            measured_offdiag = max(measured_offdiag, float(np.max(np.abs(offm))))
            kern = EvolutionKernels.from_rates(closed)
            pn = dynamics.pn_distribution(m * tau, kern, cat, n_max).probs
            pn_worst = max(pn_worst, float(np.max(np.abs(pn - dm))))
            sched = ShutterSchedule(tau, m)
            integrals = (closed.big_gamma_tau, closed.delta_gamma_tau)
            for xi in probes:
                qcf_worst = max(qcf_worst, abs(dynamics.recursive_qcf(xi, sched, cat, integrals=integrals)
                                               - oracle.fock_qcf(shut[m], xi)))
    report.add("scenario-equivalence", eq_worst, 1e-6, "measured vs shuttered Fock diagonals, g=1e-2")
    report.add("coherences", measured_offdiag, 0.0,
               f"measured result diagonal; smallest shuttered off-diagonal max {offdiag_min:.2e}",
               passed=measured_offdiag == 0.0 and offdiag_min > 1e-6)
    report.add("pn-vs-measured-oracle", pn_worst, 1e-6, "closed-form P_n vs evolve-then-project")
    report.add("qcf-vs-shuttered-oracle", qcf_worst, 1e-5, "recursive QCF vs tr[rho D(xi)]")


def fourier_grid(alpha: float, spacing: float = 0.05) -> oracle.FourierGrid:
    # cross terms of the cat QCF sit at |Re xi| = 2 alpha with unit width
    return oracle.FourierGrid(2.0 * abs(alpha) + 9.0, spacing)


def resolve_interference_factor(cat: CatState, spacing: float = 0.05) -> tuple[float, float]:
    """Compare the Fourier transform of the cat QCF at the origin with the
    interference amplitudes 1 and 2; return ``(factor, mismatch)``."""
    zero = np.array([0.0])
    w0 = oracle.wigner_from_qcf(lambda z: dynamics.cat_qcf(z, cat), zero, zero,
                                fourier_grid(cat.alpha, spacing))[0, 0]
    kern = EvolutionKernels(1.0, 0.0)
    errs = {f: abs(dynamics.analytic_wigner(0.0, 0.0, kern, cat, f) - w0) for f in (1.0, 2.0)}
    best = min(errs, key=errs.get)
    return best, errs[best]


def check_fourier_duality(report, cfg: RunConfig, perturb: RatePerturbation | None,
                          ms=(0, 5, 50), omega_c_tau=0.1):
    cat = cfg.cat()
    factor, mismatch = resolve_interference_factor(cat, cfg.fourier_spacing)
    report.interference_factor = factor
    report.add("interference-amplitude", mismatch, 1e-6,
               f"DFT at origin selects factor {factor:g}",
               passed=mismatch <= 1e-6 and factor == dynamics.INTERFERENCE_FACTOR)
    r = cfg.r_values[0]
    spec = cfg.spec(r)
    tau = omega_c_tau / r
    rates = measured_rates(tau, spec, shutter=True)
    closed = perturb(rates) if perturb else rates
    kern = EvolutionKernels.from_rates(closed)
    axis = dynamics.default_grid(cat, cfg.grid_points, cfg.half_width)
    integrals = (rates.big_gamma_tau, rates.delta_gamma_tau)
    worst = 0.0
    grid = fourier_grid(cat.alpha, cfg.fourier_spacing)
    for m in ms:
        sched = ShutterSchedule(tau, m)
        w_dft = oracle.wigner_from_qcf(
            lambda z: dynamics.recursive_qcf(z, sched, cat, integrals=integrals), axis, axis, grid)
        w_an = dynamics.wigner_field(m * tau, kern, cat, cfg.grid_points, cfg.half_width).values
        worst = max(worst, float(np.max(np.abs(w_dft - w_an))))
    report.add("fourier-duality", worst, 1e-4,
               f"r={r:g}, omega_c tau={omega_c_tau:g}, m in {list(ms)}, {cfg.grid_points}^2 grid")


def run_verification(cfg: RunConfig, perturb: RatePerturbation | None = None,
                     log: Callable[[str], None] | None = None) -> VerificationReport:
    """Run all checks. ``perturb`` alters the rates fed to the closed forms
    only (oracles keep the true ones); it exists for negative controls."""
    report = VerificationReport()
    cat = cfg.cat()
    monitor = oracle.StepMonitor()
    steps = [
        lambda: check_rate_identity(report),
        lambda: check_analytic_rate(report),
        lambda: check_markov_recovery(report, cfg),
        lambda: check_pn_rate_equation(report, perturb, cat),
        lambda: check_oracle_scenarios(report, perturb, cat, monitor),
        lambda: check_fourier_duality(report, cfg, perturb),
    ]
    for step in steps:
        before = len(report.checks)
        step()
        if log:
            for c in report.checks[before:]:
                log(c.line())
    report.add("conservation",
               max(monitor.trace_error / 1e-8, monitor.hermiticity_error / 1e-12,
                   max(0.0, -monitor.min_eigenvalue) / 1e-8),
               1.0,
               f"{monitor.steps} steps: trace {monitor.trace_error:.1e}, hermiticity "
               f"{monitor.hermiticity_error:.1e}, min eigenvalue {monitor.min_eigenvalue:.1e}")
    if log:
        log(report.checks[-1].line())
    return report


def scaled_gamma_minus(factor: float) -> RatePerturbation:
    """Negative control: rescale ``gamma_{-1}`` by ``factor``."""
    return lambda rs: replace(rs, gamma_minus=rs.gamma_minus * factor)
