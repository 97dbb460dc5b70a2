"""Brute-force references in a truncated Fock basis.

The time-local master equation is stepped with classical RK4 on the full
density matrix. Ladder operators act elementwise; the truncated ``a a^dagger``
is ``diag(1, ..., N-1, 0)`` so the generator is a proper Lindblad form and
preserves the trace exactly. These routines are slow on purpose and exist to
certify the closed forms in :mod:`zenocat.dynamics`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import eval_genlaguerre, gammaln

from .coefficients import RateSet, delta_of_t, gamma_of_t, markov_rates
from .reservoir import ReservoirSpec
from .states import FockDensityMatrix, NumberDistribution, TruncationError

TRACE_TOL = 1e-8
HERMITICITY_TOL = 1e-12
POSITIVITY_TOL = -1e-8
LEAKAGE_TOL = 1e-8


class PropagationError(RuntimeError):
    """A step broke a conservation check or the step error is too large."""


class ScenarioKind(enum.Enum):
    FREE = "free"
    MEASURED = "measured"
    SHUTTERED = "shuttered"
    MARKOV = "markov"


@dataclass(frozen=True)
class Scenario:
    kind: ScenarioKind
    tau: float | None = None

    def __post_init__(self):
        scheduled = self.kind in (ScenarioKind.MEASURED, ScenarioKind.SHUTTERED)
        if scheduled and not (self.tau is not None and self.tau > 0):
            raise ValueError(f"{self.kind.value} scenario needs a positive tau")


@dataclass(frozen=True)
class PropagationConfig:
    """``dt=None`` picks ``min(tau/20, 0.01/max(omega_c, omega_0))``."""

    n_max: int
    dt: float | None = None
    scenario: Scenario = Scenario(ScenarioKind.FREE)
    step_tol: float = 1e-9
    richardson: bool = True
    check_every: int = 1

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")

    def max_dt(self, spec: ReservoirSpec, tau: float | None = None) -> float:
        bound = 0.01 / max(spec.omega_c, spec.omega_0)
        if tau is None:
            tau = self.scenario.tau
        if tau is not None:
            bound = min(bound, tau / 20.0)
        if self.dt is not None:
            if self.dt > bound * (1 + 1e-12):
                raise ValueError(f"dt={self.dt} exceeds the allowed step {bound:.3g}")
            return self.dt
        return bound


@dataclass
class StepMonitor:
    """Worst-case conservation figures over every accepted step."""

    steps: int = 0
    trace_error: float = 0.0
    hermiticity_error: float = 0.0
    min_eigenvalue: float = math.inf
    richardson_error: float = 0.0

    def record(self, rho: np.ndarray, trace0: float) -> None:
        self.steps += 1
        tr = abs(np.trace(rho).real - trace0)
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        lam = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
        self.trace_error = max(self.trace_error, tr)
        self.hermiticity_error = max(self.hermiticity_error, herm)
        self.min_eigenvalue = min(self.min_eigenvalue, lam)
        if tr > TRACE_TOL or herm > HERMITICITY_TOL or lam < POSITIVITY_TOL:
            raise PropagationError(
                f"step {self.steps}: trace drift {tr:.2e}, hermiticity {herm:.2e}, "
                f"min eigenvalue {lam:.2e}")

    def merge(self, other: "StepMonitor") -> None:
        self.steps += other.steps
        self.trace_error = max(self.trace_error, other.trace_error)
        self.hermiticity_error = max(self.hermiticity_error, other.hermiticity_error)
        self.min_eigenvalue = min(self.min_eigenvalue, other.min_eigenvalue)
        self.richardson_error = max(self.richardson_error, other.richardson_error)


# --- generator ---------------------------------------------------------------

class Generator:
    """``L[rho] = (A/2)(2 a rho a^+ - {a^+ a, rho}) + (B/2)(2 a^+ rho a - {a a^+, rho})``
    with ``A = Delta + gamma`` and ``B = Delta - gamma``."""

    def __init__(self, dim: int):
        n = np.arange(dim, dtype=float)
        self.dim = dim
        self.number = n
        up = np.append(n[1:], 0.0)  # diag of truncated a a^+
        self.lower_w = np.sqrt(np.outer(n[1:], n[1:]))  # weights of a rho a^+
        self.anti_down = 0.5 * (n[:, None] + n[None, :])
        self.anti_up = 0.5 * (up[:, None] + up[None, :])

    def parts(self, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Loss and gain dissipators, each with unit coefficient."""
        loss = -self.anti_down * rho
        loss[:-1, :-1] += self.lower_w * rho[1:, 1:]
        gain = -self.anti_up * rho
        gain[1:, 1:] += self.lower_w * rho[:-1, :-1]
        return loss, gain

    def __call__(self, rho: np.ndarray, coef_a: float, coef_b: float) -> np.ndarray:
        loss, gain = self.parts(rho)
        return coef_a * loss + coef_b * gain


@lru_cache(maxsize=32)
def _coefficient_table(spec: ReservoirSpec, dt: float, steps: int) -> tuple[np.ndarray, np.ndarray]:
    """``Delta +- gamma`` on the half-step grid ``k dt/2``, clock from 0."""
    times = 0.5 * dt * np.arange(2 * steps + 1)
    delta = np.array([delta_of_t(t, spec) for t in times])
    gamma = np.array([gamma_of_t(t, spec) for t in times])
    return delta + gamma, delta - gamma


def _rk4_segment(rho: np.ndarray, gen: Generator, coef_a: np.ndarray, coef_b: np.ndarray,
                 dt: float, steps: int, monitor: StepMonitor, check_every: int) -> np.ndarray:
    trace0 = float(np.trace(rho).real)
    for k in range(steps):
        i0, i1, i2 = 2 * k, 2 * k + 1, 2 * k + 2
        k1 = gen(rho, coef_a[i0], coef_b[i0])
        k2 = gen(rho + 0.5 * dt * k1, coef_a[i1], coef_b[i1])
        k3 = gen(rho + 0.5 * dt * k2, coef_a[i1], coef_b[i1])
        k4 = gen(rho + dt * k3, coef_a[i2], coef_b[i2])
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (k + 1) % check_every == 0 or k == steps - 1:
            monitor.record(rho, trace0)
    return rho


def _steps_for(length: float, max_dt: float) -> tuple[float, int]:
    steps = max(1, math.ceil(length / max_dt - 1e-9))
    return length / steps, steps


def _segment(rho: np.ndarray, length: float, spec: ReservoirSpec, config: PropagationConfig,
             monitor: StepMonitor, tau: float | None = None) -> np.ndarray:
    """Evolve over one segment with the coefficient clock starting at 0."""
    dt, steps = _steps_for(length, config.max_dt(spec, tau))
    gen = Generator(rho.shape[0])
    coef_a, coef_b = _coefficient_table(spec, dt, steps)
    out = _rk4_segment(rho, gen, coef_a, coef_b, dt, steps, monitor, config.check_every)
    if config.richardson and steps % 2 == 0 and monitor.richardson_error == 0.0:
        # once per run: the same segment at twice the step, RK4 error ~ diff/15
        coarse_a, coarse_b = coef_a[::2], coef_b[::2]
        coarse = _rk4_segment(rho, gen, coarse_a, coarse_b, 2 * dt, steps // 2, StepMonitor(),
                              steps)
        est = float(np.max(np.abs(out - coarse))) / 15.0
        monitor.richardson_error = max(est, np.finfo(float).tiny)
        if est > config.step_tol:
            raise PropagationError(f"RK4 step error estimate {est:.2e} exceeds {config.step_tol:g}; "
                                   "reduce dt")
    return out


def _start(rho0: FockDensityMatrix, config: PropagationConfig) -> np.ndarray:
    if rho0.dim != config.n_max + 1:
        raise ValueError(f"rho0 has dimension {rho0.dim}, config expects {config.n_max + 1}")
    return rho0.entries.copy()


def propagate_nonmarkov(rho0: FockDensityMatrix, t_end: float, spec: ReservoirSpec,
                        config: PropagationConfig, monitor: StepMonitor | None = None
                        ) -> FockDensityMatrix:
    """Time-local equation with ``Delta(t), gamma(t)`` from ``t = 0``."""
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    rho = _start(rho0, config)
    if t_end == 0:
        return FockDensityMatrix(rho)
    monitor = monitor if monitor is not None else StepMonitor()
    return FockDensityMatrix(_segment(rho, t_end, spec, config, monitor, tau=t_end))


def apply_projection(rho: FockDensityMatrix) -> FockDensityMatrix:
    """Nonselective energy measurement: keep the Fock diagonal only."""
    return FockDensityMatrix(np.diag(np.diag(rho.entries)))


def _cycles(rho0, m, tau, spec, config, monitor, project, snapshots):
    if m < 0 or int(m) != m:
        raise ValueError("m must be a nonnegative integer")
    rho = _start(rho0, config)
    monitor = monitor if monitor is not None else StepMonitor()
    wanted = set(snapshots or ())
    saved = {}
    if 0 in wanted:
        saved[0] = FockDensityMatrix(rho.copy())
    for k in range(1, m + 1):
        rho = _segment(rho, tau, spec, config, monitor, tau=tau)
        if project:
            rho = np.diag(np.diag(rho))
        if k in wanted:
            saved[k] = FockDensityMatrix(rho.copy())
    final = FockDensityMatrix(rho)
    return (final, saved) if snapshots is not None else final


def propagate_measured(rho0: FockDensityMatrix, m: int, tau: float, spec: ReservoirSpec,
                       config: PropagationConfig, monitor: StepMonitor | None = None,
                       snapshots: Sequence[int] | None = None):
    """``m`` cycles of free evolution over ``tau`` followed by a projection.

    With ``snapshots`` returns ``(final, {m_k: rho})``.
    """
    return _cycles(rho0, m, tau, spec, config, monitor, True, snapshots)


def propagate_shuttered(rho0: FockDensityMatrix, m: int, tau: float, spec: ReservoirSpec,
                        config: PropagationConfig, monitor: StepMonitor | None = None,
                        snapshots: Sequence[int] | None = None):
    """``m`` coupling-on segments of length ``tau``, coefficient clock reset
    at the start of each."""
    return _cycles(rho0, m, tau, spec, config, monitor, False, snapshots)


def propagate_markov(rho0: FockDensityMatrix, t_end: float, spec: ReservoirSpec,
                     config: PropagationConfig, monitor: StepMonitor | None = None
                     ) -> FockDensityMatrix:
    """Stationary rates ``A = Gamma(N+1)``, ``B = Gamma N``."""
    rho = _start(rho0, config)
    if t_end == 0:
        return FockDensityMatrix(rho)
    monitor = monitor if monitor is not None else StepMonitor()
    dt, steps = _steps_for(t_end, config.max_dt(spec, None))
    plus, minus = markov_rates(spec)
    ca = np.full(2 * steps + 1, plus)
    cb = np.full(2 * steps + 1, minus)
    return FockDensityMatrix(_rk4_segment(rho, Generator(rho.shape[0]), ca, cb, dt, steps, monitor,
                                          config.check_every))


def propagate(rho0: FockDensityMatrix, t_end: float, spec: ReservoirSpec,
              config: PropagationConfig, monitor: StepMonitor | None = None) -> FockDensityMatrix:
    """Dispatch on ``config.scenario``; scheduled scenarios need ``t_end`` a
    multiple of ``tau``."""
    sc = config.scenario
    if sc.kind is ScenarioKind.FREE:
        return propagate_nonmarkov(rho0, t_end, spec, config, monitor)
    if sc.kind is ScenarioKind.MARKOV:
        return propagate_markov(rho0, t_end, spec, config, monitor)
    m = round(t_end / sc.tau)
    if abs(m * sc.tau - t_end) > 1e-9 * max(1.0, t_end):
        raise ValueError("t_end must be a multiple of tau")
    func = propagate_measured if sc.kind is ScenarioKind.MEASURED else propagate_shuttered
    return func(rho0, m, sc.tau, spec, config, monitor)


# --- rate equation --------------------------------------------------------

def rate_matrix(gamma_plus: float, gamma_minus: float, dim: int) -> np.ndarray:
    """Birth-death generator on ``0..dim-1`` with reflecting top level."""
    n = np.arange(dim, dtype=float)
    up = np.append(n[1:], 0.0)
    q = np.diag(-gamma_plus * n - gamma_minus * up)
    q += np.diag(gamma_plus * n[1:], k=1)
    q += np.diag(gamma_minus * n[1:], k=-1)
    return q


def integrate_rate_equation(p0: NumberDistribution, t_end, rates: RateSet | tuple[float, float],
                            rtol: float = 1e-12, atol: float = 1e-16):
    """Solve the population equations with constant ``gamma_{+-1}``.

    ``t_end`` may be a scalar (returns one distribution) or an ascending
    sequence (returns a list).
    """
    if isinstance(rates, RateSet):
        gp, gm = rates.gamma_plus, rates.gamma_minus
    else:
        gp, gm = rates
    if abs(p0.total() - 1.0) > 1e-10:
        raise ValueError(f"p0 is not normalised (sum={p0.total():.12g})")
    scalar = np.ndim(t_end) == 0
    times = np.atleast_1d(np.asarray(t_end, dtype=float))
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and ascending")
    q = rate_matrix(gp, gm, p0.probs.size)
    if times[-1] == 0.0 or (gp == 0.0 and gm == 0.0):
        out = [NumberDistribution(p0.probs.copy()) for _ in times]
        return out[0] if scalar else out
    sol = integrate.solve_ivp(lambda t, p: q @ p, (0.0, float(times[-1])), p0.probs,
                              method="DOP853", t_eval=times, rtol=rtol, atol=atol)
    if not sol.success:
        raise PropagationError(f"rate equation failed: {sol.message}")
    out = []
    for col in sol.y.T:
        if abs(col[-1]) > LEAKAGE_TOL:
            raise TruncationError(f"population {col[-1]:.2e} at n_max; enlarge n_max")
        out.append(NumberDistribution(col.copy()))
    return out[0] if scalar else out


def stationary_distribution(gamma_plus: float, gamma_minus: float, n_max: int) -> NumberDistribution:
    """Geometric law with mean ``gamma_minus/(gamma_plus - gamma_minus)``."""
    q = gamma_minus / gamma_plus
    n = np.arange(n_max + 1)
    return NumberDistribution((1.0 - q) * q ** n)


# --- phase space -----------------------------------------------------------

def displacement_elements(xi: complex, dim: int) -> np.ndarray:
    """``<m|D(xi)|n>`` for ``m, n < dim`` from generalized Laguerre polynomials."""
    x = abs(xi) ** 2
    m = np.arange(dim)[:, None]
    n = np.arange(dim)[None, :]
    lo = np.minimum(m, n)
    k = np.abs(m - n)
    lag = eval_genlaguerre(lo, k, x)
    log_ratio = 0.5 * (gammaln(lo + 1) - gammaln(lo + k + 1))
    phase_base = np.where(m >= n, xi, -np.conj(xi))
    with np.errstate(divide="ignore", invalid="ignore"):
        powers = np.where(k == 0, 1.0 + 0j, phase_base ** k)
    return np.exp(log_ratio - 0.5 * x) * powers * lag


def fock_qcf(rho: FockDensityMatrix, xi) -> np.ndarray | complex:
    """``tr[rho D(xi)]`` in the truncated basis."""
    pts = np.atleast_1d(np.asarray(xi, dtype=complex))
    out = np.array([np.sum(rho.entries.T * displacement_elements(z, rho.dim)) for z in pts.ravel()])
    out = out.reshape(pts.shape)
    return out if np.ndim(xi) else complex(out[0])


@dataclass(frozen=True)
class FourierGrid:
    """Trapezoid grid for the characteristic-function plane."""

    half_width: float
    spacing: float = 0.05

    def axis(self) -> np.ndarray:
        n = int(round(2 * self.half_width / self.spacing))
        return np.linspace(-self.half_width, self.half_width, n + 1)


def wigner_from_qcf(qcf: Callable[[np.ndarray], np.ndarray], beta_r: np.ndarray,
                    beta_i: np.ndarray, grid: FourierGrid) -> np.ndarray:
    """``W(b) = pi^-2 int d^2 xi chi(xi) exp(b xi* - b* xi)`` by a separable
    trapezoid sum. Returns values indexed ``[i_r, i_i]``."""
    ax = grid.axis()
    h = ax[1] - ax[0]
    x, y = np.meshgrid(ax, ax, indexing="ij")
    chi = np.asarray(qcf(x + 1j * y), dtype=complex)
    # b xi* - b* xi = 2i (b_i x - b_r y)
    ex = np.exp(2j * np.outer(np.asarray(beta_i), ax))   # [i_i, x]
    ey = np.exp(-2j * np.outer(np.asarray(beta_r), ax))  # [i_r, y]
    w = ey @ chi.T @ ex.T * (h * h / math.pi ** 2)
    return w.real
