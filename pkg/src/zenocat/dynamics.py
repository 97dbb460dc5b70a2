"""Closed-form evolution of the cat under the shuttered (or measured)
reservoir: recursive characteristic function, Wigner function, interference
peak and photon-number distribution."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coefficients import RateSet, markov_rates, shutter_integrals
from .reservoir import ReservoirSpec
from .states import CatState, NumberDistribution, cat_qcf

# Amplitude of the interference term relative to the lobe prefactor
# 2N/(pi(2a+1)). The Fourier transform of the evolved characteristic function
# gives 4N/(pi(2a+1)), i.e. a factor 2; see oracle.wigner_from_qcf.
INTERFERENCE_FACTOR = 2.0


@dataclass(frozen=True)
class ShutterSchedule:
    tau: float
    m: int = 0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError("m must be a nonnegative integer")

    @property
    def time(self) -> float:
        return self.m * self.tau


@dataclass(frozen=True)
class EvolutionKernels:
    """Constant coarse-grained rates driving the closed-form solutions."""

    gamma_plus: float
    gamma_minus: float
    rates: RateSet | None = None

    @classmethod
    def from_rates(cls, rates: RateSet) -> "EvolutionKernels":
        return cls(rates.gamma_plus, rates.gamma_minus, rates)

    @classmethod
    def markov(cls, spec: ReservoirSpec) -> "EvolutionKernels":
        """Unshuttered reference: ``Gamma[N(w0)+1]`` and ``Gamma N(w0)``."""
        plus, minus = markov_rates(spec)
        return cls(plus, minus)

    @property
    def b_tau(self) -> float:
        return self.gamma_plus - self.gamma_minus

    def a(self, t):
        """Thermal photons added by time t, ``(g_-/b)(1 - e^{-b t})``."""
        t = np.asarray(t, dtype=float)
        b = self.b_tau
        if b == 0.0:
            out = self.gamma_minus * t
        else:
            out = self.gamma_minus * -np.expm1(-b * t) / b
        return out if out.ndim else float(out)

    def stationary_a(self) -> float:
        return self.gamma_minus / self.b_tau if self.b_tau > 0 else math.inf

    def decay(self, t):
        """Coherent amplitude factor squared, ``e^{-b t}``."""
        out = np.exp(-self.b_tau * np.asarray(t, dtype=float))
        return out if out.ndim else float(out)


# --- characteristic function -------------------------------------------------

def noise_factor(m: int, big_gamma_tau: float, delta_gamma_tau: float) -> float:
    """``f_m = Delta_Gamma (1 - e^{-m Gamma}) / (1 - e^{-Gamma})``."""
    if big_gamma_tau == 0.0:
        return m * delta_gamma_tau
    return delta_gamma_tau * math.expm1(-m * big_gamma_tau) / math.expm1(-big_gamma_tau)


def recursive_qcf(xi, schedule: ShutterSchedule, cat: CatState, spec: ReservoirSpec | None = None,
                  integrals: tuple[float, float] | None = None):
    """Characteristic function after ``schedule.m`` shuttered intervals.

    ``integrals`` is ``(Gamma(tau), Delta_Gamma(tau))``; when omitted they
    are computed from ``spec``.
    """
    if integrals is None:
        if spec is None:
            raise ValueError("need either spec or precomputed shutter integrals")
        integrals = shutter_integrals(schedule.tau, spec)
    big, dg = integrals
    m = schedule.m
    xi = np.asarray(xi, dtype=complex)
    f = noise_factor(m, big, dg)
    val = np.exp(-f * np.abs(xi) ** 2) * cat_qcf(math.exp(-0.5 * m * big) * xi, cat)
    return val if val.ndim else complex(val)


# --- Wigner function ----------------------------------------------------------

@dataclass(frozen=True)
class WignerField:
    beta_r: np.ndarray
    beta_i: np.ndarray
    values: np.ndarray  # indexed [i_r, i_i]

    @property
    def spacing(self) -> float:
        return float(self.beta_r[1] - self.beta_r[0])

    def riemann_sum(self) -> float:
        return float(self.values.sum() * self.spacing ** 2)


def default_grid(cat: CatState, points: int = 257, half_width: float | None = None) -> np.ndarray:
    if half_width is None:
        half_width = 4.0 + abs(cat.alpha)
    return np.linspace(-half_width, half_width, points)


def wigner_components(beta, t: float, kernels: EvolutionKernels, cat: CatState,
                      interference_factor: float = INTERFERENCE_FACTOR):
    """``(W^(alpha), W^(-alpha), W_I)`` at phase-space points ``beta``."""
    beta = np.asarray(beta, dtype=complex)
    br, bi = beta.real, beta.imag
    width = 2.0 * kernels.a(t) + 1.0
    shrink = math.exp(-0.5 * kernels.b_tau * t)
    alpha = cat.alpha
    pref = 2.0 * cat.norm / (math.pi * width)
    side = np.exp(-2.0 * bi ** 2 / width)
    w_plus = pref * side * np.exp(-2.0 * (br - shrink * alpha) ** 2 / width)
    w_minus = pref * side * np.exp(-2.0 * (br + shrink * alpha) ** 2 / width)
    coherence = -2.0 * (1.0 - shrink ** 2 / width) * alpha ** 2
    w_int = (interference_factor * pref * np.exp(-2.0 * np.abs(beta) ** 2 / width + coherence)
             * np.cos(4.0 * shrink * alpha * bi / width))
    return w_plus, w_minus, w_int


def analytic_wigner(beta, t: float, kernels: EvolutionKernels, cat: CatState,
                    interference_factor: float = INTERFERENCE_FACTOR):
    out = sum(wigner_components(beta, t, kernels, cat, interference_factor))
    return out if np.ndim(out) else float(out)


def wigner_field(t: float, kernels: EvolutionKernels, cat: CatState, points: int = 257,
                 half_width: float | None = None,
                 interference_factor: float = INTERFERENCE_FACTOR) -> WignerField:
    axis = default_grid(cat, points, half_width)
    br, bi = np.meshgrid(axis, axis, indexing="ij")
    values = analytic_wigner(br + 1j * bi, t, kernels, cat, interference_factor)
    return WignerField(axis, axis.copy(), values)


def log_wigner_peak(t, kernels: EvolutionKernels, cat: CatState, mode: str = "exact",
                    interference_factor: float = INTERFERENCE_FACTOR):
    """Natural log of the interference peak ``W_I(0, t)``.

    Logs keep the high-temperature curves representable long after the peak
    itself underflows.
    """
    t = np.asarray(t, dtype=float)
    alpha2 = cat.alpha ** 2
    if mode == "exact":
        width = 2.0 * kernels.a(t) + 1.0
        out = (math.log(interference_factor * 2.0 * cat.norm / math.pi) - np.log(width)
               - 2.0 * (1.0 - kernels.decay(t) / width) * alpha2)
    elif mode == "approximate":
        out = math.log(4.0 * cat.norm / math.pi) - 2.0 * kernels.gamma_minus * (1.0 + 2.0 * alpha2) * t
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return out if np.ndim(out) else float(out)


def wigner_peak(t, kernels: EvolutionKernels, cat: CatState, mode: str = "exact",
                interference_factor: float = INTERFERENCE_FACTOR):
    out = np.exp(log_wigner_peak(t, kernels, cat, mode, interference_factor))
    return out if np.ndim(out) else float(out)


# --- number distribution --------------------------------------------------

def pn_closed_form(n: int, t: float, kernels: EvolutionKernels, cat: CatState) -> float:
    """Photon-number probability ``P_n(t)`` of the evolving cat.

    Sum over the displaced-thermal expansion; every summand is nonnegative so
    the result carries no cancellation. Factorial ratios are taken in log
    space.
    """
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer")
    n = int(n)
    a = kernels.a(t)
    s2 = kernels.decay(t)
    alpha2 = cat.alpha ** 2
    x = (1.0 - s2 / (a + 1.0)) * alpha2
    log_pref = math.log(2.0 * cat.norm) - alpha2 - math.log1p(a)
    log_q = math.log(a / (a + 1.0)) if a > 0 else -math.inf
    log_d = (math.log(alpha2 * s2) - 2.0 * math.log1p(a)) if alpha2 > 0 else -math.inf
    lg_n = math.lgamma(n + 1)
    terms = []
    for j in range(n + 1):
        k = n - j
        lq = j * log_q if j else 0.0
        ld = k * log_d if k else 0.0
        if lq == -math.inf or ld == -math.inf:
            continue
        log_comb = lg_n - math.lgamma(j + 1) - 2.0 * math.lgamma(k + 1)
        # e^{x} + (-1)^k e^{-x} = e^{x} (1 +- e^{-2x}), nonnegative
        bracket = math.log1p(math.exp(-2.0 * x)) if k % 2 == 0 else (
            math.log(-math.expm1(-2.0 * x)) if x > 0 else -math.inf)
        if bracket == -math.inf:
            continue
        terms.append(math.exp(log_pref + log_comb + lq + ld + x + bracket))
    return math.fsum(sorted(terms))


def pn_distribution(t: float, kernels: EvolutionKernels, cat: CatState, n_max: int) -> NumberDistribution:
    return NumberDistribution(np.array([pn_closed_form(n, t, kernels, cat) for n in range(n_max + 1)]))


def pn_evolution(times: Sequence[float], kernels: EvolutionKernels, cat: CatState,
                 n_max: int) -> list[NumberDistribution]:
    times = list(times)
    if any(t < 0 for t in times) or any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("times must be nonnegative and ascending")
    out = [pn_distribution(t, kernels, cat, n_max) for t in times]
    for t, dist in zip(times, out):
        if abs(dist.total() - 1.0) > 1e-8:
            warnings.warn(f"P_n at t={t} sums to {dist.total():.12g}; raise n_max", RuntimeWarning)
    return out


def mean_photon_number(t, kernels: EvolutionKernels, cat: CatState):
    """``<n>(t) = a_t + <n>_0 e^{-b t}``."""
    return kernels.a(t) + cat.mean_photon_number * kernels.decay(t)


def parity_contrast(t, kernels: EvolutionKernels, cat: CatState):
    """``sum_even P_n - sum_odd P_n``, i.e. ``(pi/2) W(0, t)``."""
    if np.ndim(t):
        flat = [parity_contrast(float(s), kernels, cat) for s in np.ravel(t)]
        return np.reshape(flat, np.shape(t))
    return 0.5 * math.pi * analytic_wigner(0.0, t, kernels, cat)
