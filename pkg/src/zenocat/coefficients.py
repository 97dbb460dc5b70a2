"""Second-order non-Markovian coefficients and the shuttered decay rates.

The diffusion and damping coefficients of the time-local master equation are

    Delta(t) = g^2 int_0^t ds int_0^inf dw J(w) [2N(w)+1] cos(w s) cos(w0 s)
    gamma(t) = g^2 int_0^t ds int_0^inf dw J(w) sin(w s) sin(w0 s)

Doing the time integral first turns both into single frequency integrals
against ``t sinc((w -+ w0) t)``; that is the production path. Averaging
``Delta +- gamma`` over an interruption interval ``tau`` gives the decay
rates ``gamma_{+-1}(tau) = (g^2/2) int dw kappa(w) tau sinc^2((w -+ w0) tau/2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import integrate

from ._sincquad import SINC, SINC2, QuadratureError, sinc_integral
from .reservoir import (ConstantN, HighTemperature, ReservoirSpec, _jn_function,
                        density_function, kappa_function)

__all__ = [
    "CoefficientCurve", "RateSet", "QuadratureError",
    "delta_of_t", "gamma_of_t", "coefficient_curve", "measured_rates",
    "rates_by_time_average", "analytic_gamma_minus", "shutter_integrals",
    "running_big_gamma", "markov_rates", "thermal_gamma_minus", "delta_double_integral",
    "gamma_double_integral",
]

EPSREL = 1e-10


@dataclass(frozen=True)
class CoefficientCurve:
    times: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray
    spec: ReservoirSpec


@dataclass(frozen=True)
class RateSet:
    """Shuttered/measured kinetics at interruption interval ``tau``.

    ``big_gamma_tau`` and ``delta_gamma_tau`` are only filled when the shutter
    integrals were requested (they need time quadratures).
    """

    tau: float
    gamma_plus: float
    gamma_minus: float
    markov_plus: float
    markov_minus: float
    big_gamma_tau: Optional[float] = None
    delta_gamma_tau: Optional[float] = None

    @property
    def b_tau(self) -> float:
        return self.gamma_plus - self.gamma_minus


def _scales(spec: ReservoirSpec):
    scales = [spec.omega_c]
    if hasattr(spec.thermal, "theta"):
        scales.append(spec.thermal.theta * spec.omega_0)
    return scales


def _delta_integrand(spec: ReservoirSpec):
    jn = _jn_function(spec)
    j = density_function(spec)
    # even continuation of J(w)[N(w) + 1/2]
    return lambda w: jn(abs(w)) + 0.5 * j(abs(w))


def delta_of_t(t: float, spec: ReservoirSpec) -> float:
    """Diffusion coefficient ``Delta(t)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 0.0
    f = _delta_integrand(spec)
    return spec.g ** 2 * sinc_integral(f, spec.omega_0, t, SINC, scales=_scales(spec),
                                       epsrel=EPSREL)


def gamma_of_t(t: float, spec: ReservoirSpec) -> float:
    """Damping coefficient ``gamma(t)``; independent of temperature."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 0.0
    # J(w) continued by its own formula is odd, which is what the
    # sinc(w - w0) - sinc(w + w0) combination folds into.
    j = density_function(spec)
    # gamma(t) ~ t^2 while each half of the folded integral is O(t log t);
    # tolerances are taken relative to the stationary value Gamma/(2 g^2)
    floor = EPSREL * 1e-2 * spec.big_gamma / (2.0 * spec.g ** 2)
    return 0.5 * spec.g ** 2 * sinc_integral(j, spec.omega_0, t, SINC, kinks=(),
                                             scales=[spec.omega_c], epsrel=EPSREL,
                                             epsabs=floor)


def coefficient_curve(times: Sequence[float], spec: ReservoirSpec) -> CoefficientCurve:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0 or times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing and start at 0")
    delta = np.array([delta_of_t(t, spec) for t in times])
    gamma = np.array([gamma_of_t(t, spec) for t in times])
    return CoefficientCurve(times, delta, gamma, spec)


def running_big_gamma(t: float, spec: ReservoirSpec) -> float:
    """``2 int_0^t gamma(s) ds`` from its single-frequency form
    ``g^2 t int J(w) (t/2) sinc^2((w - w0) t/2) dw``."""
    if t <= 0:
        return 0.0
    j = density_function(spec)
    # same cancellation as gamma_of_t at short times
    floor = EPSREL * 1e-2 * spec.big_gamma / (2.0 * spec.g ** 2)
    return spec.g ** 2 * t * sinc_integral(j, spec.omega_0, t, SINC2, kinks=(),
                                           scales=[spec.omega_c], epsrel=EPSREL,
                                           epsabs=floor)


def markov_rates(spec: ReservoirSpec) -> tuple[float, float]:
    """Stationary (Markovian) rates ``(Gamma[N+1], Gamma N)`` at ``w0``."""
    n = spec.n_system
    big = spec.big_gamma
    return big * (n + 1.0), big * n


def _rate_integral(tau: float, spec: ReservoirSpec, sign: int, vacuum: bool = True) -> float:
    kappa = kappa_function(spec, vacuum=vacuum)
    return spec.g ** 2 * sinc_integral(kappa, sign * spec.omega_0, tau, SINC2,
                                       scales=_scales(spec), epsrel=EPSREL)


def measured_rates(tau: float, spec: ReservoirSpec, shutter: bool = False) -> RateSet:
    """Decay rates ``gamma_{+-1}(tau)`` from the thermal spectral density.

    With ``shutter=True`` the shutter integrals of :func:`shutter_integrals`
    are computed too.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    plus = _rate_integral(tau, spec, +1)
    minus = _rate_integral(tau, spec, -1)
    mp, mm = markov_rates(spec)
    big = dg = None
    if shutter:
        big, dg = shutter_integrals(tau, spec)
    return RateSet(tau, plus, minus, mp, mm, big, dg)


def thermal_gamma_minus(tau: float, spec: ReservoirSpec) -> float:
    """Thermal part of ``gamma_{-1}(tau)``: the same integral with the
    spontaneous ``J(w)`` term removed from ``kappa``."""
    return _rate_integral(tau, spec, -1, vacuum=False)


def _time_average(func, tau: float, omega_0: float) -> float:
    # the coefficients go like t log t near 0 and ring at w0 afterwards
    n_osc = int(min(200, omega_0 * tau / (2.0 * math.pi)))
    pts = list(np.linspace(0.0, tau, n_osc + 2)[1:-1]) if n_osc > 0 else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info, *msg = integrate.quad(func, 0.0, tau, points=pts, epsabs=0.0,
                                             epsrel=EPSREL, limit=1000, full_output=1)
    if msg and err > 1e-6 * abs(val):
        raise QuadratureError(f"time average over tau={tau!r} failed: {msg[0]}")
    return val / tau


def rates_by_time_average(tau: float, spec: ReservoirSpec) -> RateSet:
    """``gamma_{+-1}(tau) = (1/tau) int_0^tau [Delta(t) +- gamma(t)] dt``."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    mean_delta = _time_average(lambda t: delta_of_t(t, spec), tau, spec.omega_0)
    mean_gamma = _time_average(lambda t: gamma_of_t(t, spec), tau, spec.omega_0)
    mp, mm = markov_rates(spec)
    return RateSet(tau, mean_delta + mean_gamma, mean_delta - mean_gamma, mp, mm)


def analytic_gamma_minus(tau: float, spec: ReservoirSpec) -> float:
    """Closed-form ``gamma_{-1}(tau)`` for the Ohmic-Lorentzian reservoir.

    Uses the thermal prefactor ``Gamma N(w0)`` with ``N(w0) = n0`` for
    :class:`ConstantN` and ``theta`` for :class:`HighTemperature`. The
    expression equals the quadrature of the thermal (non-spontaneous) part of
    ``kappa`` exactly under :class:`HighTemperature`.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    model = spec.thermal
    if isinstance(model, ConstantN):
        n = model.n0
    elif isinstance(model, HighTemperature):
        n = model.theta
    else:
        raise ValueError("analytic_gamma_minus assumes a flat thermal prefactor; "
                         f"not available for {type(model).__name__}")
    r = spec.r
    x = spec.omega_c * tau
    y = spec.omega_0 * tau
    r2 = r * r
    ex = math.exp(-x)
    # 1 - e^-x cos y loses digits for small x, y
    one_minus = -math.expm1(-x) + ex * 2.0 * math.sin(0.5 * y) ** 2
    braces = x + (1.0 - r2) / (1.0 + r2) * one_minus - 2.0 * r / (1.0 + r2) * ex * math.sin(y)
    return spec.big_gamma * n * braces / x


def shutter_integrals(tau: float, spec: ReservoirSpec) -> tuple[float, float]:
    """``Gamma(tau) = 2 int_0^tau gamma`` and
    ``Delta_Gamma(tau) = exp(-Gamma(tau)) int_0^tau exp(Gamma(t)) Delta(t) dt``."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    big = 2.0 * tau * _time_average(lambda t: gamma_of_t(t, spec), tau, spec.omega_0)

    def weighted(t):
        return math.exp(running_big_gamma(t, spec) - big) * delta_of_t(t, spec)

    dg = tau * _time_average(weighted, tau, spec.omega_0)
    return big, dg


# --- slow reference: the time-ordered double integrals, for tests only ---

def _fourier_transform(func, s: float, weight: str, split: float) -> float:
    """``int_0^inf func(w) trig(w s) dw``: QAWO below ``split``, QAWF above."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        head = integrate.quad(func, 0.0, split, weight=weight, wvar=s,
                              epsabs=0.0, epsrel=1e-12, limit=2000)[0]
        tail = integrate.quad(func, split, math.inf, weight=weight, wvar=s,
                              epsabs=1e-14 * max(abs(head), 1.0), limlst=400, limit=2000)[0]
    return head + tail


def _split_point(spec: ReservoirSpec) -> float:
    return 50.0 * max(_scales(spec) + [spec.omega_0])


def delta_double_integral(t: float, spec: ReservoirSpec, epsrel: float = 1e-9) -> float:
    """``Delta(t)`` by nested quadrature: Fourier-cosine transform of
    ``J(2N+1)`` inside, time integral outside."""
    jn = _jn_function(spec)
    j = density_function(spec)
    noise = lambda w: 2.0 * jn(w) + j(w)

    split = _split_point(spec)

    def inner(s):
        return _fourier_transform(noise, s, "cos", split) * math.cos(spec.omega_0 * s)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val = integrate.quad(inner, 0.0, t, epsabs=0.0, epsrel=epsrel, limit=400)[0]
    return spec.g ** 2 * val


def gamma_double_integral(t: float, spec: ReservoirSpec, epsrel: float = 1e-9) -> float:
    j = density_function(spec)

    split = _split_point(spec)

    def inner(s):
        if s == 0.0:
            return 0.0
        return _fourier_transform(j, s, "sin", split) * math.sin(spec.omega_0 * s)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val = integrate.quad(inner, 0.0, t, epsabs=0.0, epsrel=epsrel, limit=400)[0]
    return spec.g ** 2 * val
