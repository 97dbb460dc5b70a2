"""Reservoir spectrum, thermal occupation and thermal spectral density.

Units: hbar = 1 and frequencies are measured in units of the system
frequency ``omega_0`` (default 1), times in units of ``1/omega_0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np


class SpectralKind(enum.Enum):
    OHMIC_LORENTZIAN = "ohmic-lorentzian"


@dataclass(frozen=True)
class BoseEinstein:
    """Planck occupation ``1/(exp(omega/(theta*omega_0)) - 1)``."""

    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta!r}")


@dataclass(frozen=True)
class ConstantN:
    """Frequency independent occupation ``N(omega) = n0``."""

    n0: float

    def __post_init__(self):
        if not self.n0 >= 0:
            raise ValueError(f"n0 must be nonnegative, got {self.n0!r}")


@dataclass(frozen=True)
class HighTemperature:
    """Classical (equipartition) occupation ``N(omega) = theta*omega_0/omega``.

    This is the leading high-temperature term of the Planck law. It is the
    occupation under which the closed-form shuttered rate
    :func:`zenocat.coefficients.analytic_gamma_minus` is exact.
    """

    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError(f"theta must be positive, got {self.theta!r}")


ThermalModel = Union[BoseEinstein, ConstantN, HighTemperature]


@dataclass(frozen=True)
class ReservoirSpec:
    omega_c: float
    g: float
    thermal: ThermalModel = field(default_factory=lambda: HighTemperature(100.0))
    omega_0: float = 1.0
    spectral_kind: SpectralKind = SpectralKind.OHMIC_LORENTZIAN

    def __post_init__(self):
        for name in ("omega_c", "omega_0", "g"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if not isinstance(self.thermal, (BoseEinstein, ConstantN, HighTemperature)):
            raise TypeError(f"unknown thermal model {self.thermal!r}")

    @classmethod
    def from_ratio(cls, r: float, g: float, thermal: ThermalModel | None = None,
                   omega_0: float = 1.0) -> "ReservoirSpec":
        """Build a spec from ``r = omega_c / omega_0``."""
        if thermal is None:
            thermal = HighTemperature(100.0)
        return cls(omega_c=r * omega_0, g=g, thermal=thermal, omega_0=omega_0)

    @property
    def r(self) -> float:
        return self.omega_c / self.omega_0

    @property
    def big_gamma(self) -> float:
        """Markovian damping rate ``2 g^2 r^2 omega_0 / (r^2 + 1)``."""
        r2 = self.r ** 2
        return 2.0 * self.g ** 2 * r2 / (r2 + 1.0) * self.omega_0

    @property
    def n_system(self) -> float:
        """Thermal occupation at the system frequency, ``N(omega_0)``."""
        return float(thermal_occupation(self.omega_0, self))

    @property
    def correlation_time(self) -> float:
        return 1.0 / self.omega_c


def _as_array(omega):
    return np.asarray(omega, dtype=float)


def ohmic_density(omega, spec: ReservoirSpec):
    """Ohmic spectral density with Lorentzian cutoff,
    ``J(w) = (2 w / pi) wc^2 / (wc^2 + w^2)`` for ``w >= 0``."""
    w = _as_array(omega)
    if np.any(w < 0):
        raise ValueError("ohmic_density is defined for omega >= 0 only")
    wc2 = spec.omega_c ** 2
    out = 2.0 * w / np.pi * wc2 / (wc2 + w * w)
    return out if out.ndim else float(out)


def thermal_occupation(omega, spec: ReservoirSpec):
    w = _as_array(omega)
    model = spec.thermal
    if isinstance(model, ConstantN):
        out = np.full_like(w, model.n0)
    else:
        if np.any(w <= 0):
            raise ZeroDivisionError("thermal occupation is singular at omega <= 0")
        kt = model.theta * spec.omega_0
        if isinstance(model, BoseEinstein):
            with np.errstate(over="ignore"):
                out = 1.0 / np.expm1(w / kt)
        else:
            out = kt / w
    return out if out.ndim else float(out)


def kappa_beta(omega, spec: ReservoirSpec):
    """Thermal spectral density on the whole real line.

    Emission side (``w > 0``) carries ``J(w)[N(w) + 1]``, absorption side
    (``w < 0``) carries ``J(-w) N(-w)``; ``kappa_beta(0) = 0``.
    """
    f = kappa_function(spec)
    w = _as_array(omega)
    out = np.vectorize(f, otypes=[float])(w)
    return out if out.ndim else float(out)


# Scalar closures used inside quadrature loops. They take the J*N product in
# closed form so the omega -> 0 limits stay finite.

def _jn_function(spec: ReservoirSpec) -> Callable[[float], float]:
    """``w -> J(w) N(w)`` for ``w >= 0``, with its finite limit at 0."""
    wc2 = spec.omega_c ** 2
    two_pi = 2.0 / math.pi
    model = spec.thermal
    if isinstance(model, ConstantN):
        n0 = model.n0
        return lambda w: two_pi * w * wc2 / (wc2 + w * w) * n0
    kt = model.theta * spec.omega_0
    if isinstance(model, HighTemperature):
        return lambda w: two_pi * wc2 / (wc2 + w * w) * kt

    def jn(w):
        x = w / kt
        ratio = kt if x == 0.0 else w / math.expm1(x) if x < 700.0 else 0.0
        return two_pi * wc2 / (wc2 + w * w) * ratio
    return jn


def density_function(spec: ReservoirSpec) -> Callable[[float], float]:
    """Scalar ``J(w)``; the formula is odd in ``w`` when continued to ``w < 0``."""
    wc2 = spec.omega_c ** 2
    two_pi = 2.0 / math.pi
    return lambda w: two_pi * w * wc2 / (wc2 + w * w)


def kappa_function(spec: ReservoirSpec, vacuum: bool = True) -> Callable[[float], float]:
    """Scalar ``kappa_beta``. ``vacuum=False`` drops the spontaneous ``J(w)``
    term of the emission side, leaving the purely thermal part."""
    jn = _jn_function(spec)
    j = density_function(spec)

    def kappa(w):
        if w > 0.0:
            return jn(w) + j(w) if vacuum else jn(w)
        if w < 0.0:
            return jn(-w)
        return 0.0
    return kappa
