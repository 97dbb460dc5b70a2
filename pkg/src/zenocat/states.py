"""Even coherent (cat) state: characteristic function, photon statistics and
Fock-basis density matrix."""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

TRUNCATION_EPS = 1e-10


class TruncationError(ValueError):
    """The Fock cutoff is too small for the requested accuracy."""


@dataclass(frozen=True)
class CatState:
    """``|psi> ~ |alpha> + |-alpha>`` with real ``alpha``."""

    alpha: float

    def __post_init__(self):
        if isinstance(self.alpha, complex) or not isinstance(self.alpha, numbers.Real):
            raise TypeError("alpha must be real")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")

    @property
    def norm(self) -> float:
        """Normalisation ``N`` with ``1/N = 2 [1 + exp(-2 alpha^2)]``."""
        return 1.0 / (2.0 * (1.0 + math.exp(-2.0 * self.alpha ** 2)))

    @property
    def mean_photon_number(self) -> float:
        a2 = self.alpha ** 2
        return a2 * math.tanh(a2)

    def default_n_max(self) -> int:
        a = abs(self.alpha)
        return max(30, math.ceil(a * a + 8.0 * a + 10.0))


@dataclass(frozen=True)
class NumberDistribution:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1:
            raise ValueError("probs must be one-dimensional")
        object.__setattr__(self, "probs", p)

    @property
    def n_max(self) -> int:
        return self.probs.size - 1

    def total(self) -> float:
        return math.fsum(self.probs)

    def mean(self) -> float:
        return math.fsum(np.arange(self.probs.size) * self.probs)

    def parity_contrast(self) -> float:
        """``sum_even P_n - sum_odd P_n``."""
        return math.fsum(self.probs[0::2]) - math.fsum(self.probs[1::2])


@dataclass(frozen=True)
class FockDensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def diagonal(self) -> NumberDistribution:
        return NumberDistribution(self.entries.diagonal().real.copy())

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


def cat_qcf(xi, cat: CatState):
    """Symmetric-ordered characteristic function ``tr[rho D(xi)]`` of the cat."""
    xi = np.asarray(xi, dtype=complex)
    a = cat.alpha
    # xi*alpha - conj(xi)*alpha = 2i alpha Im(xi); the sum is 2 alpha Re(xi)
    gauss = -0.5 * np.abs(xi) ** 2
    direct = 2.0 * np.exp(gauss) * np.cos(2.0 * a * xi.imag)
    cross = (np.exp(gauss - 2.0 * a * a + 2.0 * a * xi.real)
             + np.exp(gauss - 2.0 * a * a - 2.0 * a * xi.real))
    val = (cat.norm * (direct + cross)).astype(complex)
    return val if val.ndim else complex(val)


def _coherent_log_amplitudes(alpha: float, n_max: int) -> np.ndarray:
    """``log |<n|alpha>|`` for n = 0..n_max."""
    n = np.arange(n_max + 1)
    a = abs(alpha)
    if a == 0:
        return np.where(n == 0, 0.0, -np.inf)
    return -0.5 * a * a + n * math.log(a) - 0.5 * gammaln(n + 1)


def _check_truncation(cat: CatState, n_max: int) -> None:
    # Poisson tail of |alpha|^2 beyond n_max, bounded by a geometric series
    a2 = cat.alpha ** 2
    if a2 == 0:
        return
    n1 = n_max + 1
    if n1 <= a2:
        raise TruncationError(f"n_max={n_max} is below the mean photon number")
    log_term = -a2 + n1 * math.log(a2) - math.lgamma(n1 + 1)
    tail = math.exp(log_term) / (1.0 - a2 / (n1 + 1))
    # even-cat weight is at most 4 N <= 2 times the coherent weight
    if 2.0 * tail > TRUNCATION_EPS:
        raise TruncationError(
            f"n_max={n_max} leaves truncated weight ~{2 * tail:.1e} > {TRUNCATION_EPS:g} "
            f"for alpha={cat.alpha}")


def cat_number_distribution(cat: CatState, n_max: int | None = None) -> NumberDistribution:
    """``P_n = 4 N e^{-alpha^2} alpha^{2n} / n!`` for even n, zero for odd n."""
    if n_max is None:
        n_max = cat.default_n_max()
    _check_truncation(cat, n_max)
    logc = _coherent_log_amplitudes(cat.alpha, n_max)
    probs = 4.0 * cat.norm * np.exp(2.0 * logc)
    probs[1::2] = 0.0
    return NumberDistribution(probs)


def cat_density_matrix(cat: CatState, n_max: int | None = None) -> FockDensityMatrix:
    """``rho = N (|alpha> + |-alpha>)(<alpha| + <-alpha|)`` in the Fock basis."""
    if n_max is None:
        n_max = cat.default_n_max()
    _check_truncation(cat, n_max)
    n = np.arange(n_max + 1)
    c = np.exp(_coherent_log_amplitudes(cat.alpha, n_max)) * np.sign(cat.alpha) ** n
    psi = c * (1.0 + (-1.0) ** n)
    return FockDensityMatrix(cat.norm * np.outer(psi, psi).astype(complex))
