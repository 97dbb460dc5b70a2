"""Zeno and anti-Zeno control of cat-state decoherence in a damped oscillator."""

from .reservoir import (BoseEinstein, ConstantN, HighTemperature, ReservoirSpec, SpectralKind,
                        kappa_beta, ohmic_density, thermal_occupation)
from .coefficients import (CoefficientCurve, QuadratureError, RateSet, analytic_gamma_minus,
                           coefficient_curve, delta_of_t, gamma_of_t, markov_rates,
                           measured_rates, rates_by_time_average, shutter_integrals,
                           thermal_gamma_minus)
from .states import (CatState, FockDensityMatrix, NumberDistribution, TruncationError,
                     cat_density_matrix, cat_number_distribution, cat_qcf)
from .dynamics import (EvolutionKernels, ShutterSchedule, WignerField, analytic_wigner,
                       pn_closed_form, pn_evolution, recursive_qcf, wigner_field, wigner_peak)

__version__ = "0.1.0"
