import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zenocat import dynamics, oracle
from zenocat.coefficients import measured_rates
from zenocat.dynamics import (EvolutionKernels, ShutterSchedule, analytic_wigner, log_wigner_peak,
                              mean_photon_number, noise_factor, pn_closed_form, pn_distribution,
                              pn_evolution, recursive_qcf, wigner_components, wigner_field,
                              wigner_peak)
from zenocat.reservoir import BoseEinstein, ReservoirSpec
from zenocat.states import CatState, cat_number_distribution, cat_qcf

CAT = CatState(2.0)
rates_st = st.tuples(st.floats(1e-3, 5.0), st.floats(0.0, 1.0)).map(
    lambda p: EvolutionKernels(p[0] * (1 + p[1]) + 1e-3, p[0] * p[1]))


def test_schedule_validation():
    assert ShutterSchedule(0.5, 4).time == 2.0
    with pytest.raises(ValueError):
        ShutterSchedule(0.0, 1)
    with pytest.raises(ValueError):
        ShutterSchedule(1.0, -1)
    with pytest.raises(ValueError):
        ShutterSchedule(1.0, 1.5)


def test_kernels_thermal_growth():
    k = EvolutionKernels(1.2, 0.7)
    t = np.linspace(0, 40, 200)
    a = k.a(t)
    assert a[0] == 0.0 and np.all(np.diff(a) > 0)
    assert a[-1] == pytest.approx(k.stationary_a(), rel=1e-8)
    assert k.b_tau == pytest.approx(0.5)


def test_kernels_degenerate_b():
    k = EvolutionKernels(0.3, 0.3)
    assert k.a(2.0) == pytest.approx(0.6)
    assert k.stationary_a() == math.inf


def test_noise_factor_limit():
    assert noise_factor(7, 0.0, 0.2) == pytest.approx(1.4)
    assert noise_factor(7, 1e-12, 0.2) == pytest.approx(1.4, rel=1e-9)
    assert noise_factor(0, 0.3, 0.2) == 0.0


def test_recursive_qcf_trivial_cases():
    sched0 = ShutterSchedule(0.1, 0)
    xi = np.array([0.4 + 0.3j, -1.2 + 0.1j])
    np.testing.assert_allclose(recursive_qcf(xi, sched0, CAT, integrals=(0.01, 0.05)), cat_qcf(xi, CAT))
    assert recursive_qcf(0.0, ShutterSchedule(0.1, 9), CAT, integrals=(0.01, 0.05)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        recursive_qcf(0.1, sched0, CAT)


def test_recursive_qcf_long_time_gaussian():
    big, dg = 0.02, 0.03
    f_inf = dg / -math.expm1(-big)
    xi = 0.7 - 0.2j
    val = recursive_qcf(xi, ShutterSchedule(0.1, 5000), CAT, integrals=(big, dg))
    assert val == pytest.approx(math.exp(-f_inf * abs(xi) ** 2), rel=1e-12)


def test_recursive_qcf_with_spec():
    spec = ReservoirSpec.from_ratio(10.0, 0.05)
    sched = ShutterSchedule(0.01, 3)
    a = recursive_qcf(0.5j, sched, CAT, spec=spec)
    rs = measured_rates(0.01, spec, shutter=True)
    b = recursive_qcf(0.5j, sched, CAT, integrals=(rs.big_gamma_tau, rs.delta_gamma_tau))
    assert a == b


def test_wigner_t0_against_fourier_oracle():
    k = EvolutionKernels(1.0, 0.5)
    beta = np.array([0.0, 2.0, 0.3, -1.0])
    w = oracle.wigner_from_qcf(lambda z: cat_qcf(z, CAT), beta, beta, oracle.FourierGrid(13.0))
    for i, br in enumerate(beta):
        for j, bi in enumerate(beta):
            assert analytic_wigner(br + 1j * bi, 0.0, k, CAT) == pytest.approx(w[i, j], abs=1e-10)


def test_interference_amplitude_at_origin():
    k = EvolutionKernels(1.0, 0.5)
    assert analytic_wigner(0.0, 0.0, k, CAT) == pytest.approx(2 / math.pi, rel=1e-6)
    # the printed amplitude (factor 1) misses the oracle value by a factor of 2
    w_int = wigner_components(0.0, 0.0, k, CAT, interference_factor=1.0)[2]
    assert w_int == pytest.approx(2 * CAT.norm / math.pi, rel=1e-14)


def test_wigner_long_time_thermal():
    k = EvolutionKernels(1.0, 0.4)
    t = 80.0
    width = 2 * k.stationary_a() + 1
    for beta in (0.3 + 0.2j, -0.1 + 1.4j):
        thermal = 2 / (math.pi * width) * math.exp(-2 * abs(beta) ** 2 / width)
        assert analytic_wigner(beta, t, k, CAT) == pytest.approx(thermal, rel=1e-9)
        # fringes are gone; what remains of W_I is the overlap <alpha|-alpha> share
        _, _, w_int = wigner_components(beta, t, k, CAT)
        share = math.exp(-8.0) / (1 + math.exp(-8.0))
        assert w_int == pytest.approx(thermal * share, rel=1e-9)


@pytest.mark.parametrize("t", [0.0, 0.3, 2.0])
def test_wigner_field_normalised(t):
    fld = wigner_field(t, EvolutionKernels(0.8, 0.3), CAT)
    assert fld.values.shape == (257, 257)
    assert abs(fld.riemann_sum() - 1.0) < 1e-3


def test_parity_is_scaled_origin_value():
    k = EvolutionKernels(0.5, 0.2)
    for t in (0.0, 0.1, 1.0):
        dist = pn_distribution(t, k, CAT, 60)
        assert dynamics.parity_contrast(t, k, CAT) == pytest.approx(dist.parity_contrast(), abs=1e-10)


def test_peak_modes():
    k = EvolutionKernels(0.11, 0.1)
    assert wigner_peak(0.0, k, CAT) == pytest.approx(wigner_components(0.0, 0.0, k, CAT)[2])
    t = np.array([0.0, 0.2, 0.9])
    approx = wigner_peak(t, k, CAT, mode="approximate")
    np.testing.assert_allclose(approx / approx[0], np.exp(-2 * 0.1 * 9 * t), rtol=1e-14)
    with pytest.raises(ValueError):
        wigner_peak(0.1, k, CAT, mode="other")


def test_log_peak_survives_underflow():
    k = EvolutionKernels(2.0, 1.98)
    lp = log_wigner_peak(50.0, k, CAT, mode="approximate")
    assert math.isfinite(lp) and lp < -700
    assert wigner_peak(50.0, k, CAT, mode="approximate") == 0.0


def test_exact_peak_floor():
    k = EvolutionKernels(2.0, 1.98)
    width = 2 * k.a(1e4) + 1
    expected = 4 * CAT.norm / (math.pi * width) * math.exp(-8.0)
    assert wigner_peak(1e4, k, CAT) == pytest.approx(expected, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(k=rates_st, alpha=st.floats(0.5, 3.0))
def test_peak_nonincreasing(k, alpha):
    cat = CatState(alpha)
    t = np.linspace(0.0, 10.0 / (k.gamma_plus + k.gamma_minus), 60)
    lp = log_wigner_peak(t, k, cat)
    assert np.all(np.diff(lp) <= 1e-12)


@pytest.mark.parametrize("r, slower", [(10.0, True), (0.1, False)])
def test_peak_zeno_ordering(r, slower):
    spec = ReservoirSpec.from_ratio(r, 0.1)
    shut = EvolutionKernels.from_rates(measured_rates(0.1 / r, spec))
    markov = EvolutionKernels.markov(spec)
    t = np.linspace(0, 0.5, 30)[1:] / spec.big_gamma
    diff = log_wigner_peak(t, shut, CAT) - log_wigner_peak(t, markov, CAT)
    assert np.all(diff > 0) if slower else np.all(diff < 0)


def test_pn_initial():
    k = EvolutionKernels(0.5, 0.2)
    ref = cat_number_distribution(CAT, 30).probs
    for n in range(31):
        val = pn_closed_form(n, 0.0, k, CAT)
        if n % 2:
            assert abs(val) < 1e-12
        else:
            assert val == pytest.approx(ref[n], rel=1e-12)


def test_pn_rejects_bad_index():
    with pytest.raises(ValueError):
        pn_closed_form(-1, 0.0, EvolutionKernels(1, 0), CAT)


@settings(max_examples=40, deadline=None)
@given(k=rates_st, s=st.floats(0.0, 3.0))
def test_pn_normalised_and_nonnegative(k, s):
    t = s / (k.gamma_plus + k.gamma_minus)
    n_max = 40 + int(60 * k.a(t))
    dist = pn_distribution(t, k, CAT, n_max)
    assert np.all(dist.probs >= -1e-12)
    assert dist.total() == pytest.approx(1.0, abs=1e-8)


def test_pn_matches_rate_equation():
    spec = ReservoirSpec.from_ratio(0.1, 0.05, BoseEinstein(0.7))
    rs = measured_rates(1.0 / spec.omega_c, spec)
    k = EvolutionKernels.from_rates(rs)
    times = np.linspace(0, 2.0 / k.b_tau, 6)
    ode = oracle.integrate_rate_equation(cat_number_distribution(CAT, 40), times, rs)
    for t, ref in zip(times, ode):
        assert np.max(np.abs(pn_distribution(t, k, CAT, 40).probs - ref.probs)) < 1e-8


def test_mean_photon_number_consistency():
    k = EvolutionKernels(0.9, 0.4)
    dists = pn_evolution([0.0, 0.5, 3.0], k, CAT, 60)
    for t, d in zip([0.0, 0.5, 3.0], dists):
        assert d.mean() == pytest.approx(mean_photon_number(t, k, CAT), rel=1e-9)
    assert mean_photon_number(200.0, k, CAT) == pytest.approx(0.4 / 0.5, rel=1e-9)


def test_markov_odd_components_fill_in():
    k = EvolutionKernels.markov(ReservoirSpec.from_ratio(10.0, 0.1, BoseEinstein(2.0)))
    early = pn_distribution(0.0, k, CAT, 40).probs
    later = pn_distribution(0.5, k, CAT, 40).probs
    assert early[1::2].sum() < 1e-12
    assert later[1::2].sum() > 0.1


def test_pn_evolution_validation():
    k = EvolutionKernels(1.0, 0.5)
    with pytest.raises(ValueError):
        pn_evolution([0.5, 0.1], k, CAT, 30)
    with pytest.warns(RuntimeWarning):
        pn_evolution([5.0], EvolutionKernels(1.0, 0.95), CAT, 10)
