import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from wilson_racah import wilson
from wilson_racah.errors import (
    ConstraintError,
    DegenerateRecursionError,
    DomainError,
    FitDegenerateError,
    ParamError,
)
from wilson_racah.quadrature import integrate_semiaxis
from wilson_racah.wilson import FIG1_PARAMS, WilsonParams

# mpmath reference values at the Fig-1 parameters (0.7, 0.2, 0.5, 0.3)
FROZEN_TILDE = [
    (1, 1.0, -2.0180555555555557),
    (5, 0.25, -0.1103510863423474),
    (10, 0.25, -0.033441014556609215),
    (20, 4.0, -2.5657817306209596),
]
FROZEN_WEIGHT = [
    (0.5, 0.9032254773232918),
    (1.0, 0.051840356646663574),
    (2.0, 0.00012613703464377062),
    (4.5, 2.620404635871667e-11),
]


def random_scattering_params(rng):
    mu, nu, a, b = rng.uniform(0.05, 3.0, size=4)
    return WilsonParams(mu, nu, a, b)


# -- parameters ---------------------------------------------------------------


def test_regimes():
    assert FIG1_PARAMS.regime == "scattering"
    assert WilsonParams(-0.5, 1.2, 1.0, 0.8).regime == "mixed"
    assert WilsonParams(-9.9, -0.1, 11.6, 11.4).regime == "confined"
    assert FIG1_PARAMS.s == pytest.approx(1.7)


@pytest.mark.parametrize("args, label", [
    ((0.7, -0.2, 0.5, 0.3), "nu > 0"),
    ((-0.9, 0.2, 0.5, 0.3), "mu + nu > 0"),
    ((-0.4, 0.6, 0.3, 0.8), "mu + a > 0"),
    ((0.7, 0.2, 0.5, float("nan")), "finite"),
])
def test_constraint_messages_name_inequality(args, label):
    with pytest.raises(ConstraintError, match=label.replace("+", r"\+")):
        WilsonParams(*args)


def test_params_immutable():
    with pytest.raises(AttributeError):
        FIG1_PARAMS.mu = 1.0


# -- series and recursion -------------------------------------------------------


@pytest.mark.parametrize("n, y2, expected", FROZEN_TILDE)
def test_series_frozen_values(n, y2, expected):
    assert wilson.wilson_series(n, y2, FIG1_PARAMS) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("n, y2, expected", FROZEN_TILDE)
def test_recursion_frozen_values(n, y2, expected):
    table = wilson.wilson_recursion(n, y2, FIG1_PARAMS)
    assert table.values[n] == pytest.approx(expected, rel=1e-11)
    assert table.values[0] == 1.0
    assert not table.normalized


def test_series_negative_argument_against_mpmath():
    p = WilsonParams(-0.5, 1.2, 1.0, 0.8)
    assert wilson.wilson_series(3, -0.25, p) == pytest.approx(0.01463619987468672, rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 12), st.floats(0.0, 9.0), st.floats(0.05, 3.0), st.floats(0.05, 3.0),
       st.floats(0.05, 3.0), st.floats(0.05, 3.0))
def test_series_against_mpmath_hypothesis(n, y2, mu, nu, a, b):
    p = WilsonParams(mu, nu, a, b)
    ref = oracles.wilson_tilde(n, y2, mu, nu, a, b)
    got = wilson.wilson_series(n, y2, p)
    assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref))


def test_series_recursion_random_draws():
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(200):
        p = random_scattering_params(rng)
        y2 = rng.uniform(0.0, 25.0)
        rec = wilson.tilde_table(20, y2, p)
        for n in (3, 11, 20):
            ser = wilson.wilson_series(n, y2, p)
            worst = max(worst, abs(ser - rec[n]) / abs(ser))
    assert worst < 1e-9


def test_branch_symmetry_exact():
    for n in (0, 3, 9):
        v_plus = wilson.wilson_series_branch(n, 1.3, FIG1_PARAMS)
        v_minus = wilson.wilson_series_branch(n, -1.3, FIG1_PARAMS)
        assert v_plus == v_minus
        assert v_plus.imag == 0.0
        assert v_plus.real == pytest.approx(wilson.wilson_series(n, 1.69, FIG1_PARAMS), rel=1e-15)


def test_series_rejects_negative_degree():
    with pytest.raises(ValueError):
        wilson.wilson_series(-1, 1.0, FIG1_PARAMS)


def test_vectorized_table_shape():
    y2 = np.linspace(0, 4, 7)
    tab = wilson.tilde_table(6, y2, FIG1_PARAMS)
    assert tab.shape == (7, 7)
    assert np.allclose(tab[:, 2], wilson.tilde_table(6, y2[2], FIG1_PARAMS))


def test_degenerate_recursion_raises():
    p = WilsonParams(-9.9, -0.1, 11.6, 11.4)  # mu + nu = -10
    assert p.regime == "confined"
    with pytest.raises(DegenerateRecursionError):
        wilson.tilde_table(12, 1.0, p)


# -- orthonormal form ----------------------------------------------------------


def test_normalize_first_radicand():
    mu, nu, a, b = FIG1_PARAMS.as_tuple()
    s = FIG1_PARAMS.s
    logs, signs = wilson.log_norm_radicand(2, FIG1_PARAMS)
    r1 = (s + 1) * (mu + nu) * (a + b) / ((mu + a) * (mu + b) * (nu + a) * (nu + b))
    assert math.exp(logs[1]) == pytest.approx(r1, rel=1e-14)
    # direct product form at n = 2
    r2 = ((2 * 2 + s - 1) / (2 + s - 1) * (mu + nu) * (mu + nu + 1) * (a + b) * (a + b + 1)
          * s * (s + 1) * 2 / ((mu + a) * (mu + a + 1) * (mu + b) * (mu + b + 1)
                               * (nu + a) * (nu + a + 1) * (nu + b) * (nu + b + 1)))
    assert math.exp(logs[2]) == pytest.approx(r2, rel=1e-14)
    assert list(signs) == [1, 1, 1]


def test_wilson_normalize_table():
    t = wilson.wilson_recursion(5, 0.7, FIG1_PARAMS)
    nt = wilson.wilson_normalize(t)
    assert nt.normalized
    assert wilson.wilson_normalize(nt) is nt
    assert np.allclose(nt.values, wilson.orthonormal_table(5, 0.7, FIG1_PARAMS))


def test_symmetric_recursion_residual():
    y2 = 1.69
    vals = wilson.orthonormal_table(12, y2, FIG1_PARAMS)
    d, e = wilson.symmetric_recursion_coefficients(np.arange(12), FIG1_PARAMS)
    for n in range(1, 11):
        lhs = y2 * vals[n]
        rhs = d[n] * vals[n] - e[n] * vals[n - 1] - e[n + 1] * vals[n + 1]
        assert lhs == pytest.approx(rhs, abs=1e-12 * max(1.0, abs(lhs)))
    assert e[0] == 0.0


def test_continuous_orthonormality_fig1():
    def integrand(y):
        vals = wilson.orthonormal_table(8, y * y, FIG1_PARAMS)
        w = wilson.wilson_weight(y, FIG1_PARAMS)
        return np.moveaxis(vals[:, None, :] * vals[None, :, :] * w, -1, 0)

    gram = integrate_semiaxis(integrand, tol=1e-8, decay_hint=2 * math.pi).value
    assert np.max(np.abs(gram - np.eye(9))) < 1e-6


# -- weight and amplitude ------------------------------------------------------


@pytest.mark.parametrize("y, expected", FROZEN_WEIGHT)
def test_weight_frozen(y, expected):
    assert wilson.wilson_weight(y, FIG1_PARAMS) == pytest.approx(expected, rel=1e-11)


def test_weight_integrates_to_one():
    res = integrate_semiaxis(lambda y: wilson.wilson_weight(y, FIG1_PARAMS), tol=1e-12,
                             decay_hint=2 * math.pi)
    assert res.value == pytest.approx(1.0, abs=1e-11)


def test_weight_domain():
    assert wilson.wilson_weight(0.0, FIG1_PARAMS) == 0.0
    with pytest.raises(DomainError):
        wilson.wilson_weight(-1.0, FIG1_PARAMS)


def test_amplitude_weight_relation():
    # rho(y) |A(iy)|^2 equals the gamma-only constant of the weight
    for y in (0.3, 1.0, 2.5):
        mag, _ = wilson.scattering_amplitude(y, FIG1_PARAMS)
        lhs = wilson.wilson_weight(y, FIG1_PARAMS) * mag ** 2
        assert lhs == pytest.approx(math.exp(wilson._log_weight_constant(FIG1_PARAMS)), rel=1e-12)


def test_amplitude_vanishes_at_denominator_poles():
    p = WilsonParams(-2.5, 3.0, 3.2, 2.9)
    for m in range(3):
        assert abs(wilson.amplitude(-(m + p.mu), p)) < 1e-10


def test_scattering_amplitude_requires_positive_y():
    with pytest.raises(DomainError):
        wilson.scattering_amplitude(0.0, FIG1_PARAMS)


def test_weight_prefactor_sign_guard():
    # mu + nu < 0 only passes for confined parameters, where Gamma(mu+nu) < 0
    p = WilsonParams(-9.9, -0.1, 11.6, 11.4)
    with pytest.raises(ParamError):
        wilson.wilson_weight(1.0, p)


# -- generating function and asymptotics --------------------------------------


@pytest.mark.parametrize("y", [0.3, 1.0, 2.0])
def test_generating_function(y):
    assert wilson.wilson_generating_check(FIG1_PARAMS, y, 0.1, 60) < 1e-10


@pytest.mark.parametrize("y", [0.5, 1.0, 2.0])
def test_asymptotic_fit_matches_prediction(y):
    amp, phase = wilson.wilson_asymptotic_fit(FIG1_PARAMS, y)
    amp_ref, phase_ref = wilson.asymptotic_prediction(FIG1_PARAMS, y)
    assert amp == pytest.approx(amp_ref, rel=0.05)
    assert abs(math.remainder(phase - phase_ref, 2 * math.pi)) < 0.05


def test_asymptotic_fit_window_validation():
    with pytest.raises(ValueError):
        wilson.wilson_asymptotic_fit(FIG1_PARAMS, 1.0, (500, 800))
    with pytest.raises(FitDegenerateError):
        wilson.wilson_asymptotic_fit(FIG1_PARAMS, 1e-9, (250, 500))
