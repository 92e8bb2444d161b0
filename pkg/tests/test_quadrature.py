from math import pi, sqrt

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from srsqueeze.errors import DomainError, RegimeWarning
from srsqueeze.quadrature import (QuadratureGeometry, max_variance, min_variance,
                                  monte_carlo_variance, optimal_length, optimal_phase,
                                  output_quadrature, squeezing_parameter,
                                  uncertainty_product, variance, variance_table)

g_ells = st.floats(min_value=-200, max_value=200, allow_nan=False).filter(lambda x: abs(x) > 1e-3)


def mp_variance(gl, chi):
    gl, chi = mpmath.mpf(gl), mpmath.mpf(chi)
    return 1 - 2 * gl * mpmath.sin(chi) * mpmath.cos(chi) + gl ** 2 * mpmath.cos(chi) ** 2


def mp_min(gl):
    # unsimplified closed form, evaluated at high precision
    G = mpmath.mpf(gl) ** 2
    return 1 + G / 2 - (2 + G / 2) / mpmath.sqrt(1 + 4 / G)


def test_variance_expanded_form_agrees():
    geom = QuadratureGeometry(3.0)
    chi = np.linspace(0, pi, 7)
    expanded = 1 - 2 * 3.0 * np.sin(chi) * np.cos(chi) + 9.0 * np.cos(chi) ** 2
    assert np.allclose(variance(geom, chi), expanded, rtol=1e-13)


def test_variance_examples():
    assert variance(QuadratureGeometry(0.0), 0.7) == pytest.approx(1.0)
    assert variance(QuadratureGeometry(5.0), pi / 2) == pytest.approx(1.0)
    assert variance(QuadratureGeometry(5.0), 0.0) == pytest.approx(26.0)


def test_loss_mixes_in_vacuum():
    g = QuadratureGeometry(4.0, alpha_ell=0.5)
    t = np.exp(-0.5)
    assert variance(g, 0.3) == pytest.approx(t * variance(QuadratureGeometry(4.0), 0.3) + 1 - t)
    # infinitely lossy medium returns vacuum
    assert variance(QuadratureGeometry(4.0, 60.0), 0.3) == pytest.approx(1.0)


def test_geometry_rejects_negative_loss():
    with pytest.raises(DomainError):
        QuadratureGeometry(1.0, -0.1)


@pytest.mark.parametrize("gl", [0.1, 0.5, 1.0, 5.0, 30.0, 100.0])
def test_min_variance_matches_mpmath(gl):
    with mpmath.workdps(50):
        ref = mp_min(gl)
    assert min_variance(gl, mode="exact") == pytest.approx(float(ref), rel=1e-13)


def test_min_variance_stable_for_large_g():
    # the unsimplified form loses all digits here in double precision
    with mpmath.workdps(60):
        ref = float(mp_min(1e6))
    assert min_variance(1e6, mode="exact") == pytest.approx(ref, rel=1e-12)


def test_asymptotic_mode():
    assert min_variance(100.0, mode="asymptotic") == pytest.approx(4e-4)
    with pytest.warns(RegimeWarning):
        assert min_variance(5.0) == pytest.approx(0.16)
    assert min_variance(5.0, mode="exact") == pytest.approx(0.037088, rel=1e-4)
    with pytest.warns(RegimeWarning):
        min_variance(2.0, mode="asymptotic")
    with pytest.raises(DomainError):
        min_variance(0.0, mode="asymptotic")
    with pytest.raises(DomainError):
        min_variance(1.0, mode="nope")


def test_zero_gain_is_vacuum():
    assert min_variance(0.0, mode="exact") == 1.0
    assert max_variance(0.0) == 1.0
    ph = optimal_phase(0.0)
    assert ph.degenerate and ph.chi == 0.0


@settings(max_examples=200, deadline=None)
@given(g_ells)
def test_optimal_phase_minimizes(gl):
    ph = optimal_phase(gl)
    assert 0 <= ph.chi < pi and not ph.degenerate
    geom = QuadratureGeometry(gl)
    vmin = variance(geom, ph.chi)
    assert vmin == pytest.approx(min_variance(gl, mode="exact"), rel=1e-9, abs=1e-15)
    chi = np.linspace(0, pi, 2001)
    assert np.all(variance(geom, chi) >= vmin * (1 - 1e-9))


@settings(max_examples=200, deadline=None)
@given(g_ells)
def test_minimum_uncertainty(gl):
    chi = optimal_phase(gl).chi
    assert uncertainty_product(gl, chi) == pytest.approx(1.0, rel=1e-10)
    assert min_variance(gl, mode="exact") * max_variance(gl) == pytest.approx(1.0, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(g_ells, st.floats(0, 2 * pi))
def test_variance_bounds_and_period(gl, chi):
    geom = QuadratureGeometry(gl)
    v = variance(geom, chi)
    assert min_variance(gl, mode="exact") * (1 - 1e-9) <= v <= max_variance(gl) * (1 + 1e-9)
    assert variance(geom, chi + pi) == pytest.approx(v, rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e7), st.floats(1e-3, 1e3))
def test_optimal_length_minimizes_loss_model(g, alpha):
    # 4/(g l)^2 + alpha l in units of alpha l
    r = g / alpha
    cost = lambda x: 4.0 / (r * x) ** 2 + x
    res = minimize_scalar(lambda t: cost(np.exp(t)), bounds=(-40, 40), method="bounded",
                          options={"xatol": 1e-12})
    assert optimal_length(g, alpha) == pytest.approx(np.exp(res.x), rel=1e-5)


def test_squeezing_parameter():
    res = squeezing_parameter(1000.0, 1.0)
    assert res.s == pytest.approx(10 / sqrt(3))
    assert res.s_db == pytest.approx(10 * np.log10(10 / sqrt(3)))
    assert res.ell_opt_alpha == pytest.approx(2e-2)
    assert res.valid
    assert not squeezing_parameter(5.0, 1.0).valid
    with pytest.raises(DomainError):
        squeezing_parameter(-1.0, 1.0)


def test_squeezing_parameter_from_asymptotic_loss_model():
    g, alpha = 1e4, 1.0
    res = squeezing_parameter(g, alpha)
    al = res.ell_opt_alpha
    v = min_variance(g / alpha * al, mode="asymptotic") + al
    assert 1 / v == pytest.approx(res.s ** 2, rel=1e-12)


def test_exact_lossy_variance_beats_asymptotic_chain():
    # the exact minimum tends to 1/(g l)^2, below the 4/(g l)^2 form
    g, alpha = 1e4, 1.0
    res = squeezing_parameter(g, alpha)
    al = res.ell_opt_alpha
    gl = g / alpha * al
    v = variance(QuadratureGeometry(gl, al), optimal_phase(gl).chi)
    assert 1 / v > res.s ** 2
    assert min_variance(gl, mode="exact") == pytest.approx(1 / (gl ** 2 + 2), rel=1e-3)


def test_output_quadrature_is_linear():
    a = np.array([0.3 + 0.1j, -0.2 + 0.4j])
    q = output_quadrature(a, 2.0, 0.4)
    assert np.allclose(output_quadrature(2 * a, 2.0, 0.4), 2 * q)


@pytest.mark.parametrize("gl,chi", [(1.0, 0.3), (5.0, 1.38), (5.0, 2.9)])
def test_monte_carlo_matches(gl, chi):
    var, err = monte_carlo_variance(gl, chi, 200_000, seed=7)
    assert abs(var - variance(QuadratureGeometry(gl), chi)) < 4 * err


def test_monte_carlo_with_loss():
    var, err = monte_carlo_variance(3.0, 1.0, 200_000, alpha_ell=0.7, seed=3)
    assert abs(var - variance(QuadratureGeometry(3.0, 0.7), 1.0)) < 4 * err


def test_monte_carlo_seed_reproducible():
    a = monte_carlo_variance(2.0, [0.1, 0.2], 1000, seed=11)
    b = monte_carlo_variance(2.0, [0.1, 0.2], 1000, seed=11)
    assert np.array_equal(a[0], b[0])


def test_variance_table():
    chi, v = variance_table(2.0, points=8)
    assert len(chi) == 8 and chi[0] == 0.0 and chi[-1] < pi
    with pytest.raises(DomainError):
        variance_table(2.0, points=1)


@settings(max_examples=100, deadline=None)
@given(g_ells, st.floats(0, pi))
def test_quadrature_sum_rule(gl, chi):
    geom = QuadratureGeometry(gl)
    total = variance(geom, chi) + variance(geom, chi + pi / 2)
    assert total == pytest.approx(2 + gl ** 2, rel=1e-12)


def test_phase_examples_and_mirror_symmetry():
    assert optimal_phase(5.0).chi == pytest.approx(0.5 * np.arctan(-0.4) + pi / 2)
    assert optimal_phase(-5.0).chi == pytest.approx(pi - optimal_phase(5.0).chi)
    assert optimal_phase(1e9).chi == pytest.approx(pi / 2, abs=1e-8)
    assert variance(QuadratureGeometry(-5.0), pi - 1.0) == pytest.approx(
        variance(QuadratureGeometry(5.0), 1.0))
