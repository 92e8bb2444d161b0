"""Quadrature noise of the vacuum mode orthogonal to a self-rotating field.

Variances are in units of the vacuum variance. The lossless variance at
local-oscillator phase ``chi`` after a medium with self-rotation ``g l`` is

    v0(chi) = 1 - 2 g l sin(chi) cos(chi) + (g l)^2 cos(chi)^2
            = (g l cos(chi) - sin(chi))^2 + cos(chi)^2,

the second form being free of cancellation. Absorption is modelled as a beam
splitter of transmission ``exp(-alpha l)`` that mixes in vacuum noise.
"""

import warnings
from dataclasses import dataclass
from math import atan, exp, isfinite, log10, pi, sqrt
from typing import NamedTuple

import numpy as np

from .errors import DomainError, RegimeWarning


@dataclass(frozen=True)
class QuadratureGeometry:
    g_ell: float
    alpha_ell: float = 0.0

    def __post_init__(self):
        if not (isfinite(self.g_ell) and isfinite(self.alpha_ell)):
            raise DomainError("g l and alpha l must be finite")
        if self.alpha_ell < 0:
            raise DomainError("alpha l must be non-negative")


class OptimalPhase(NamedTuple):
    chi: float
    degenerate: bool = False


@dataclass(frozen=True)
class SqueezingResult:
    s: float
    s_db: float
    chi_opt: float
    ell_opt_alpha: float
    valid: bool = True


def variance(geom, chi):
    """Variance of the chi-quadrature; ``chi`` may be an array."""
    chi = np.asarray(chi, dtype=float)
    gl = geom.g_ell
    c, s = np.cos(chi), np.sin(chi)
    v0 = (gl * c - s) ** 2 + c ** 2
    if geom.alpha_ell == 0:
        out = v0
    else:
        t = exp(-geom.alpha_ell)
        out = t * v0 + (1.0 - t)
    return float(out) if out.ndim == 0 else out


def optimal_phase(g_ell):
    """Variance-minimizing local-oscillator phase in [0, pi).

    For ``g_ell = 0`` every phase is equivalent; returns chi = 0 flagged
    degenerate.
    """
    if g_ell == 0:
        return OptimalPhase(0.0, True)
    chi = 0.5 * atan(-2.0 / g_ell) + pi / 2
    return OptimalPhase(chi % pi, False)


def min_variance(g_ell, mode="asymptotic"):
    """Minimum over phase of the lossless variance.

    ``exact`` evaluates 1 + G/2 - (2 + G/2)/sqrt(1 + 4/G), G = (g l)^2, in the
    equivalent form 1 / (1 + G/2 + sqrt(G (G + 4))/2) which keeps full relative
    precision for large g l. ``asymptotic`` (the default) returns 4 / G, the
    large-g l form from which the optimum-length squeezing parameter follows.
    Note that the exact minimum tends to 1 / G, a factor 4 below it.
    """
    G = float(g_ell) ** 2
    if mode == "exact":
        return 1.0 / (1.0 + G / 2 + sqrt(G * (G + 4)) / 2)
    if mode == "asymptotic":
        if g_ell == 0:
            raise DomainError("asymptotic form diverges at g l = 0")
        if abs(g_ell) < 10:
            warnings.warn(f"asymptotic variance used at |g l| = {abs(g_ell):.3g} < 10",
                          RegimeWarning, stacklevel=2)
        return 4.0 / G
    raise DomainError(f"unknown mode {mode!r}; use 'exact' or 'asymptotic'")


def max_variance(g_ell):
    """Maximum over phase of the lossless variance (reciprocal of the minimum)."""
    G = float(g_ell) ** 2
    return 1.0 + G / 2 + sqrt(G * (G + 4)) / 2


def optimal_length(g, alpha):
    """Optimal optical depth alpha l = 2 (alpha / g)^(2/3)."""
    if g <= 0 or alpha <= 0:
        raise DomainError("g and alpha must be positive")
    return 2.0 * (alpha / g) ** (2.0 / 3.0)


def squeezing_parameter(g, alpha):
    """Squeezing at the optimal length and phase, s = (g/alpha)^(1/3) / sqrt(3).

    Results with g/alpha <= 10 are returned with ``valid=False``.
    """
    if g <= 0 or alpha <= 0:
        raise DomainError("g and alpha must be positive")
    ratio = g / alpha
    s = ratio ** (1.0 / 3.0) / sqrt(3.0)
    al = optimal_length(g, alpha)
    chi = optimal_phase(ratio * al).chi
    return SqueezingResult(s, 10.0 * log10(s), chi, al, ratio > 10)


def uncertainty_product(g_ell, chi):
    """v(chi) v(chi + pi/2) for the lossless medium; equal to 1 at stationary phases."""
    geom = QuadratureGeometry(g_ell)
    return variance(geom, chi) * variance(geom, np.asarray(chi) + pi / 2)


def output_quadrature(a, g_ell, chi, alpha_ell=0.0, b=None):
    """Quadrature a_out e^{i chi} + c.c. of input amplitudes ``a`` (complex array).

    ``a_out = a + i (g l / 2)(a* - a)``; with loss, ``b`` are the vacuum
    amplitudes admixed by the beam splitter.
    """
    out = a + 0.5j * g_ell * (np.conj(a) - a)
    if alpha_ell:
        t = exp(-alpha_ell / 2)
        out = t * out + sqrt(1 - t * t) * b
    return 2.0 * (out * np.exp(1j * chi)).real


def monte_carlo_variance(g_ell, chi, samples=1_000_000, alpha_ell=0.0, seed=None):
    """Sampled variance and its standard error from Wigner-distributed vacuum.

    Each vacuum amplitude is x + i p with independent Gaussian x, p of
    variance 1/4, so that a quadrature of the input has unit variance.
    """
    rng = np.random.default_rng(seed)
    a = rng.normal(0, 0.5, samples) + 1j * rng.normal(0, 0.5, samples)
    b = None
    if alpha_ell:
        b = rng.normal(0, 0.5, samples) + 1j * rng.normal(0, 0.5, samples)
    chis = np.atleast_1d(np.asarray(chi, dtype=float))
    var = np.empty(chis.shape)
    for i, c in enumerate(chis):
        var[i] = np.var(output_quadrature(a, g_ell, c, alpha_ell, b), ddof=1)
    err = var * sqrt(2.0 / (samples - 1))
    if np.ndim(chi) == 0:
        return float(var[0]), float(err[0])
    return var, err


def variance_table(g_ell, alpha_ell=0.0, points=181):
    """(chi, variance) rows over [0, pi)."""
    if points < 2:
        raise DomainError("need at least two phase points")
    chi = np.linspace(0.0, pi, points, endpoint=False)
    return chi, variance(QuadratureGeometry(g_ell, alpha_ell), chi)
