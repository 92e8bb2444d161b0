"""Buffer-gas effective relaxation rates and vapor density for a target optical depth.

In the diffusion-limited regime the ground-state relaxation, homogeneous width
and saturation parameter with buffer-gas density ``n_b`` are

    gamma'  = D / x^2 + a1 n_b,     D = v / (3 n_b sigma)
    gamma0' = gamma0 + a2 n_b
    kappa' / kappa = gamma0 gamma_free / (gamma0' gamma')

at fixed light power and beam diameter.
"""

from dataclasses import dataclass, replace
from math import log, pi, sqrt

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError


@dataclass(frozen=True)
class BufferGasSpec:
    """Rate constants (SI). ``n_b`` may be left unset for optimization."""

    a1: float  # m^3/s, depolarizing collisions
    a2: float  # m^3/s, pressure broadening of the optical line (rad/s per m^-3)
    sigma: float  # m^2, cross section entering the diffusion coefficient
    v: float  # m/s, mean thermal speed
    x: float  # m, beam diameter
    n_b: float | None = None

    def __post_init__(self):
        if self.a1 < 0 or self.a2 < 0:
            raise DomainError("a1 and a2 must be non-negative")
        if self.sigma <= 0 or self.v <= 0 or self.x <= 0:
            raise DomainError("sigma, v and x must be positive")
        if self.n_b is not None and self.n_b < 0:
            raise DomainError("buffer-gas density must be non-negative")


@dataclass(frozen=True)
class EffectiveRates:
    gamma_prime: float
    gamma0_prime: float
    kappa_ratio: float


# Rb in neon near 330 K. sigma is a gas-kinetic cross section; a2 is the D1
# pressure broadening 2 pi x 9.84 MHz/Torr over 3.22e22 m^-3 per Torr; a1 is
# a depolarization constant of spin-destruction magnitude.
EXAMPLE_BUFFER_GAS = BufferGasSpec(a1=6e-25, a2=1.92e-15, sigma=4e-19, v=270.0, x=100e-6)
EXAMPLE_GAMMA0 = 2 * pi * 5.75e6
EXAMPLE_GAMMA_FREE = 3e6


def _rates(spec, n_b, gamma0, gamma_free):
    diffusion = spec.v / (3.0 * n_b * spec.sigma)
    gp = diffusion / spec.x ** 2 + spec.a1 * n_b
    g0p = gamma0 + spec.a2 * n_b
    return EffectiveRates(gp, g0p, gamma0 * gamma_free / (g0p * gp))


def buffer_rates(spec, gamma0, gamma_free, n_b=None):
    """Effective rates at buffer-gas density ``n_b`` (defaults to ``spec.n_b``)."""
    n = spec.n_b if n_b is None else n_b
    if n is None or n <= 0:
        raise DomainError("buffer-gas density must be positive; the diffusion model does "
                          "not cover the ballistic (n_b -> 0) regime")
    if gamma0 <= 0 or gamma_free <= 0:
        raise DomainError("gamma0 and gamma_free must be positive")
    return _rates(spec, n, gamma0, gamma_free)


def analytic_optimum_without_broadening(spec):
    """Density minimizing gamma' alone, sqrt(v / (3 sigma x^2 a1))."""
    if spec.a1 <= 0:
        raise DomainError("a1 must be positive for a finite optimum")
    return sqrt(spec.v / (3.0 * spec.sigma * spec.x ** 2 * spec.a1))


def min_gamma_prime(spec):
    """Lower bound of gamma' over n_b, 2 sqrt(v a1 / (3 sigma x^2))."""
    return 2.0 * sqrt(spec.v * spec.a1 / (3.0 * spec.sigma * spec.x ** 2))


def optimize_buffer_density(spec, gamma0, gamma_free, grid=(1e15, 1e30), points=301):
    """Buffer-gas density maximizing kappa'/kappa, and the rates there.

    A logarithmic scan brackets the maximum, which is then refined by
    bounded Brent search in log density.
    """
    if gamma0 <= 0 or gamma_free <= 0:
        raise DomainError("gamma0 and gamma_free must be positive")
    if spec.a1 == 0 and spec.a2 == 0:
        raise DomainError("without depolarization or broadening kappa'/kappa grows without bound")
    logs = np.linspace(log(grid[0]), log(grid[1]), points)

    def neg(ln):
        return -np.log(_rates(spec, np.exp(ln), gamma0, gamma_free).kappa_ratio)

    vals = np.array([neg(t) for t in logs])
    i = int(np.argmin(vals))
    if i == 0 or i == points - 1:
        raise DomainError("kappa'/kappa optimum lies outside the scanned density range")
    res = minimize_scalar(neg, bounds=(logs[i - 1], logs[i + 1]), method="bounded",
                          options={"xatol": 1e-10})
    n_opt = float(np.exp(res.x))
    return n_opt, _rates(spec, n_opt, gamma0, gamma_free)


def required_density(alpha0_ell, cell_length, wavelength, Jg, Je):
    """Vapor density giving the unsaturated resonant optical depth ``alpha0_ell``."""
    if alpha0_ell <= 0 or cell_length <= 0 or wavelength <= 0:
        raise DomainError("inputs must be positive")
    per_atom = wavelength ** 2 * (2 * Je + 1) / (2 * pi * (2 * Jg + 1))
    return alpha0_ell / (cell_length * per_atom)


def with_density(spec, n_b):
    return replace(spec, n_b=n_b)
