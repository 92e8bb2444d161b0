"""Closed-form response and squeezing of J=1/2 -> J'=1/2 and J=1/2 -> J'=3/2 lines.

Detunings are in units of gamma0 (``delta = Delta / gamma0``) and ``kappa``
is the optical-pumping saturation parameter ``(d E0 / hbar)^2 / (gamma gamma0)``.
For J=1/2 -> J'=1/2 (X system)

    alpha = alpha0 / (1 + 4 delta^2 + (gamma/gamma0) kappa / 3)
    g     = (2/9) alpha kappa delta / (1 + 4 delta^2 + kappa / 9).

For J=1/2 -> J'=3/2 the same steady-state analysis gives the absorption in
the same form and

    g = -(1/18) alpha kappa delta / (1 + 4 delta^2 + kappa / 18),

whose maximum of |g|/alpha reproduces s = (kappa / 7776)^(1/6) for large
kappa. The rotation has the opposite sense to the X system.
"""

import enum
import warnings
from dataclasses import dataclass
from math import log10, pi, sqrt

from .errors import DomainError, RegimeWarning, UsageError

HBAR = 1.054571817e-34
EPS0 = 8.8541878128e-12
C_LIGHT = 299792458.0
K_B = 1.380649e-23


class System(enum.Enum):
    X_HALF_HALF = "X_HALF_HALF"
    HALF_THREEHALVES = "HALF_THREEHALVES"

    @property
    def momenta(self):
        return (0.5, 0.5) if self is System.X_HALF_HALF else (0.5, 1.5)

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).upper().replace("-", "_")
        aliases = {"X": "X_HALF_HALF", "D1": "X_HALF_HALF", "D2": "HALF_THREEHALVES",
                   "HALF_THREE_HALVES": "HALF_THREEHALVES"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise UsageError(f"unknown transition system {value!r}") from None


# (coefficient of g, saturation divisor in the g denominator)
_SR_COEFF = {System.X_HALF_HALF: (2.0 / 9.0, 9.0),
             System.HALF_THREEHALVES: (-1.0 / 18.0, 18.0)}
_ASYM_CONST = {System.X_HALF_HALF: 972.0, System.HALF_THREEHALVES: 7776.0}


@dataclass(frozen=True)
class TransitionSpec:
    """Atomic line parameters (SI units; rates in rad/s).

    ``dipole`` is the reduced matrix element with
    ``d^2 = 3 pi eps0 hbar (2 J_e + 1) gamma0 / k^3``; if omitted it is
    derived from ``gamma0`` and ``wavelength``.
    """

    system: System
    gamma: float
    gamma0: float
    wavelength: float
    density: float
    dipole: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "system", System.parse(self.system))
        if self.gamma <= 0 or self.gamma0 <= 0:
            raise DomainError("gamma and gamma0 must be positive")
        if self.wavelength <= 0 or self.density <= 0:
            raise DomainError("wavelength and density must be positive")
        if self.gamma / self.gamma0 >= 0.01:
            warnings.warn(f"gamma/gamma0 = {self.gamma / self.gamma0:.3g}; the closed forms "
                          "assume gamma << gamma0", RegimeWarning, stacklevel=3)

    @property
    def Jg(self):
        return self.system.momenta[0]

    @property
    def Je(self):
        return self.system.momenta[1]

    @property
    def reduced_dipole(self):
        if self.dipole is not None:
            return self.dipole
        return dipole_from_linewidth(self.wavelength, self.gamma0, self.Je)


@dataclass(frozen=True)
class SaturationPoint:
    kappa: float
    detuning: float  # Delta / gamma0

    def __post_init__(self):
        if self.kappa < 0:
            raise DomainError("kappa must be non-negative")


@dataclass(frozen=True)
class MediumResponse:
    alpha: float
    g: float
    se_rate: float
    alpha0: float


def dipole_from_linewidth(wavelength, gamma0, Je):
    """Reduced dipole element implied by the natural width of a J_e level."""
    k = 2 * pi / wavelength
    return sqrt(3 * pi * EPS0 * HBAR * (2 * Je + 1) * gamma0 / k ** 3)


def beam_intensity(power, diameter):
    """Mean intensity (W/m^2) of a flat-top beam."""
    if power < 0 or diameter <= 0:
        raise DomainError("power must be >= 0 and diameter > 0")
    return power / (pi * (diameter / 2) ** 2)


def field_amplitude(power, diameter):
    """Field amplitude E0 (V/m), with intensity c eps0 E0^2 / 2."""
    return sqrt(2 * beam_intensity(power, diameter) / (C_LIGHT * EPS0))


def mean_speed(temperature, mass):
    return sqrt(8 * K_B * temperature / (pi * mass))


def transit_rate(temperature, mass, diameter):
    """Ground-state relaxation by time of flight across the beam, v_mean / x."""
    return mean_speed(temperature, mass) / diameter


def saturation_kappa(spec, field_amplitude):
    """kappa = (d E0 / hbar)^2 / (gamma gamma0)."""
    if spec.gamma <= 0 or spec.gamma0 <= 0:
        raise DomainError("rates must be positive")
    rabi = spec.reduced_dipole * field_amplitude / HBAR
    return rabi ** 2 / (spec.gamma * spec.gamma0)


def kappa_from_beam(spec, power, diameter):
    return saturation_kappa(spec, field_amplitude(power, diameter))


def unsaturated_alpha0(spec):
    """Resonant intensity absorption coefficient (1/m) without saturation."""
    return spec.density * spec.wavelength ** 2 * (2 * spec.Je + 1) / (2 * pi * (2 * spec.Jg + 1))


def _lorentz(delta):
    return 1.0 + 4.0 * delta * delta


def response(spec, point):
    """Medium response of either closed system at ``point``."""
    coeff, div = _SR_COEFF[spec.system]
    k, d = point.kappa, point.detuning
    a0 = unsaturated_alpha0(spec)
    alpha = a0 / (_lorentz(d) + (spec.gamma / spec.gamma0) * k / 3.0)
    den = _lorentz(d) + k / div
    g = coeff * alpha * k * d / den
    # self-elliptization is smaller than SR by gamma0 / Delta
    se = coeff * alpha * k / den
    return MediumResponse(alpha, g, se, a0)


def response_x(spec, point):
    """Closed-form response of the X system."""
    if spec.system is not System.X_HALF_HALF:
        raise UsageError("response_x requires an X_HALF_HALF transition")
    return response(spec, point)


def _system_of(obj):
    return obj.system if isinstance(obj, TransitionSpec) else System.parse(obj)


def g_over_alpha(system, kappa, detuning):
    """|g| / alpha with the absorption-saturation term neglected."""
    coeff, div = _SR_COEFF[_system_of(system)]
    return abs(coeff) * kappa * abs(detuning) / (_lorentz(detuning) + kappa / div)


def squeezing_profile(system, point):
    """Optimum-length squeezing s at ``point`` from |g|/alpha.

    For the X system this is (1/3) [(2/sqrt 3) kappa delta / (1 + 4 delta^2 +
    kappa/9)]^(1/3). Negative detunings are evaluated at |delta|.
    """
    ratio = g_over_alpha(system, point.kappa, point.detuning)
    if ratio <= 10 and ratio > 0:
        warnings.warn(f"g/alpha = {ratio:.3g} is outside the validity of the squeezing "
                      "formula", RegimeWarning, stacklevel=2)
    return ratio ** (1.0 / 3.0) / sqrt(3.0)


def optimal_detuning(kappa, system=System.X_HALF_HALF):
    """Detuning (units of gamma0) that maximizes g/alpha."""
    if kappa < 0:
        raise DomainError("kappa must be non-negative")
    _, div = _SR_COEFF[_system_of(system)]
    return 0.5 * sqrt(1.0 + kappa / div)


def asymptotic_squeezing(system, kappa):
    """Large-kappa optimum squeezing (kappa / 972)^(1/6) or (kappa / 7776)^(1/6)."""
    if kappa < 0:
        raise DomainError("kappa must be non-negative")
    if kappa <= 100:
        warnings.warn(f"kappa = {kappa:.3g} is not in the large-kappa regime",
                      RegimeWarning, stacklevel=2)
    return (kappa / _ASYM_CONST[_system_of(system)]) ** (1.0 / 6.0)


def optimal_thickness(kappa):
    """Unsaturated resonant optical depth alpha0 l at the optimum, large kappa."""
    if kappa < 0:
        raise DomainError("kappa must be non-negative")
    return (4.0 * sqrt(2.0) * kappa / 9.0) ** (2.0 / 3.0)


def to_db(s):
    return 10.0 * log10(s)
