"""Two-component optical field: ellipticity, self-rotation, Stokes parameters.

The x component leads y by ``rel_phase``: ``A_x = amp_x exp(i rel_phase)``,
``A_y = amp_y``. A positive ellipticity corresponds to ``sin(rel_phase) > 0``.
With this convention ``S3 = i (A_x A_y* - A_x* A_y) = -2 amp_x amp_y sin(rel_phase)``,
so right-handed (positive-ellipticity) light has negative S3.
"""

import warnings
from dataclasses import dataclass
from math import asin, atan2, cos, pi, sin

import numpy as np

from .errors import DomainError, RegimeWarning

C_LIGHT = 299792458.0


def _reduce_phase(phi):
    # (-pi, pi]
    r = (phi + pi) % (2 * pi) - pi
    return pi if r == -pi else r


@dataclass(frozen=True)
class ComplexFieldEnvelope:
    """Slowly varying amplitudes of the x and y polarized components."""

    amp_x: float
    amp_y: float
    rel_phase: float = 0.0
    frequency: float = 0.0  # rad/s

    def __post_init__(self):
        if not (np.isfinite(self.amp_x) and np.isfinite(self.amp_y)):
            raise DomainError("amplitudes must be finite")
        if self.amp_x < 0 or self.amp_y < 0:
            raise DomainError("amplitudes must be non-negative")
        object.__setattr__(self, "rel_phase", _reduce_phase(float(self.rel_phase)))

    @property
    def wavenumber(self):
        return self.frequency / C_LIGHT

    @property
    def components(self):
        """Complex (A_x, A_y)."""
        return self.amp_x * np.exp(1j * self.rel_phase), complex(self.amp_y)

    @property
    def intensity(self):
        return self.amp_x ** 2 + self.amp_y ** 2

    @classmethod
    def from_components(cls, ax, ay, frequency=0.0):
        """Envelope of complex amplitudes, dropping their common phase."""
        rel = float(np.angle(ax) - np.angle(ay)) if abs(ax) > 0 and abs(ay) > 0 else 0.0
        return cls(float(abs(ax)), float(abs(ay)), rel, frequency)


@dataclass(frozen=True)
class PolarizationState:
    ellipticity: float
    rotation_angle: float  # principal-axis angle from x, in (-pi/2, pi/2]


def circular_components(field):
    """(E_+, E_-) = (A_x +/- i A_y) / sqrt(2); E_+ dominates for positive ellipticity."""
    ax, ay = field.components
    return (ax + 1j * ay) / np.sqrt(2), (ax - 1j * ay) / np.sqrt(2)


def ellipticity_exact(field):
    """Ellipticity from the imbalance of the circular components."""
    ep, em = circular_components(field)
    total = abs(ep) ** 2 + abs(em) ** 2
    if total == 0:
        raise DomainError("ellipticity undefined for zero intensity")
    arg = (abs(ep) ** 2 - abs(em) ** 2) / total
    return 0.5 * asin(min(1.0, max(-1.0, arg)))


def ellipticity_small(field):
    """Small-ellipticity form (amp_x / amp_y) sin(rel_phase) for amp_x << amp_y."""
    if field.amp_y == 0:
        raise DomainError("small-ellipticity form needs amp_y > 0")
    ratio = field.amp_x / field.amp_y
    if ratio >= 0.1:
        warnings.warn(f"amp_x/amp_y = {ratio:.3g} is not small", RegimeWarning, stacklevel=2)
    return ratio * sin(field.rel_phase)


def propagate_sr(field, g, length):
    """Apply first-order self-rotation by ``g * length * eps(0)`` to ``field``.

    ``x -> x + phi y``, ``y -> y - phi x`` with ``phi = g l eps(0)``; the output
    envelope is referenced to the phase of its y component.
    """
    if field.amp_y == 0:
        return field
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        eps0 = ellipticity_small(field)
    phi = g * length * eps0
    if abs(phi) >= 0.3:
        warnings.warn(f"rotation angle {phi:.3g} rad is outside the small-rotation regime",
                      RegimeWarning, stacklevel=2)
    ax, ay = field.components
    return ComplexFieldEnvelope.from_components(ax + phi * ay, ay - phi * ax, field.frequency)


def stokes_parameters(field):
    """(S0, S1, S2, S3); see the module docstring for the sign of S3."""
    ax, ay = field.components
    s0 = abs(ax) ** 2 + abs(ay) ** 2
    s1 = abs(ax) ** 2 - abs(ay) ** 2
    s2 = 2 * (ax * np.conj(ay)).real
    s3 = (1j * (ax * np.conj(ay) - np.conj(ax) * ay)).real
    return float(s0), float(s1), float(s2), float(s3)


def polarization_state(field):
    """Ellipticity and principal-axis angle of the polarization ellipse."""
    s0, s1, s2, _ = stokes_parameters(field)
    if s0 == 0:
        raise DomainError("polarization undefined for zero intensity")
    angle = 0.5 * atan2(s2, s1)
    if angle <= -pi / 2:
        angle += pi
    return PolarizationState(ellipticity_exact(field), angle)


def rotate(field, angle):
    """Rotate the polarization ellipse by ``angle`` (exact rotation matrix)."""
    ax, ay = field.components
    c, s = cos(angle), sin(angle)
    return ComplexFieldEnvelope.from_components(c * ax - s * ay, s * ax + c * ay,
                                                field.frequency)
