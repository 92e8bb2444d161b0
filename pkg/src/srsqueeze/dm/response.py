"""Optical response of a thin atomic layer from the steady-state density matrix.

The medium polarization ``P = n Tr(rho d)`` is inserted into the slowly varying
envelope wave equation. Each circular component of the field then obeys
``d E_q / dz = k_q E_q`` with

    k_q = i A / (rabi u_q) * sum_{e,g} rho[e, g] D_q[e, g],
    A   = 3 n lambda^2 (2 J_e + 1) gamma0 / (4 pi),

``D_q`` being the dipole matrices in units of the reduced element. From
``k_{+1}`` and ``k_{-1}`` follow the intensity absorption, the rotation of the
ellipse axis, the common phase shift and the change of ellipticity.
"""

from dataclasses import dataclass, replace
from math import cos, pi, sqrt

import numpy as np

from ..errors import ConvergenceError, DomainError, DopplerConvergenceError
from .liouville import build_system, steady_state

PROBE_ELLIPTICITY = 1e-3


@dataclass(frozen=True)
class DMResponse:
    """Per-length response of the medium (1/m, rad/m).

    ``g`` is the self-rotation parameter d(rotation)/dz divided by the
    ellipticity; ``drot_dz`` is the rotation rate of the ellipse axis itself
    and ``se_rate`` the ellipticity change per length divided by the
    ellipticity.
    """

    alpha: float
    g: float
    dphi_dz: float
    deps_dz: float
    drot_dz: float = 0.0
    se_rate: float = 0.0


def coupling_strength(scheme, density):
    """The prefactor A (1/m * rad/s) linking coherences to field growth rates."""
    if scheme.wavelength is None:
        raise DomainError("scheme needs a wavelength to set the optical response scale")
    if density < 0:
        raise DomainError("density must be non-negative")
    return 3.0 * density * scheme.wavelength ** 2 * (2 * scheme.Je + 1) * scheme.gamma0 / (4 * pi)


def growth_rates(system, rho, strength=1.0):
    """(k_{+1}, k_{-1}) for a steady state ``rho`` of ``system``."""
    rabi = system.drive.rabi
    if rabi == 0:
        return 0j, 0j
    out = []
    for D, u in zip(system.coupling, system.components):
        if abs(u) < 1e-300:
            out.append(0j)  # component absent; its linear response is not probed
            continue
        s = np.sum(rho * D)
        out.append(1j * strength * s / (rabi * u))
    return out[0], out[1]


def _observables(kp, km, up, um, ellipticity):
    alpha = -2.0 * (abs(up) ** 2 * kp.real + abs(um) ** 2 * km.real)
    drot = 0.5 * (km.imag - kp.imag)
    dphi = -0.5 * (km.imag + kp.imag)
    deps = 0.5 * cos(2 * ellipticity) * (km.real - kp.real)
    return alpha, drot, dphi, deps


def _to_response(kp, km, system):
    eps = system.drive.ellipticity
    up, um = system.components
    alpha, drot, dphi, deps = _observables(kp, km, up, um, eps)
    # g and se_rate are ratios to the ellipticity; for linear drive both are 0
    g = drot / eps if eps != 0 else 0.0
    se = deps / eps if eps != 0 else 0.0
    return DMResponse(float(alpha), float(g), float(dphi), float(deps), float(drot), float(se))


def extract_response(system, rho, density):
    """DMResponse for a solved steady state at the drive of ``system``."""
    kp, km = growth_rates(system, rho, coupling_strength(system.scheme, density))
    return _to_response(kp, km, system)


def _rates_at(system, detuning, strength):
    rho = steady_state(system, detuning)
    return np.array(growth_rates(system, rho, strength))


# numpy's Gauss-Hermite weights underflow beyond about 300 nodes
MAX_GH_ORDER = 300


def _gauss_hermite(order):
    if order > MAX_GH_ORDER:
        raise DopplerConvergenceError(
            f"Gauss-Hermite order {order} exceeds the stable range ({MAX_GH_ORDER})",
            suggested_order=order)
    x, w = np.polynomial.hermite.hermgauss(order)
    return x, w / sqrt(pi)


def averaged_rates(system, strength, doppler_width=0.0, order=64, rtol=1e-3,
                   max_order=256, detuning=None):
    """Velocity-averaged (k_{+1}, k_{-1}) and the quadrature order used.

    ``doppler_width`` is the 1/e half-width k u of the Maxwell-Boltzmann
    distribution of Doppler shifts (rad/s). The order is doubled until the
    result changes by less than ``rtol``.
    """
    delta = system.drive.detuning if detuning is None else detuning
    if doppler_width < 0:
        raise DomainError("Doppler width must be non-negative")
    if doppler_width == 0:
        return _rates_at(system, delta, strength), 0

    def at_order(m):
        x, w = _gauss_hermite(m)
        acc = np.zeros(2, dtype=complex)
        for xi, wi in zip(x, w):
            acc += wi * _rates_at(system, delta - doppler_width * xi, strength)
        return acc

    prev = at_order(order)
    m = order
    while True:
        m2 = 2 * m
        cur = at_order(m2)
        scale = np.abs(cur).max()
        if scale == 0 or np.abs(cur - prev).max() <= rtol * scale:
            return cur, m2
        if m2 >= max_order:
            raise DopplerConvergenceError(
                f"Doppler average not converged at order {m2} "
                f"(relative change {np.abs(cur - prev).max() / scale:.2e})",
                suggested_order=2 * m2)
        prev, m = cur, m2


def medium_response(scheme, drive, density, doppler_width=0.0, probe=PROBE_ELLIPTICITY,
                    order=64, rtol=1e-3, max_order=256, probe_rtol=0.01):
    """Response at ``drive`` with g taken in the small-ellipticity limit.

    The drive ellipticity is replaced by ``probe`` and by ``probe / 2``; the
    two estimates of g must agree to ``probe_rtol`` relative to
    ``max(|g|, alpha)``, i.e. g / alpha is resolved to 1 % or to 0.01
    absolute near zero crossings of g. Since
    rotation is odd in the ellipticity, the returned g is Richardson
    extrapolated in ``probe**2``.
    """
    if drive.rabi == 0:
        # no light-induced anisotropy: take the linear absorption and dispersion
        # at a vanishing field and report zero self-rotation
        weak = replace(drive, rabi=1e-6 * sqrt(scheme.gamma * scheme.gamma0),
                       ellipticity=probe)
        r = linear_response(scheme, weak, density, doppler_width, order, rtol, max_order)
        return replace(r, g=0.0, deps_dz=0.0, drot_dz=0.0, se_rate=0.0)
    results = []
    for p in (probe, probe / 2):
        system = build_system(scheme, replace(drive, ellipticity=p))
        strength = coupling_strength(scheme, density)
        k, _ = averaged_rates(system, strength, doppler_width, order, rtol, max_order)
        results.append(_to_response(k[0], k[1], system))
    r1, r2 = results
    tol = probe_rtol * max(abs(r2.g), abs(r2.alpha), 1e-300)
    if abs(r1.g - r2.g) > tol:
        raise ConvergenceError(
            f"small-ellipticity limit of g not reached: {r1.g:.6e} vs {r2.g:.6e}")
    g = (4 * r2.g - r1.g) / 3
    return replace(r2, g=g, drot_dz=g * probe / 2)


def linear_response(scheme, drive, density, doppler_width=0.0, order=64, rtol=1e-3,
                    max_order=256):
    """Doppler-averaged DMResponse at the drive ellipticity as given."""
    system = build_system(scheme, drive)
    k, _ = averaged_rates(system, coupling_strength(scheme, density), doppler_width,
                          order, rtol, max_order)
    return _to_response(k[0], k[1], system)


def doppler_average(scheme, drive, density, doppler_width, order=64, rtol=1e-3,
                    max_order=256):
    """Alias of :func:`linear_response` named for its role in velocity averaging."""
    return linear_response(scheme, drive, density, doppler_width, order, rtol, max_order)
