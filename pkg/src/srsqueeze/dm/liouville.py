"""Rotating-frame Liouville equation in vectorized (row-major) form.

    d rho/dt = -i[H, rho] - 1/2 {Gamma, rho} + Lambda0 + Lambda_repop(rho)

``vec(A rho B) = kron(A, B.T) @ vec(rho)`` for row-major flattening.
"""

from dataclasses import dataclass
from math import cos, sin, sqrt

import numpy as np
import scipy.linalg

from ..errors import DomainError, SteadyStateError
from .levels import POLARIZATIONS


@dataclass(frozen=True)
class DriveSpec:
    """Monochromatic drive in the lightfield parametrization.

    ``rabi`` is d E0 / hbar in rad/s (d the reduced dipole <J_e||d||J_g>),
    ``detuning`` the laser detuning from the line reference in rad/s.
    """

    rabi: float
    detuning: float = 0.0
    ellipticity: float = 0.0
    angle: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if abs(self.ellipticity) > np.pi / 4 + 1e-12:
            raise DomainError("|ellipticity| must not exceed pi/4")
        if self.rabi < 0:
            raise DomainError("rabi frequency must be non-negative")


def spherical_components(ellipticity, angle=0.0, phase=0.0):
    """Normalized (u_{+1}, u_{-1}) of the positive-frequency field.

    The lightfield expression is written with e^{+i omega t}; the
    positive-frequency amplitude is its complex conjugate. A positive
    ellipticity therefore puts more intensity into the q = -1 component.
    """
    c, s = cos(ellipticity), sin(ellipticity)
    up = -np.exp(-1j * (phase + angle)) * (c - s) / sqrt(2)
    um = np.exp(-1j * (phase - angle)) * (c + s) / sqrt(2)
    return up, um


def ellipse_parameters(up, um):
    """Inverse of :func:`spherical_components`: (ellipticity, angle, phase)."""
    eps = np.arctan2(abs(um), abs(up)) - np.pi / 4
    a_m, a_p = np.angle(um), np.angle(-up)
    angle = 0.5 * (a_m - a_p)
    phase = -0.5 * (a_m + a_p)
    # angle is defined modulo pi; keep it in (-pi/2, pi/2]
    angle = (angle + np.pi / 2) % np.pi - np.pi / 2
    return float(eps), float(angle), float(phase)


@dataclass
class LiouvilleSystem:
    """Affine generator L(rho) = M_fixed + delta * M_det acting on vec(rho) plus pump.

    Built once per (scheme, rabi, polarization); the detuning only enters
    through the excited-state projector, so sweeps reuse ``fixed``.
    """

    scheme: object
    drive: DriveSpec
    fixed: np.ndarray
    detuning_part: np.ndarray
    pump: np.ndarray
    coupling: np.ndarray  # (2, n, n): dipole matrices for q = +1, -1
    components: tuple

    def matrix(self, detuning=None):
        delta = self.drive.detuning if detuning is None else detuning
        return self.fixed + delta * self.detuning_part

    def apply(self, rho, detuning=None):
        """L(rho) as an n x n matrix."""
        n = self.scheme.n
        out = self.matrix(detuning) @ rho.reshape(-1) + self.pump
        return out.reshape(n, n)


def build_system(scheme, drive):
    """Assemble the vectorized generator for ``scheme`` under ``drive``."""
    n = scheme.n
    exc = scheme.excited.astype(float)
    gnd = scheme.ground
    ident = np.eye(n)

    up, um = spherical_components(drive.ellipticity, drive.angle, drive.phase)
    V = np.zeros((n, n), dtype=complex)
    for q, u in ((1, up), (-1, um)):
        V += -0.5 * drive.rabi * u * scheme.dipole[q]
    H = np.diag([s.energy for s in scheme.states]).astype(complex)
    H = H + V + V.conj().T

    relax = scheme.gamma + scheme.gamma0 * exc
    Gam = np.diag(relax)

    L = -1j * (np.kron(H, ident) - np.kron(ident, H.T))
    L -= 0.5 * (np.kron(Gam, ident) + np.kron(ident, Gam))
    for q in POLARIZATIONS:
        B = scheme.emission[q].T  # ground x excited embedded in n x n
        if np.any(B):
            L += scheme.gamma0 * np.kron(B, B)

    P = np.diag(exc)
    # H_rot = H0 - delta * P_e  ->  -i[H_rot, .] gains +i delta [P_e, .]
    Ldet = 1j * (np.kron(P, ident) - np.kron(ident, P))

    pump = np.zeros((n, n))
    ng = int(gnd.sum())
    pump[gnd, gnd] = scheme.gamma / ng
    coupling = np.stack([scheme.dipole[1], scheme.dipole[-1]])
    return LiouvilleSystem(scheme, drive, L, Ldet, pump.reshape(-1).astype(complex),
                           coupling, (up, um))


def steady_state(system, detuning=None, check=True):
    """Solve L(rho) = 0 with Tr rho = 1.

    The population equation of the first sublevel is redundant once the trace
    is fixed and is replaced by the trace condition.
    """
    n = system.scheme.n
    M = system.matrix(detuning).copy()
    rhs = -system.pump.copy()
    M[0, :] = np.eye(n).reshape(-1)
    rhs[0] = 1.0
    try:
        lu = scipy.linalg.lu_factor(M, check_finite=False)
        x = scipy.linalg.lu_solve(lu, rhs, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SteadyStateError(f"steady-state system is singular: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SteadyStateError(
            "steady-state system is singular (dark state with gamma = 0?)")
    rho = x.reshape(n, n)
    if check:
        herm = np.abs(rho - rho.conj().T).max()
        full = system.matrix(detuning)
        resid = np.abs(full @ x + system.pump).max()
        scale = np.abs(full).max() * np.abs(x).max() + np.abs(system.pump).max()
        if herm > 1e-10 or resid > 1e-9 * scale:
            cond = np.linalg.cond(M)
            raise SteadyStateError(
                f"steady state ill-conditioned (hermiticity {herm:.2e}, "
                f"residual {resid:.2e}, condition number {cond:.2e})")
    return 0.5 * (rho + rho.conj().T)
