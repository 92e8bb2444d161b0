"""Multilevel atomic structure: sublevels, dipole couplings, decay branching."""

from dataclasses import dataclass
from math import sqrt

import numpy as np

from ..errors import DomainError
from .angular import clebsch_gordan

GROUND = "ground"
EXCITED = "excited"
POLARIZATIONS = (-1, 0, 1)


def _mvals(j):
    n = round(2 * j) + 1
    return [j - k for k in range(n)]


@dataclass(frozen=True)
class State:
    manifold: str
    J: float
    m: float
    F: float | None = None
    energy: float = 0.0  # rad/s, offset from the line reference frequency


@dataclass
class LevelScheme:
    """Sublevels plus dipole and spontaneous-emission couplings.

    ``dipole[q][e, g]`` is <e|d_q|g> in units of the reduced matrix element
    <J_e||d||J_g>, so the Rabi frequency of a sublevel pair is
    ``rabi * u_q * dipole[q][e, g]`` with ``rabi = d E0 / hbar``.
    ``emission[q][e, g]`` holds the amplitudes that feed ground coherences by
    spontaneous decay; for every excited sublevel the squares summed over
    ``g`` and ``q`` give the fraction of gamma0 returned to this scheme.
    """

    states: tuple
    dipole: dict
    emission: dict
    gamma: float
    gamma0: float
    Je: float
    wavelength: float | None = None
    label: str = ""

    def __post_init__(self):
        self.states = tuple(self.states)
        self.validate()

    @property
    def n(self):
        return len(self.states)

    @property
    def ground(self):
        return np.array([s.manifold == GROUND for s in self.states])

    @property
    def excited(self):
        return np.array([s.manifold == EXCITED for s in self.states])

    @property
    def transitions(self):
        """(e, g, q, coupling) for every nonzero dipole matrix element."""
        out = []
        for q in POLARIZATIONS:
            D = self.dipole[q]
            for e, g in zip(*np.nonzero(D)):
                out.append((int(e), int(g), q, float(D[e, g])))
        return out

    def validate(self, atol=1e-9):
        if self.gamma < 0 or self.gamma0 <= 0:
            raise DomainError("relaxation rates must satisfy gamma >= 0, gamma0 > 0")
        for s in self.states:
            if s.manifold not in (GROUND, EXCITED):
                raise DomainError(f"unknown manifold {s.manifold!r}")
            if not np.isfinite(s.energy):
                raise DomainError("level energies must be finite reals")
        exc, gnd = self.excited, self.ground
        for q in POLARIZATIONS:
            for mat in (self.dipole[q], self.emission[q]):
                if mat.shape != (self.n, self.n):
                    raise DomainError("coupling matrices must be n x n")
                nz = np.abs(mat) > 0
                if np.any(nz & ~np.outer(exc, gnd)):
                    raise DomainError("couplings must connect excited rows to ground columns")
                for e, g in zip(*np.nonzero(nz)):
                    se, sg = self.states[e], self.states[g]
                    if abs(se.m - sg.m - q) > 1e-9:
                        raise DomainError(
                            f"selection rule violated: m_e={se.m}, m_g={sg.m}, q={q}")
        branching = sum((self.emission[q] ** 2).sum(axis=1) for q in POLARIZATIONS)
        bad = np.abs(branching[exc] - 1.0) > atol
        if np.any(bad):
            raise DomainError("excited-state decay branching does not sum to gamma0")


def _blank(n):
    return {q: np.zeros((n, n)) for q in POLARIZATIONS}


def fine_structure_scheme(Jg, Je, gamma, gamma0, wavelength=None, excited_energy=0.0):
    """Closed J_g -> J_e transition without hyperfine structure."""
    states = [State(GROUND, Jg, m) for m in _mvals(Jg)]
    states += [State(EXCITED, Je, m, energy=excited_energy) for m in _mvals(Je)]
    n = len(states)
    dip, emi = _blank(n), _blank(n)
    norm = sqrt(2 * Je + 1)
    for e, se in enumerate(states):
        if se.manifold != EXCITED:
            continue
        for g, sg in enumerate(states):
            if sg.manifold != GROUND:
                continue
            q = round(se.m - sg.m)
            if q not in POLARIZATIONS:
                continue
            c = clebsch_gordan(Jg, sg.m, 1, q, Je, se.m)
            dip[q][e, g] = c / norm
            emi[q][e, g] = c
    return LevelScheme(states, dip, emi, gamma, gamma0, Je, wavelength,
                       label=f"J={Jg}->J'={Je}")


def hyperfine_dipole(I, Jg, Je, F, m, Fe, me, q):
    """<Fe me|d_q|F m> / <Je||d||Jg>, obtained by uncoupling the nuclear spin."""
    total = 0.0
    for mI in _mvals(I):
        mJ = m - mI
        mJe = me - mI
        if abs(mJ) > Jg + 1e-9 or abs(mJe) > Je + 1e-9:
            continue
        if abs(mJe - mJ - q) > 1e-9:
            continue
        total += (clebsch_gordan(Je, mJe, I, mI, Fe, me)
                  * clebsch_gordan(Jg, mJ, 1, q, Je, mJe)
                  * clebsch_gordan(Jg, mJ, I, mI, F, m))
    return total / sqrt(2 * Je + 1)


def hyperfine_scheme(I, Jg, Je, F, excited_levels, gamma, gamma0, wavelength=None,
                     ground_energy=0.0):
    """One ground hyperfine level F coupled to every allowed excited F'.

    ``excited_levels`` maps F' to its energy offset (rad/s) from the line
    reference. Spontaneous decay out of each F' is renormalized so that the
    subsystem stays closed.
    """
    allowed = sorted(Fe for Fe in excited_levels if abs(Fe - F) <= 1 and Fe + F >= 1)
    if not allowed:
        raise DomainError(f"no dipole-allowed excited level for F={F}")
    states = [State(GROUND, Jg, m, F, ground_energy) for m in _mvals(F)]
    for Fe in allowed:
        states += [State(EXCITED, Je, me, Fe, excited_levels[Fe]) for me in _mvals(Fe)]
    n = len(states)
    dip, emi = _blank(n), _blank(n)
    for e, se in enumerate(states):
        if se.manifold != EXCITED:
            continue
        for g, sg in enumerate(states):
            if sg.manifold != GROUND:
                continue
            q = round(se.m - sg.m)
            if q not in POLARIZATIONS:
                continue
            dip[q][e, g] = hyperfine_dipole(I, Jg, Je, F, sg.m, se.F, se.m, q)
    # fraction of each excited sublevel's decay that lands in ground level F
    share = (2 * Je + 1) * sum(dip[q] ** 2 for q in POLARIZATIONS).sum(axis=1)
    scale = np.zeros(n)
    exc = np.array([s.manifold == EXCITED for s in states])
    scale[exc] = np.sqrt((2 * Je + 1) / share[exc])
    for q in POLARIZATIONS:
        emi[q] = dip[q] * scale[:, None]
    return LevelScheme(states, dip, emi, gamma, gamma0, Je, wavelength,
                       label=f"F={F}->F'={allowed}")


def branching_ratio(I, Jg, Je, F, Fe):
    """Fraction of spontaneous decay from F' that ends in ground level F."""
    me = Fe  # independent of the sublevel
    tot = 0.0
    for m in _mvals(F):
        q = round(me - m)
        if q in POLARIZATIONS:
            tot += hyperfine_dipole(I, Jg, Je, F, m, Fe, me, q) ** 2
    return (2 * Je + 1) * tot
