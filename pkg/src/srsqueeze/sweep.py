"""Detuning sweeps, squeezing optimization and kappa scans over the three models.

``analytic_x`` and ``analytic_d2`` use the closed forms for J=1/2 -> J'=1/2
and J=1/2 -> J'=3/2; ``dm`` runs the density-matrix engine on a
hyperfine-resolved alkali D line. Detunings are always in units of gamma0.
"""

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from math import log, pi, sqrt

import numpy as np
from scipy.optimize import minimize_scalar

from . import __version__
from .errors import ConvergenceError, RegimeWarning, UsageError
from .quadrature import optimal_length
from .rows import ResultRow, make_row, squeezing_db
from .transitions import (SaturationPoint, System, TransitionSpec, kappa_from_beam,
                          response)

MODELS = ("analytic_x", "analytic_d2", "dm")
_MODEL_SYSTEM = {"analytic_x": System.X_HALF_HALF, "analytic_d2": System.HALF_THREEHALVES}


def default_transition(system):
    """Rb-like closed transition: D1 (X) or D2 (J'=3/2), 1e13 cm^-3, 3e6 s^-1 transit."""
    system = System.parse(system)
    with warnings.catch_warnings():
        # transit broadening of a 100 um beam gives gamma/gamma0 ~ 0.08
        warnings.simplefilter("ignore", RegimeWarning)
        if system is System.X_HALF_HALF:
            return TransitionSpec(system, 3e6, 2 * pi * 5.75e6, 794.979e-9, 1e19)
        return TransitionSpec(system, 3e6, 2 * pi * 6.0666e6, 780.241e-9, 1e19)


@dataclass(frozen=True)
class RbMedium:
    """Hyperfine-resolved alkali line for the ``dm`` model."""

    line: str = "D1"
    F: float = 2
    density: float = 1e18  # m^-3
    doppler_width: float | None = 2 * pi * 306e6
    temperature: float | None = None
    atoms: str | None = None  # path to atomic data, bundled 87Rb if None
    intensity_limit: float = 1.5e5  # W/m^2
    order: int = 64


@dataclass(frozen=True)
class SweepSpec:
    model: str
    start: float = -5.0
    stop: float = 5.0
    points: int = 101
    cell_length: float = 0.1
    kappa: float | None = None
    power: float | None = None
    beam_diameter: float | None = None
    transition: TransitionSpec | None = None
    rb: RbMedium = field(default_factory=RbMedium)

    def __post_init__(self):
        if self.model not in MODELS:
            raise UsageError(f"unknown model {self.model!r}; choose from {', '.join(MODELS)}")
        if isinstance(self.points, bool) or int(self.points) != self.points or self.points < 2:
            raise UsageError("a sweep needs at least two points")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise UsageError("detuning range must be finite")
        if self.start == self.stop:
            raise UsageError("detuning range has zero width")
        if self.cell_length <= 0:
            raise UsageError("cell length must be positive")
        if self.kappa is None and (self.power is None or self.beam_diameter is None):
            raise UsageError("give kappa, or power and beam diameter")

    @property
    def detunings(self):
        return np.linspace(self.start, self.stop, int(self.points))


@dataclass
class Sweep:
    rows: list
    metadata: dict


def _analytic_transition(spec):
    system = _MODEL_SYSTEM[spec.model]
    t = spec.transition or default_transition(system)
    if t.system is not system:
        t = replace(t, system=system)
    return t


def _analytic_kappa(spec, t):
    if spec.kappa is not None:
        return float(spec.kappa)
    return kappa_from_beam(t, spec.power, spec.beam_diameter)


def _rb_setup(spec, kappa=None, check_limit=False):
    from .dm.rubidium import line_setup, load_atom_data

    rb = spec.rb
    atoms = load_atom_data(rb.atoms)
    diameter = spec.beam_diameter if spec.beam_diameter is not None else 3e-4
    return line_setup(atoms, rb.line, rb.F, spec.power or 0.0, diameter, rb.density,
                      doppler=rb.doppler_width, temperature=rb.temperature,
                      kappa=spec.kappa if kappa is None else kappa,
                      intensity_limit=rb.intensity_limit, check_limit=check_limit)


def _metadata(spec, **extra):
    params = asdict(spec)
    if spec.transition is not None:
        params["transition"]["system"] = spec.transition.system.value
    params.update(extra)
    return {"model": spec.model, "parameters": params, "version": __version__}


def _pmap(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def run_sweep(spec, threads=1):
    """Evaluate ``spec`` over its detuning grid; rows are in grid order."""
    if spec.model == "dm":
        from .dm.rubidium import scan_row

        setup = _rb_setup(spec)
        g0 = setup.line.gamma0
        rows = _pmap(lambda d: scan_row(setup, d * g0, spec.cell_length, spec.rb.order),
                     spec.detunings, threads)
        return Sweep(rows, _metadata(spec, kappa=setup.kappa, gamma=setup.gamma))
    t = _analytic_transition(spec)
    kappa = _analytic_kappa(spec, t)
    extra = set()
    if kappa <= 100:
        extra.add("kappa_regime")

    def row(d):
        r = response(t, SaturationPoint(kappa, float(d)))
        return make_row(d, r.alpha, r.g, spec.cell_length, r.se_rate, extra)

    rows = _pmap(row, spec.detunings, threads)
    return Sweep(rows, _metadata(spec, kappa=kappa))


@dataclass(frozen=True)
class Optimum:
    detuning_gamma0: float
    density: float  # m^-3, chosen so that alpha l is optimal
    squeezing_db: float
    g_over_alpha: float
    alpha_ell: float
    g_ell: float
    kappa: float


def _maximize(fn, grid, tol=1e-8):
    """Golden-section refinement of the largest value of ``fn`` on ``grid``."""
    vals = np.array([fn(x) for x in grid])
    if not np.any(np.isfinite(vals)) or np.nanmax(vals) <= 0:
        raise ConvergenceError("g/alpha vanishes on the whole scan; no bracket found")
    i = int(np.nanargmax(vals))
    if i == 0 or i == len(grid) - 1:
        raise ConvergenceError("g/alpha maximum lies at the edge of the scan; widen the range")
    if np.ptp(vals[max(i - 1, 0):i + 2]) == 0:
        raise ConvergenceError("g/alpha is flat around its maximum")
    res = minimize_scalar(lambda x: -fn(x), bracket=(grid[i - 1], grid[i], grid[i + 1]),
                          method="golden", tol=tol)
    x = res.x if -res.fun >= vals[i] else grid[i]
    return float(x), float(max(-res.fun, vals[i]))


def optimize_squeezing(spec, grid=None):
    """Detuning maximizing g/alpha, and the density for the optimal alpha l.

    Analytic models scan log-spaced positive detunings (g/alpha is even);
    the ``dm`` model scans ``grid`` (units of gamma0, default the sweep range).
    """
    if spec.model == "dm":
        setup = _rb_setup(spec)
        g0 = setup.line.gamma0

        def ratio(d):
            r = setup.response(d * g0)
            return abs(r.g) / r.alpha if r.alpha > 0 else 0.0

        xs = spec.detunings if grid is None else np.asarray(grid, float)
        d_opt, _ = _maximize(ratio, xs, tol=1e-4)
        r = setup.response(d_opt * g0)
        alpha, g, n_ref, kappa = r.alpha, abs(r.g), setup.density, setup.kappa
    else:
        t = _analytic_transition(spec)
        kappa = _analytic_kappa(spec, t)

        def at(d):
            return response(t, SaturationPoint(kappa, d))

        def lratio(x):
            r = at(math.exp(x))
            return abs(r.g) / r.alpha

        if grid is None:
            hi = max(1.0, sqrt(kappa)) * 100.0
            grid = np.linspace(log(1e-3), log(hi), 80)
        else:
            grid = np.log(np.asarray(grid, float))
        x_opt, _ = _maximize(lratio, grid)
        d_opt = math.exp(x_opt)
        r = at(d_opt)
        alpha, g, n_ref = r.alpha, abs(r.g), t.density
    target = optimal_length(g, alpha)
    density = n_ref * target / (alpha * spec.cell_length)
    return Optimum(d_opt, density, squeezing_db(g, alpha), g / alpha, target,
                   g / alpha * target, kappa)


def kappa_scan(spec, kappas, threads=1, grid=None):
    """Optimum squeezing versus kappa; rows of dicts for tabular output."""

    def one(k):
        s = replace(spec, kappa=float(k))
        flags = []
        try:
            o = optimize_squeezing(s, grid)
        except ConvergenceError:
            return {"kappa": float(k), "detuning_gamma0": math.nan,
                    "squeezing_db": math.nan, "flags": ["g_over_alpha_low"]}
        if o.g_over_alpha < 10:
            flags.append("g_over_alpha_low")
        if spec.model != "dm" and k <= 100:
            flags.append("kappa_regime")
        if spec.model == "dm" and _rb_setup(s).above_limit:
            flags.append("kappa_regime")
        return {"kappa": float(k), "detuning_gamma0": o.detuning_gamma0,
                "squeezing_db": o.squeezing_db, "flags": flags}

    return _pmap(one, list(kappas), threads)


__all__ = ["MODELS", "RbMedium", "SweepSpec", "Sweep", "ResultRow", "Optimum", "run_sweep",
           "optimize_squeezing", "kappa_scan", "default_transition"]
