"""Command-line front end: ``srsqueeze <subcommand> [options]``.

Values are resolved command line first, then the ``--config`` file, then
built-in defaults. Dimensional options accept SI numbers or ``"<value> <unit>"``
strings; detunings are always in units of gamma0.

Exit codes: 0 success, 1 usage or domain error, 2 configuration or I/O error,
3 numerical non-convergence.
"""

import argparse
import sys
from math import pi

import numpy as np

from . import __version__
from .config import Config, load_config, parse_quantity
from .errors import ConfigError, ConvergenceError, DomainError, UsageError
from .media import (EXAMPLE_BUFFER_GAS, EXAMPLE_GAMMA0, EXAMPLE_GAMMA_FREE, BufferGasSpec,
                    buffer_rates, optimize_buffer_density)
from .quadrature import QuadratureGeometry, monte_carlo_variance, variance_table
from .rows import emit
from .sweep import (RbMedium, SweepSpec, default_transition, kappa_scan, optimize_squeezing,
                    run_sweep)
from .transitions import System, TransitionSpec

EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERIC = 1, 2, 3


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(f"{self.prog}: error: {message}")


def _qty(dimension):
    def conv(text):
        try:
            return parse_quantity(text if _has_unit(text) else float(text), dimension, "option")
        except (ConfigError, ValueError) as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    conv.__name__ = dimension
    return conv


def _has_unit(text):
    return any(c.isalpha() and c not in "eE" for c in text)


def _common(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--config", default=d(None), help="JSON configuration file")
    p.add_argument("--output", default=d(None), help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=d("csv"))
    p.add_argument("--threads", type=int, default=d(1), help="parallel row evaluation")
    p.add_argument("--seed", type=int, default=d(None), help="Monte-Carlo seed")


def _grid_options(p):
    p.add_argument("--start", type=float, help="first detuning / gamma0")
    p.add_argument("--stop", type=float, help="last detuning / gamma0")
    p.add_argument("--points", type=int, help="number of grid points")
    p.add_argument("--cell-length", type=_qty("length"))


def _drive_options(p):
    p.add_argument("--kappa", type=float, help="saturation parameter")
    p.add_argument("--power", type=_qty("power"))
    p.add_argument("--beam-diameter", type=_qty("length"))


def _analytic_options(p, system=True):
    if system:
        p.add_argument("--system", help="X (J=1/2->1/2) or D2 (J=1/2->3/2)")
    p.add_argument("--gamma", type=_qty("rate"), help="ground-state relaxation (rad/s)")
    p.add_argument("--gamma0", type=_qty("rate"), help="natural width (rad/s)")
    p.add_argument("--wavelength", type=_qty("length"))
    p.add_argument("--density", type=_qty("density"))


def _rb_options(p):
    p.add_argument("--line", help="D1 or D2")
    p.add_argument("--F", type=float, dest="F", help="ground hyperfine level")
    p.add_argument("--rb-density", type=_qty("density"))
    p.add_argument("--doppler-width", type=_qty("rate"))
    p.add_argument("--temperature", type=_qty("temperature"))
    p.add_argument("--atoms", help="atomic data JSON (bundled 87Rb by default)")
    p.add_argument("--order", type=int, help="initial Gauss-Hermite order")


def build_parser():
    parser = _Parser(prog="srsqueeze", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("quadrature", help="variance versus local-oscillator phase")
    _common(p, True)
    p.add_argument("--g-ell", type=float)
    p.add_argument("--alpha-ell", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--mc-samples", type=int, default=0,
                   help="add Monte-Carlo columns with this many samples")

    p = sub.add_parser("analytic", help="closed-form detuning sweep")
    _common(p, True)
    _grid_options(p)
    _drive_options(p)
    _analytic_options(p)

    p = sub.add_parser("dm", help="density-matrix detuning sweep of an alkali D line")
    _common(p, True)
    _grid_options(p)
    _drive_options(p)
    _rb_options(p)

    for name, text in (("optimize", "optimal detuning, density and squeezing"),
                       ("kappa-scan", "optimal squeezing versus kappa")):
        p = sub.add_parser(name, help=text)
        _common(p, True)
        p.add_argument("--model", choices=("analytic_x", "analytic_d2", "dm"))
        _grid_options(p)
        _drive_options(p)
        _analytic_options(p, system=False)
        _rb_options(p)
        if name == "kappa-scan":
            p.add_argument("--kappa-start", type=float)
            p.add_argument("--kappa-stop", type=float)
            p.add_argument("--kappa-points", type=int)

    p = sub.add_parser("buffer", help="buffer-gas effective rates")
    _common(p, True)
    p.add_argument("--n-b", type=_qty("density"), help="single buffer-gas density")
    p.add_argument("--scan", nargs=3, type=float, metavar=("LO", "HI", "N"),
                   help="log-spaced density scan (m^-3)")
    for key, dim in (("a1", "rate_constant"), ("a2", "rate_constant"), ("sigma", "area"),
                     ("v", "speed"), ("x", "length"), ("gamma0", "rate"),
                     ("gamma_free", "rate")):
        p.add_argument("--" + key.replace("_", "-"), dest="bg_" + key, type=_qty(dim))
    return parser


def _pick(args, cfg, attr, key, default=None):
    v = getattr(args, attr, None)
    if v is not None:
        return v
    return cfg.get(key, default)


def _transition(args, cfg, system):
    base = default_transition(system)
    vals = dict(gamma=_pick(args, cfg, "gamma", "transition.gamma", base.gamma),
                gamma0=_pick(args, cfg, "gamma0", "transition.gamma0", base.gamma0),
                wavelength=_pick(args, cfg, "wavelength", "transition.wavelength",
                                 base.wavelength),
                density=_pick(args, cfg, "density", "transition.density", base.density),
                dipole=cfg.get("transition.dipole"))
    if all(vals[k] == getattr(base, k) for k in vals):
        return base
    return TransitionSpec(system, **vals)


def _rb_medium(args, cfg):
    temperature = _pick(args, cfg, "temperature", "rubidium.temperature")
    doppler = _pick(args, cfg, "doppler_width", "rubidium.doppler_width")
    if doppler is None and temperature is None:
        doppler = 2 * pi * 306e6
    return RbMedium(line=_pick(args, cfg, "line", "rubidium.line", "D1"),
                    F=_pick(args, cfg, "F", "rubidium.F", 2),
                    density=_pick(args, cfg, "rb_density", "rubidium.density", 1e18),
                    doppler_width=doppler, temperature=temperature,
                    atoms=_pick(args, cfg, "atoms", "rubidium.atoms"),
                    intensity_limit=cfg.get("rubidium.hyperfine_intensity_limit", 1.5e5),
                    order=_pick(args, cfg, "order", "", 64))


def _sweep_spec(args, cfg, model):
    dm = model == "dm"
    kappa = _pick(args, cfg, "kappa", "kappa")
    power = _pick(args, cfg, "power", "beam.power")
    diameter = _pick(args, cfg, "beam_diameter", "beam.diameter")
    if dm:
        if kappa is None and power is None:
            power = 10e-3
        if diameter is None:
            diameter = 3e-4
    elif kappa is None and power is None:
        kappa = 1e8
    start, stop, points = (0.0, 400.0, 81) if dm else (-5000.0, 5000.0, 201)
    transition = None
    if not dm:
        system = System.X_HALF_HALF if model == "analytic_x" else System.HALF_THREEHALVES
        transition = _transition(args, cfg, system)
    return SweepSpec(model=model,
                     start=_pick(args, cfg, "start", "detuning.start", start),
                     stop=_pick(args, cfg, "stop", "detuning.stop", stop),
                     points=_pick(args, cfg, "points", "detuning.points", points),
                     cell_length=_pick(args, cfg, "cell_length", "cell_length", 0.1),
                     kappa=kappa, power=power, beam_diameter=diameter,
                     transition=transition, rb=_rb_medium(args, cfg))


def _analytic_model(args, cfg):
    system = _pick(args, cfg, "system", "transition.system")
    if system is None:
        model = cfg.get("model", "analytic_x")
        if model not in ("analytic_x", "analytic_d2"):
            raise UsageError(f"config model {model!r} is not an analytic model")
        return model
    return "analytic_x" if System.parse(system) is System.X_HALF_HALF else "analytic_d2"


def _cmd_quadrature(args, cfg):
    g_ell = _pick(args, cfg, "g_ell", "quadrature.g_ell", 5.0)
    alpha_ell = _pick(args, cfg, "alpha_ell", "quadrature.alpha_ell", 0.0)
    points = _pick(args, cfg, "points", "quadrature.points", 181)
    QuadratureGeometry(g_ell, alpha_ell)
    chi, var = variance_table(g_ell, alpha_ell, points)
    columns = ["chi", "variance"]
    rows = [{"chi": float(c), "variance": float(v)} for c, v in zip(chi, var)]
    if args.mc_samples:
        if args.mc_samples < 2:
            raise UsageError("--mc-samples needs at least two samples")
        mc, err = monte_carlo_variance(g_ell, chi, args.mc_samples, alpha_ell, args.seed)
        columns += ["mc_variance", "mc_error"]
        for r, m, e in zip(rows, mc, err):
            r.update(mc_variance=float(m), mc_error=float(e))
    meta = {"command": "quadrature", "version": __version__,
            "parameters": {"g_ell": g_ell, "alpha_ell": alpha_ell, "points": points,
                           "mc_samples": args.mc_samples, "seed": args.seed}}
    return rows, meta, columns


def _cmd_sweep(model):
    def run(args, cfg):
        m = model or _analytic_model(args, cfg)
        sweep = run_sweep(_sweep_spec(args, cfg, m), threads=args.threads)
        return sweep.rows, sweep.metadata, None
    return run


def _model_of(args, cfg):
    return args.model or cfg.get("model", "analytic_x")


def _cmd_optimize(args, cfg):
    spec = _sweep_spec(args, cfg, _model_of(args, cfg))
    o = optimize_squeezing(spec)
    row = {"detuning_gamma0": o.detuning_gamma0, "density": o.density,
           "squeezing_db": o.squeezing_db, "g_over_alpha": o.g_over_alpha,
           "alpha_ell": o.alpha_ell, "g_ell": o.g_ell, "kappa": o.kappa}
    meta = {"command": "optimize", "model": spec.model, "version": __version__}
    return [row], meta, list(row)


def _cmd_kappa_scan(args, cfg):
    model = _model_of(args, cfg)
    lo = _pick(args, cfg, "kappa_start", "kappa_scan.start", 1e3 if model != "dm" else 1e4)
    hi = _pick(args, cfg, "kappa_stop", "kappa_scan.stop", 1e9 if model != "dm" else 1e7)
    n = _pick(args, cfg, "kappa_points", "kappa_scan.points", 13)
    if not (0 < lo < hi) or n < 2:
        raise UsageError("kappa range must satisfy 0 < start < stop with at least two points")
    args.kappa = 1.0  # placeholder, replaced per point
    spec = _sweep_spec(args, cfg, model)
    rows = kappa_scan(spec, np.geomspace(lo, hi, n), threads=args.threads)
    meta = {"command": "kappa-scan", "model": model, "version": __version__,
            "parameters": {"start": lo, "stop": hi, "points": n}}
    return rows, meta, ["kappa", "detuning_gamma0", "squeezing_db", "flags"]


def _cmd_buffer(args, cfg):
    ex = EXAMPLE_BUFFER_GAS
    spec = BufferGasSpec(**{k: _pick(args, cfg, "bg_" + k, "buffer_gas." + k, getattr(ex, k))
                            for k in ("a1", "a2", "sigma", "v", "x")})
    gamma0 = _pick(args, cfg, "bg_gamma0", "buffer_gas.gamma0", EXAMPLE_GAMMA0)
    gamma_free = _pick(args, cfg, "bg_gamma_free", "buffer_gas.gamma_free", EXAMPLE_GAMMA_FREE)
    n_b = _pick(args, cfg, "n_b", "buffer_gas.n_b")
    if args.scan:
        lo, hi, n = args.scan
        if not (0 < lo < hi) or n < 2 or n != int(n):
            raise UsageError("--scan needs 0 < LO < HI and an integer N >= 2")
        densities = np.geomspace(lo, hi, int(n))
        what = "scan"
    elif n_b is not None:
        densities = [n_b]
        what = "point"
    else:
        densities = [optimize_buffer_density(spec, gamma0, gamma_free)[0]]
        what = "optimum"
    rows = []
    for nb in densities:
        r = buffer_rates(spec, gamma0, gamma_free, float(nb))
        rows.append({"n_b": float(nb), "gamma_prime": r.gamma_prime,
                     "gamma0_prime": r.gamma0_prime, "kappa_ratio": r.kappa_ratio})
    meta = {"command": "buffer", "mode": what, "version": __version__,
            "parameters": {"a1": spec.a1, "a2": spec.a2, "sigma": spec.sigma, "v": spec.v,
                           "x": spec.x, "gamma0": gamma0, "gamma_free": gamma_free}}
    return rows, meta, ["n_b", "gamma_prime", "gamma0_prime", "kappa_ratio"]


COMMANDS = {"quadrature": _cmd_quadrature, "analytic": _cmd_sweep(None),
            "dm": _cmd_sweep("dm"), "optimize": _cmd_optimize,
            "kappa-scan": _cmd_kappa_scan, "buffer": _cmd_buffer}


def _fail(code, message):
    print(f"srsqueeze: error: {message}", file=sys.stderr)
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        cfg = load_config(args.config) if args.config else Config({})
        rows, meta, columns = COMMANDS[args.command](args, cfg)
        kw = {"columns": columns} if columns else {}
        emit(rows, args.format, args.output, meta, **kw)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc)
    except ConvergenceError as exc:
        return _fail(EXIT_NUMERIC, exc)
    except (DomainError, UsageError) as exc:
        return _fail(EXIT_USAGE, exc)
    except BrokenPipeError:
        return 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
