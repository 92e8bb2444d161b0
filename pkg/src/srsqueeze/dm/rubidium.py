"""Alkali D-line data and hyperfine-resolved response scans (87Rb bundled).

The atomic data file stores the reduced dipole element in the convention
``<J m|d_q|J' m'> = <J||d||J'> <J m|J' m' 1 q>`` (no 1/sqrt(2J+1)); the
package convention used for saturation parameters is
``d^2 = (2 J_g + 1) <J_g||d||J_e>^2``, which satisfies
``d^2 = 3 pi eps0 hbar (2 J_e + 1) gamma0 / k^3``.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from math import pi, sqrt

from ..config import parse_quantity
from ..errors import ConfigError, DomainError, DopplerConvergenceError
from ..rows import ResultRow, make_row
from ..transitions import C_LIGHT, EPS0, HBAR, K_B, field_amplitude, transit_rate
from .levels import hyperfine_scheme
from .liouville import DriveSpec
from .response import medium_response

# mW/cm^2 above which the ground hyperfine levels are no longer resolved
DEFAULT_HYPERFINE_LIMIT = 1.5e4 * 10.0  # W/m^2


@dataclass(frozen=True)
class DLine:
    name: str
    Jg: float
    Je: float
    wavelength: float
    gamma0: float
    dipole: float  # package convention, C m
    excited: dict  # F' -> energy offset from the line centroid (rad/s)


@dataclass(frozen=True)
class AtomData:
    isotope: str
    nuclear_spin: float
    mass: float
    ground: dict  # F -> energy offset (rad/s)
    lines: dict = field(default_factory=dict)

    def line(self, name):
        try:
            return self.lines[name]
        except KeyError:
            raise ConfigError(f"line {name!r} not in atomic data for {self.isotope}") from None


def _req(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ConfigError(f"missing {where}{key!r} in atomic data")
    return obj[key]


def parse_atom_data(data, source="atomic data"):
    """Build :class:`AtomData` from a decoded JSON object."""
    try:
        I = float(_req(data, "nuclear_spin", ""))
        mass = parse_quantity(_req(data, "mass", ""), "mass", "mass")
        gsec = _req(data, "ground", "")
        Jg = float(_req(gsec, "J", "ground."))
        ground = {float(F): parse_quantity(v, "rate", f"ground.levels.{F}")
                  for F, v in _req(gsec, "levels", "ground.").items()}
        lines = {}
        for name, ln in _req(data, "lines", "").items():
            w = f"lines.{name}."
            Je = float(_req(ln, "Je", w))
            red = parse_quantity(_req(ln, "reduced_dipole", w), "dipole", w + "reduced_dipole")
            lines[name] = DLine(
                name, Jg, Je,
                parse_quantity(_req(ln, "wavelength", w), "length", w + "wavelength"),
                parse_quantity(_req(ln, "gamma0", w), "rate", w + "gamma0"),
                sqrt(2 * Jg + 1) * red,
                {float(F): parse_quantity(v, "rate", f"{w}levels.{F}")
                 for F, v in _req(ln, "levels", w).items()})
        if not ground or not lines:
            raise ConfigError("atomic data needs ground levels and at least one line")
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: malformed atomic data ({exc})") from None
    return AtomData(str(data.get("isotope", "")), I, mass, ground, lines)


def load_atom_data(path=None):
    """Load atomic data from ``path``; the bundled 87Rb set when ``path`` is None."""
    if path is None:
        text = resources.files(__package__).joinpath("data/rb87.json").read_text()
        source = "rb87.json"
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read atomic data: {exc.strerror}", path) from None
        source = str(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", source, exc.lineno) from None
    return parse_atom_data(data, source)



def doppler_width(temperature, mass, wavelength):
    """1/e half-width k u of the Doppler-shift distribution (rad/s)."""
    return 2 * pi / wavelength * sqrt(2 * K_B * temperature / mass)


def temperature_from_doppler(width, mass, wavelength):
    """Inverse of :func:`doppler_width`."""
    u = width * wavelength / (2 * pi)
    return mass * u ** 2 / (2 * K_B)


def rabi_frequency(dipole, amplitude):
    return dipole * amplitude / HBAR


@dataclass
class LineSetup:
    """Everything needed to evaluate one hyperfine-resolved D-line response."""

    scheme: object
    line: DLine
    rabi: float
    gamma: float
    kappa: float
    doppler_width: float
    density: float
    intensity: float
    above_limit: bool = False

    def response(self, detuning, **kw):
        drive = DriveSpec(self.rabi, detuning)
        return medium_response(self.scheme, drive, self.density, self.doppler_width, **kw)


def line_setup(atoms, line, F, power, beam_diameter, density, doppler=None,
               temperature=None, gamma=None, kappa=None,
               intensity_limit=DEFAULT_HYPERFINE_LIMIT, check_limit=True):
    """Assemble the level scheme and drive strength for a D-line scan.

    ``doppler`` (rad/s) and ``temperature`` determine each other; the transit
    relaxation rate v_mean / beam_diameter follows from the temperature unless
    ``gamma`` is given. If ``kappa`` is given it sets the drive strength and
    ``power`` is ignored.
    """
    ln = atoms.line(line)
    F = float(F)
    if F not in atoms.ground:
        raise ConfigError(f"ground level F={F:g} not in atomic data")
    if not ln.excited:
        raise ConfigError(f"no excited hyperfine levels for {line}")
    if doppler is None and temperature is None:
        raise DomainError("give a Doppler width or a temperature")
    if temperature is None:
        temperature = temperature_from_doppler(doppler, atoms.mass, ln.wavelength)
    if doppler is None:
        doppler = doppler_width(temperature, atoms.mass, ln.wavelength)
    if gamma is None:
        gamma = transit_rate(temperature, atoms.mass, beam_diameter)
    if kappa is None:
        rabi = rabi_frequency(ln.dipole, field_amplitude(power, beam_diameter))
        kappa = rabi ** 2 / (gamma * ln.gamma0)
    else:
        if kappa < 0:
            raise DomainError("kappa must be non-negative")
        rabi = sqrt(kappa * gamma * ln.gamma0)
    amplitude = rabi * HBAR / ln.dipole
    intensity = 0.5 * C_LIGHT * EPS0 * amplitude ** 2
    above = intensity > intensity_limit
    if check_limit and above:
        raise DomainError(
            f"intensity {intensity / 10:.3g} mW/cm^2 exceeds the hyperfine-resolution "
            f"limit {intensity_limit / 10:.3g} mW/cm^2")
    scheme = hyperfine_scheme(atoms.nuclear_spin, ln.Jg, ln.Je, F, ln.excited,
                              gamma, ln.gamma0, wavelength=ln.wavelength)
    return LineSetup(scheme, ln, rabi, gamma, kappa, doppler, density, intensity, above)


def scan_row(setup, detuning, cell_length, order=64, max_order=256):
    """ResultRow at one detuning (rad/s); Doppler non-convergence is flagged."""
    extra = {"kappa_regime"} if setup.above_limit else set()
    try:
        r = setup.response(float(detuning), order=order, max_order=max_order)
    except DopplerConvergenceError:
        extra.add("doppler_unconverged")
        nan = float("nan")
        return ResultRow(detuning / setup.line.gamma0, nan, nan, nan,
                         frozenset(extra | {"g_over_alpha_low"}))
    return make_row(detuning / setup.line.gamma0, r.alpha, r.g, cell_length, r.se_rate, extra)


def rb_d_line_scan(setup, detunings, cell_length, order=64, max_order=256, threads=1):
    """ResultRows over ``detunings`` (rad/s from the F -> excited centroid)."""
    args = [float(d) for d in detunings]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda d: scan_row(setup, d, cell_length, order, max_order),
                                 args))
    return [scan_row(setup, d, cell_length, order, max_order) for d in args]
