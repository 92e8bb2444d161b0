"""JSON configuration with unit-checked physical quantities.

A quantity is either a plain number, taken to be in SI units (rates in rad/s),
or a string ``"<value> <unit>"``. Each key has a fixed dimension and only the
units of that dimension are accepted, so a config cannot silently mix e.g.
cyclic and angular frequencies: rates must be given as ``rad/s``, ``1/s`` or
``2pi*MHz``-style units; a bare ``MHz`` is rejected.
"""

import json
import re
from math import pi

from .errors import ConfigError

E_CHARGE = 1.602176634e-19
BOHR_RADIUS = 5.29177210903e-11
AMU = 1.66053906660e-27

_ANGULAR = {"rad/s": 1.0, "1/s": 1.0, "s^-1": 1.0}
for _p, _f in (("", 1.0), ("k", 1e3), ("M", 1e6), ("G", 1e9)):
    _ANGULAR[f"2pi*{_p}Hz"] = 2 * pi * _f

UNITS = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "rate": _ANGULAR,
    "density": {"m^-3": 1.0, "cm^-3": 1e6},
    "power": {"W": 1.0, "mW": 1e-3},
    "area": {"m^2": 1.0, "cm^2": 1e-4},
    "speed": {"m/s": 1.0, "cm/s": 1e-2},
    "rate_constant": {"m^3/s": 1.0, "cm^3/s": 1e-6},
    "temperature": {"K": 1.0},
    "mass": {"kg": 1.0, "amu": AMU},
    "dipole": {"C*m": 1.0, "ea0": E_CHARGE * BOHR_RADIUS},
    "intensity": {"W/m^2": 1.0, "mW/cm^2": 10.0},
}

_CYCLIC = re.compile(r"^[kMG]?Hz$")
_QTY = re.compile(r"^\s*([-+0-9.eE]+)\s*(\S*)\s*$")

# dotted key -> dimension ("number", "int", "str" for untyped entries)
SCHEMA = {
    "model": "str",
    "kappa": "number",
    "cell_length": "length",
    "transition.system": "str",
    "transition.gamma": "rate",
    "transition.gamma0": "rate",
    "transition.wavelength": "length",
    "transition.density": "density",
    "transition.dipole": "dipole",
    "beam.power": "power",
    "beam.diameter": "length",
    "detuning.start": "number",
    "detuning.stop": "number",
    "detuning.points": "int",
    "rubidium.line": "str",
    "rubidium.F": "number",
    "rubidium.doppler_width": "rate",
    "rubidium.temperature": "temperature",
    "rubidium.density": "density",
    "rubidium.hyperfine_intensity_limit": "intensity",
    "rubidium.atoms": "str",
    "buffer_gas.n_b": "density",
    "buffer_gas.a1": "rate_constant",
    "buffer_gas.a2": "rate_constant",
    "buffer_gas.sigma": "area",
    "buffer_gas.v": "speed",
    "buffer_gas.x": "length",
    "buffer_gas.gamma0": "rate",
    "buffer_gas.gamma_free": "rate",
    "kappa_scan.start": "number",
    "kappa_scan.stop": "number",
    "kappa_scan.points": "int",
    "quadrature.g_ell": "number",
    "quadrature.alpha_ell": "number",
    "quadrature.points": "int",
}


def parse_quantity(value, dimension, where="value"):
    """Convert ``value`` to SI in ``dimension``; raises ConfigError on mismatch."""
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a {dimension} quantity, got a boolean")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where}: expected a number or '<value> <unit>' string")
    m = _QTY.match(value)
    if not m:
        raise ConfigError(f"{where}: cannot parse quantity {value!r}")
    try:
        number = float(m.group(1))
    except ValueError:
        raise ConfigError(f"{where}: cannot parse number in {value!r}") from None
    unit = m.group(2)
    if unit == "":
        return number
    table = UNITS[dimension]
    if unit in table:
        return number * table[unit]
    if dimension == "rate" and _CYCLIC.match(unit):
        raise ConfigError(f"{where}: ambiguous rate unit {unit!r}; write 2pi*{unit} "
                          "for a cyclic frequency or rad/s")
    for dim, tab in UNITS.items():
        if unit in tab:
            raise ConfigError(f"{where}: unit {unit!r} is a {dim}, expected {dimension}")
    raise ConfigError(f"{where}: unknown unit {unit!r} for {dimension}")


def _line_of(text, keys):
    """1-based line where the nested key path starts, best effort."""
    pos = 0
    for k in keys:
        i = text.find(f'"{k}"', pos)
        if i < 0:
            return None
        pos = i + 1
    return text.count("\n", 0, pos) + 1


class Config:
    """Validated configuration; ``get`` returns SI values."""

    def __init__(self, data, text="", path=None):
        self.raw = data
        self.text = text
        self.path = path
        self._values = {}
        self._lint()

    def _err(self, msg, keys=()):
        return ConfigError(msg, self.path, _line_of(self.text, keys) if keys else None)

    def _lint(self):
        if not isinstance(self.raw, dict):
            raise self._err("top level must be an object")

        def walk(obj, prefix):
            for k, v in obj.items():
                dotted = f"{prefix}{k}"
                if isinstance(v, dict) and dotted not in SCHEMA:
                    walk(v, dotted + ".")
                    continue
                keys = dotted.split(".")
                if dotted not in SCHEMA:
                    raise self._err(f"unknown key {dotted!r}", keys)
                kind = SCHEMA[dotted]
                try:
                    if kind == "str":
                        if not isinstance(v, str):
                            raise ConfigError(f"{dotted}: expected a string")
                        self._values[dotted] = v
                    elif kind == "int":
                        if isinstance(v, bool) or not isinstance(v, int):
                            raise ConfigError(f"{dotted}: expected an integer")
                        self._values[dotted] = v
                    elif kind == "number":
                        self._values[dotted] = _plain_number(v, dotted)
                    else:
                        self._values[dotted] = parse_quantity(v, kind, dotted)
                except ConfigError as exc:
                    raise self._err(str(exc), keys) from None

        walk(self.raw, "")

    def get(self, key, default=None):
        return self._values.get(key, default)

    def __contains__(self, key):
        return key in self._values

    def section(self, name):
        pre = name + "."
        return {k[len(pre):]: v for k, v in self._values.items() if k.startswith(pre)}


def _plain_number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        if isinstance(v, str):
            try:
                return float(v)
            except ValueError:
                pass
        raise ConfigError(f"{where}: expected a dimensionless number")
    return float(v)


def load_config(path):
    """Read and lint a JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    return Config(data, text, path)
