"""Result rows, validity flags and CSV/JSON emission."""

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from math import log10

from .errors import ConfigError

FLAGS = frozenset({"g_over_alpha_low", "kappa_regime", "se_large", "doppler_unconverged"})
COLUMNS = ("detuning_gamma0", "alpha_ell", "g_ell", "squeezing_db", "flags")

# validity window of the optimum-length squeezing formula
MIN_G_ELL = 10.0
MAX_ALPHA_ELL = 0.1
MIN_G_OVER_ALPHA = 10.0
MAX_SE_ELL = 0.1


@dataclass(frozen=True)
class ResultRow:
    detuning_gamma0: float
    alpha_ell: float
    g_ell: float
    squeezing_db: float
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "flags", frozenset(self.flags))
        unknown = self.flags - FLAGS
        if unknown:
            raise ValueError(f"unknown flags {sorted(unknown)}")

    def as_dict(self):
        return {"detuning_gamma0": self.detuning_gamma0, "alpha_ell": self.alpha_ell,
                "g_ell": self.g_ell, "squeezing_db": self.squeezing_db,
                "flags": sorted(self.flags)}


def squeezing_db(g, alpha):
    """10 log10 of (|g|/alpha)^(1/3)/sqrt(3); NaN where it is undefined."""
    if not (alpha > 0) or g == 0 or not math.isfinite(g):
        return math.nan
    # in logs, so that tiny or huge ratios do not under- or overflow
    return 10.0 / 3.0 * (log10(abs(g)) - log10(alpha)) - 5.0 * log10(3.0)


def validity_flags(g_ell, alpha_ell, se_ell=0.0):
    flags = set()
    ok = (math.isfinite(g_ell) and math.isfinite(alpha_ell) and abs(g_ell) >= MIN_G_ELL
          and alpha_ell <= MAX_ALPHA_ELL and alpha_ell > 0
          and abs(g_ell) / alpha_ell >= MIN_G_OVER_ALPHA)
    if not ok:
        flags.add("g_over_alpha_low")
    if math.isfinite(se_ell) and abs(se_ell) > MAX_SE_ELL:
        flags.add("se_large")
    return flags


def make_row(detuning_gamma0, alpha, g, length, se_rate=0.0, extra=()):
    a_l, g_l = alpha * length, g * length
    flags = validity_flags(g_l, a_l, se_rate * length) | set(extra)
    return ResultRow(float(detuning_gamma0), float(a_l), float(g_l),
                     squeezing_db(g, alpha), frozenset(flags))


def _num(x):
    return "nan" if isinstance(x, float) and math.isnan(x) else repr(float(x))


def format_csv(rows, columns=COLUMNS):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        d = r.as_dict() if hasattr(r, "as_dict") else r
        out = []
        for c in columns:
            v = d[c]
            if c == "flags":
                out.append(";".join(sorted(v)))
            elif isinstance(v, (int, float)) and not isinstance(v, bool):
                out.append(_num(v))
            else:
                out.append(str(v))
        w.writerow(out)
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (set, frozenset)):
        return sorted(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def format_json(rows, metadata=None):
    data = {"metadata": _jsonable(metadata or {}),
            "rows": [_jsonable(r.as_dict() if hasattr(r, "as_dict") else dict(r))
                     for r in rows]}
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


def emit(rows, fmt="csv", path=None, metadata=None, columns=COLUMNS):
    """Write ``rows`` as CSV or JSON to ``path`` (stdout if None or '-')."""
    if fmt == "csv":
        text = format_csv(rows, columns)
    elif fmt == "json":
        text = format_json(rows, metadata)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write output: {exc.strerror}", path) from None
    return text


def rows_from_json(text):
    """Inverse of :func:`format_json` for ResultRow tables: (rows, metadata)."""
    data = json.loads(text)
    rows = []
    for d in data["rows"]:
        vals = {k: (math.nan if d[k] is None else d[k]) for k in COLUMNS[:-1]}
        rows.append(ResultRow(**vals, flags=frozenset(d["flags"])))
    return rows, data["metadata"]
