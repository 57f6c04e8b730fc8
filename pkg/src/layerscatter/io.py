"""CSV and JSON input/output, and profile descriptors."""

from __future__ import annotations

import hashlib
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .media import ImpedanceProfile, Interval, StepMedium

CSV_HEADERS = {
    "profile": ("x", "zeta"),
    "data": ("t", "d"),
    "spectrum": ("omega", "re", "im"),
    "apseries": ("lambda", "re", "im"),
    "alpha": ("x", "alpha"),
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "layerscatter run report",
    "type": "object",
    "required": ["command", "version", "config", "config_hash", "results"],
    "properties": {
        "command": {"type": "string"},
        "version": {"type": "string"},
        "config": {"type": "object"},
        "config_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "wall_time": {"type": "number", "minimum": 0},
        "results": {"type": "object"},
        "identity": {
            "type": "object",
            "required": ["lhs", "rhs", "gap"],
            "properties": {
                "lhs": {"type": "number"},
                "rhs": {"type": "number"},
                "gap": {"type": "number", "minimum": 0},
            },
        },
    },
}


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def csv_text(columns, header) -> str:
    """Columns as comma separated text, 17 significant digits, LF line ends."""
    cols = [np.asarray(c).reshape(-1) for c in columns]
    if len(cols) != len(header):
        raise ConfigError("one header name per column")
    if len({c.size for c in cols}) > 1:
        raise ConfigError("columns differ in length")
    buf = _io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*cols):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, columns, header) -> None:
    text = csv_text(columns, header)
    if path is None or str(path) == "-":
        import sys
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write(text)


def complex_columns(first, values):
    v = np.asarray(values, dtype=complex)
    return [first, v.real, v.imag]


def read_csv(path, header=None):
    """Columns of a CSV written by ``write_csv``; checks the header if given."""
    with open(path, encoding="ascii") as fh:
        first = fh.readline().strip()
        names = tuple(s.strip() for s in first.split(","))
        if header is not None and names != tuple(header):
            raise ConfigError(f"{path}: expected header {','.join(header)}, got {first}")
        try:
            arr = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    if arr.size == 0:
        arr = np.zeros((0, len(names)))
    if arr.shape[1] != len(names):
        raise ConfigError(f"{path}: rows do not match the header")
    return [arr[:, k].copy() for k in range(arr.shape[1])]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _plain(obj):
    """JSON-safe copy: numpy scalars and arrays to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def config_hash(config: dict) -> str:
    blob = json.dumps(_plain(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def make_report(command: str, config: dict, results: dict, wall_time: float | None = None,
                identity: tuple | None = None) -> dict:
    from . import __version__
    rep = {
        "command": command,
        "version": __version__,
        "config": _plain(config),
        "config_hash": config_hash(config),
        "results": _plain(results),
    }
    if wall_time is not None:
        rep["wall_time"] = float(wall_time)
    if identity is not None:
        lhs, rhs = float(identity[0]), float(identity[1])
        rep["identity"] = {"lhs": lhs, "rhs": rhs, "gap": abs(lhs - rhs)}
    return rep


def write_report(path, report: dict) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path is None:
        return
    if str(path) == "-":
        import sys
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# profile descriptors
# ---------------------------------------------------------------------------


# older name of the chirp profile, still accepted on the command line
_ALIASES = {"paper53": "chirp"}


def parse_floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def parse_profile(desc: str, x0: float | None = None, x1: float | None = None):
    """Build a medium from a descriptor string.

    ``const[:value]``, ``exp:alpha0``, ``chirp[:a,b,c,d]``, a path
    to a ``x,zeta`` CSV of uniform samples, or a path to a JSON object such as
    ``{"kind": "step", "x0": 0, "x1": 3, "jumps": [1, 2], "values": [1, 2, 1]}``
    (``"reflectivities"`` may replace ``"values"``). Step descriptions give a
    ``StepMedium``; everything else an ``ImpedanceProfile``.
    """
    if not isinstance(desc, str) or not desc:
        raise ConfigError("empty profile descriptor")
    name, _, arg = desc.partition(":")
    name = _ALIASES.get(name, name)
    lo = 0.0 if x0 is None else float(x0)
    if name == "const":
        hi = 1.0 if x1 is None else float(x1)
        return ImpedanceProfile.constant(float(arg) if arg else 1.0, lo, hi)
    if name == "exp":
        hi = 1.0 if x1 is None else float(x1)
        vals = parse_floats(arg)
        if len(vals) != 1:
            raise ConfigError("exp needs one rate, e.g. exp:0.05")
        return ImpedanceProfile.exponential(vals[0], lo, hi)
    if name == "chirp":
        hi = 30.0 if x1 is None else float(x1)
        vals = parse_floats(arg) if arg else []
        if vals and len(vals) != 4:
            raise ConfigError("chirp takes four parameters a,b,c,d")
        return ImpedanceProfile.chirp(lo, hi, *vals)
    path = Path(desc)
    if not path.exists():
        raise ConfigError(f"unknown profile descriptor {desc!r}")
    if path.suffix == ".json":
        return profile_from_json(json.loads(path.read_text()), x0, x1)
    x, z = read_csv(path, CSV_HEADERS["profile"])
    return ImpedanceProfile.from_samples(x, z)


def profile_from_json(obj: dict, x0=None, x1=None):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("JSON profile needs a 'kind'")
    kind = _ALIASES.get(obj["kind"], obj["kind"])
    lo = float(obj.get("x0", 0.0) if x0 is None else x0)
    if kind == "step":
        hi = float(obj.get("x1", 1.0) if x1 is None else x1)
        jumps = tuple(float(v) for v in obj.get("jumps", ()))
        iv = Interval(lo, hi)
        if "reflectivities" in obj:
            return StepMedium.from_reflectivities(iv, jumps, np.asarray(obj["reflectivities"]),
                                                  float(obj.get("zeta0", 1.0)),
                                                  removable=False)
        return StepMedium(iv, jumps, tuple(float(v) for v in obj["values"]))
    params = obj.get("params", {})
    if kind == "const":
        return ImpedanceProfile.constant(float(params.get("value", 1.0)), lo,
                                         float(obj.get("x1", 1.0) if x1 is None else x1))
    if kind == "exp":
        return ImpedanceProfile.exponential(float(params["alpha0"]), lo,
                                            float(obj.get("x1", 1.0) if x1 is None else x1),
                                            float(params.get("zeta0", 1.0)))
    if kind == "chirp":
        return ImpedanceProfile.chirp(lo, float(obj.get("x1", 30.0) if x1 is None else x1),
                                      **{k: float(v) for k, v in params.items()})
    raise ConfigError(f"unknown profile kind {kind!r}")
