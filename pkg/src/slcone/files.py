"""Spectrum files and moduli configuration files.

Spectrum file (JSON, fields in this order)::

    {"m": 3, "b0": 1, "dim_g": 2, "complete_up_to": [6, 1],
     "entries": [[0, 1, 1], [2, 1, 6], [6, 1, 6]]}

Rationals are ``[numerator, denominator]`` integer pairs; floats are
rejected.  :func:`dumps_spectrum` writes the canonical byte form.

Configuration file (JSON)::

    {"m": 3, "family_dim": 0, "transverse": false,
     "topology": {"b1_x_prime": 7, "restriction_rank": 3},
     "points": [{"cone": "hl"},
                {"cone": {"spectrum": "link.json"}},
                {"components": ["hl", "plane"], "dim_g": 0}]}

A cone is ``"hl"`` (the built-in Harvey-Lawson cone for the configuration's
m) or an object with ``"spectrum"`` (a path relative to the configuration
file) and optional ``"b0"``, ``"dim_g"``, ``"label"`` overriding the file.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ConfigError
from .moduli import MultiEndCone, Plane, SingularConfig, TopologyData
from .spectrum import ConeDescriptor, LinkSpectrum

__all__ = [
    "dumps_spectrum",
    "loads_spectrum",
    "read_spectrum",
    "write_spectrum",
    "spectrum_document",
    "load_config",
    "parse_config",
]


def _pair(q: Fraction) -> list[int]:
    return [q.numerator, q.denominator]


def spectrum_document(spec: LinkSpectrum, b0: int, dim_g: int) -> dict:
    return {
        "m": spec.m,
        "b0": b0,
        "dim_g": dim_g,
        "complete_up_to": _pair(spec.complete_up_to),
        "entries": [[lam.numerator, lam.denominator, k] for lam, k in spec.entries],
    }


def dumps_spectrum(spec: LinkSpectrum, b0: int, dim_g: int) -> str:
    """Canonical text of a spectrum file, newline terminated."""
    return json.dumps(spectrum_document(spec, b0, dim_g)) + "\n"


def write_spectrum(path, spec: LinkSpectrum, b0: int, dim_g: int) -> None:
    Path(path).write_text(dumps_spectrum(spec, b0, dim_g), encoding="utf-8")


def _int(doc: dict, key: str, where: str, minimum: int | None = 0) -> int:
    if key not in doc:
        raise ConfigError(f"{where}: missing field '{key}'")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: field '{key}' must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}: field '{key}' must be >= {minimum}, got {value}")
    return value


def _rational(value: Any, where: str) -> Fraction:
    ok = (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, int) and not isinstance(v, bool) for v in value)
        and value[1] > 0
    )
    if not ok:
        raise ConfigError(f"{where}: expected a [numerator, denominator] pair, got {value!r}")
    return Fraction(value[0], value[1])


def _spectrum_from_doc(doc: Any, where: str) -> tuple[LinkSpectrum, int, int]:
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: spectrum document must be a JSON object")
    m = _int(doc, "m", where, minimum=3)
    b0 = _int(doc, "b0", where, minimum=1)
    dim_g = _int(doc, "dim_g", where)
    if "complete_up_to" not in doc:
        raise ConfigError(f"{where}: missing field 'complete_up_to'")
    bound = _rational(doc["complete_up_to"], f"{where}: complete_up_to")
    raw = doc.get("entries")
    if not isinstance(raw, list):
        raise ConfigError(f"{where}: field 'entries' must be a list")
    entries = []
    for i, row in enumerate(raw):
        if not (isinstance(row, list) and len(row) == 3):
            raise ConfigError(f"{where}: entries[{i}] must be [num, den, mult]")
        lam = _rational(row[:2], f"{where}: entries[{i}]")
        mult = row[2]
        if isinstance(mult, bool) or not isinstance(mult, int):
            raise ConfigError(f"{where}: entries[{i}] multiplicity must be an integer")
        entries.append((lam, mult))
    try:
        spec = LinkSpectrum(m, tuple(entries), bound)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    if dim_g > m * m - 1:
        raise ConfigError(f"{where}: field 'dim_g' must be <= {m * m - 1}")
    return spec, b0, dim_g


def loads_spectrum(text: str, where: str = "spectrum") -> tuple[LinkSpectrum, int, int]:
    """Parse a spectrum file; returns ``(spectrum, b0, dim_g)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{where}: invalid JSON: {exc}") from None
    return _spectrum_from_doc(doc, where)


def read_spectrum(path) -> tuple[LinkSpectrum, int, int]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read spectrum file {path}: {exc}") from None
    return loads_spectrum(text, str(path))


def cone_from_file(path, *, b0=None, dim_g=None, label=None) -> ConeDescriptor:
    spec, file_b0, file_dim_g = read_spectrum(path)
    try:
        return ConeDescriptor(
            spec.m,
            file_b0 if b0 is None else b0,
            file_dim_g if dim_g is None else dim_g,
            spec,
            label or str(path),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _cone(doc: Any, m: int, base: Path, where: str, hl: dict) -> ConeDescriptor:
    if doc == "hl":
        return ConeDescriptor.harvey_lawson(m, **hl)
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: a cone is \"hl\" or an object with 'spectrum'")
    if doc.get("generator") == "hl":
        return ConeDescriptor.harvey_lawson(m, **hl)
    if "spectrum" not in doc or not isinstance(doc["spectrum"], str):
        raise ConfigError(f"{where}: field 'spectrum' must be a file path")
    b0 = _int(doc, "b0", where, minimum=1) if "b0" in doc else None
    dim_g = _int(doc, "dim_g", where) if "dim_g" in doc else None
    cone = cone_from_file(base / doc["spectrum"], b0=b0, dim_g=dim_g, label=doc.get("label"))
    if cone.m != m:
        raise ConfigError(f"{where}: spectrum has m={cone.m}, configuration has m={m}")
    return cone


def parse_config(doc: Any, base: Path = Path("."), *, threads: int = 1,
                 max_points: int | None = None) -> SingularConfig:
    """Build a :class:`SingularConfig` from a decoded configuration document."""
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    m = _int(doc, "m", "config", minimum=3)
    family_dim = _int(doc, "family_dim", "config") if "family_dim" in doc else 0
    transverse = doc.get("transverse", False)
    if not isinstance(transverse, bool):
        raise ConfigError("config: field 'transverse' must be true or false")
    topo = doc.get("topology", {})
    if not isinstance(topo, dict):
        raise ConfigError("config: field 'topology' must be an object")
    b1 = _int(topo, "b1_x_prime", "config.topology") if "b1_x_prime" in topo else 0
    rank = (
        _int(topo, "restriction_rank", "config.topology")
        if "restriction_rank" in topo else 0
    )
    if rank > b1:
        raise ConfigError(
            f"config.topology: field 'restriction_rank' ({rank}) exceeds b1_x_prime ({b1})"
        )
    raw_points = doc.get("points")
    if not isinstance(raw_points, list) or not raw_points:
        raise ConfigError("config: field 'points' must be a nonempty list")
    hl = {"threads": threads, "max_points": max_points}
    points = []
    for i, p in enumerate(raw_points):
        where = f"config.points[{i}]"
        if not isinstance(p, dict) or ("cone" in p) == ("components" in p):
            raise ConfigError(f"{where}: needs exactly one of 'cone' or 'components'")
        if "cone" in p:
            points.append(_cone(p["cone"], m, base, f"{where}.cone", hl))
            continue
        comps_doc = p["components"]
        if not isinstance(comps_doc, list) or not comps_doc:
            raise ConfigError(f"{where}: field 'components' must be a nonempty list")
        comps = [
            Plane(m) if c == "plane" else _cone(c, m, base, f"{where}.components[{j}]", hl)
            for j, c in enumerate(comps_doc)
        ]
        sym = _int(p, "dim_g", where) if "dim_g" in p else 0
        points.append(MultiEndCone(tuple(comps), sym))
    return SingularConfig(m, tuple(points), TopologyData(b1, rank), family_dim, transverse)


def load_config(path, *, threads: int = 1, max_points: int | None = None) -> SingularConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path}: invalid JSON: {exc}") from None
    return parse_config(doc, path.parent, threads=threads, max_points=max_points)
