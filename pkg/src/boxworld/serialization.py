"""File formats: system specs, tables, states, maps, vertex lists, Bell functionals.

Rationals are always written as ``"p/q"`` strings (``"p"`` when q == 1).
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Mapping

from boxworld.exact import RMatrix, RVector, format_rational, to_rational
from boxworld.polytope import PolytopeVRep
from boxworld.theory import SiteSpec, SystemSpec
from boxworld.transforms import LinearMap

BASIS_TAG = "canonical-v1"

__all__ = [
    "SpecError",
    "parse_system_spec",
    "load_system_spec",
    "dump_system_spec",
    "table_to_json",
    "table_from_json",
    "state_to_json",
    "state_from_json",
    "map_to_json",
    "map_from_json",
    "functional_to_json",
    "functional_from_json",
    "vrep_to_csv",
    "dumps",
]


class SpecError(ValueError):
    """Malformed input; ``field`` and ``line`` locate the problem when known."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(field)
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.message = message
        self.field = field
        self.line = line

    def to_json(self) -> dict:
        return {"error": "spec", "message": self.message, "field": self.field, "line": self.line}


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation, trailing newline)."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(exc.msg, line=exc.lineno) from None


def parse_system_spec(text: str) -> SystemSpec:
    """Validate ``{"sites": [{"outcomes": [K0, K1, ...]}, ...]}``."""
    data = _load_json(text)
    if not isinstance(data, dict) or "sites" not in data:
        raise SpecError("expected an object with a 'sites' list", field="sites")
    sites = data["sites"]
    if not isinstance(sites, list) or not sites:
        raise SpecError("need a non-empty list of sites", field="sites")
    out = []
    for i, site in enumerate(sites):
        if not isinstance(site, dict) or "outcomes" not in site:
            raise SpecError("site must be an object with an 'outcomes' list", field=f"sites[{i}]")
        outs = site["outcomes"]
        if not isinstance(outs, list) or not outs:
            raise SpecError("M < 1: need at least one measurement", field=f"sites[{i}].outcomes")
        for m, K in enumerate(outs):
            if not isinstance(K, int) or isinstance(K, bool):
                raise SpecError(f"outcome count must be an integer, got {K!r}", field=f"sites[{i}].outcomes[{m}]")
            if K < 2:
                raise SpecError(f"K(m) = {K} < 2", field=f"sites[{i}].outcomes[{m}]")
        out.append(SiteSpec(tuple(outs)))
    return SystemSpec(tuple(out))


def load_system_spec(path) -> SystemSpec:
    return parse_system_spec(Path(path).read_text())


def dump_system_spec(sys: SystemSpec) -> str:
    return dumps(sys.to_json())


# -- tables and functionals --------------------------------------------------


def _entries_to_json(T: Mapping, key: str) -> list[dict]:
    return [
        {"settings": list(ms), "outcomes": list(ks), key: format_rational(p)}
        for (ms, ks), p in sorted(T.items())
    ]


def _entries_from_json(data, key: str) -> dict:
    if not isinstance(data, list):
        raise SpecError("expected a list of entries")
    out = {}
    for i, e in enumerate(data):
        try:
            out[(tuple(e["settings"]), tuple(e["outcomes"]))] = to_rational(e[key])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"bad entry: {exc}", field=f"[{i}]") from None
    return out


def table_to_json(T: Mapping) -> list[dict]:
    return _entries_to_json(T, "p")


def table_from_json(data) -> dict:
    if isinstance(data, str):
        data = _load_json(data)
    return _entries_from_json(data, "p")


def functional_to_json(coefficients: Mapping) -> list[dict]:
    return _entries_to_json(coefficients, "c")


def functional_from_json(data) -> dict:
    if isinstance(data, str):
        data = _load_json(data)
    return _entries_from_json(data, "c")


# -- vectors and maps --------------------------------------------------------


def state_to_json(s) -> dict:
    return {"values": [format_rational(x) for x in s], "basis": BASIS_TAG}


def state_from_json(data) -> RVector:
    if isinstance(data, str):
        data = _load_json(data)
    if not isinstance(data, dict) or "values" not in data:
        raise SpecError("expected an object with a 'values' list", field="values")
    try:
        return RVector(data["values"])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(str(exc), field="values") from None


def map_to_json(T: LinearMap) -> dict:
    return {"matrix": [[format_rational(x) for x in row] for row in T.matrix], "basis": BASIS_TAG}


def map_from_json(data) -> LinearMap:
    if isinstance(data, str):
        data = _load_json(data)
    if data.get("basis", BASIS_TAG) != BASIS_TAG:
        raise SpecError(f"unsupported basis {data.get('basis')!r}", field="basis")
    return LinearMap(RMatrix(data["matrix"]))


def vrep_to_csv(V: PolytopeVRep) -> str:
    """One vertex per row: index, classification, then the state values."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "class"] + [f"v{j}" for j in range(V.system.dim)])
    for i, (v, pure) in enumerate(zip(V.vertices, V.pure_product)):
        w.writerow([i, "pure-product" if pure else "non-local"] + [format_rational(x) for x in v])
    return buf.getvalue()
