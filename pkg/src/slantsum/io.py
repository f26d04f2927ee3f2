"""JSON files for theories and fixed points, and plain-data conversions.

A theory file is {"vertices", "arrows", "v", "w", "theta"}; a fixed-point
file is {"theory": path or inline theory, "characters": {vertex: [monomial]}},
with monomial objects {"a": {"j.k": int}, "hbar": int or "p/2", "sign": +-1}.
Printing is canonical, so print(parse(x)) is a fixed point of parse then print.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Mapping

import jsonschema

from .fixedpoints import FixedPointData, validate_fixed_point
from .scalars import H, Q, Monomial, SchemaError, akey
from .series import TruncatedSeries
from .theory import QuiverGaugeTheory

__all__ = ["THEORY_SCHEMA", "POINT_SCHEMA", "theory_from_json", "theory_to_json",
           "monomial_from_json", "monomial_to_json", "point_from_json", "point_to_json",
           "load_theory", "load_point", "dump", "series_to_json", "half_from_json", "half_to_json"]

_HALF = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/2)?$"}]}

THEORY_SCHEMA = {
    "type": "object",
    "required": ["vertices", "arrows", "v", "w"],
    "additionalProperties": False,
    "properties": {
        "vertices": {"type": "array", "items": {"type": "string", "minLength": 1},
                     "uniqueItems": True},
        "arrows": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2,
                                              "items": {"type": "string"}}},
        "v": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "w": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "theta": {"oneOf": [{"enum": ["+1", "-1"]},
                            {"type": "object", "additionalProperties": {"enum": [1, -1]}}]},
    },
}

MONOMIAL_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "a": {"type": "object", "propertyNames": {"pattern": r"^.+\.\d+$"},
              "additionalProperties": {"type": "integer"}},
        "hbar": _HALF,
        "q": _HALF,
        "sign": {"enum": [1, -1]},
    },
}

POINT_SCHEMA = {
    "type": "object",
    "required": ["theory", "characters"],
    "additionalProperties": False,
    "properties": {
        "theory": {"oneOf": [{"type": "string"}, THEORY_SCHEMA]},
        "characters": {"type": "object",
                       "additionalProperties": {"type": "array", "items": MONOMIAL_SCHEMA}},
    },
}


def _validate(obj, schema, what: str) -> None:
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as err:
        path = "/".join(str(p) for p in err.absolute_path)
        raise SchemaError(f"{what}: {err.message}" + (f" at {path}" if path else "")) from None


# theories ----------------------------------------------------------------------

def theory_from_json(obj: Mapping) -> QuiverGaugeTheory:
    _validate(obj, THEORY_SCHEMA, "theory")
    verts = obj["vertices"]
    for name in ("v", "w"):
        unknown = set(obj[name]) - set(verts)
        if unknown:
            raise SchemaError(f"theory: {name} mentions undeclared vertices {sorted(unknown)}")
    theta = obj.get("theta", "+1")
    if isinstance(theta, str):
        theta = int(theta)
    elif set(theta) - set(verts):
        raise SchemaError(f"theory: theta mentions undeclared vertices {sorted(set(theta) - set(verts))}")
    try:
        return QuiverGaugeTheory(verts, obj["arrows"], obj["v"], obj["w"], theta)
    except ValueError as err:
        raise SchemaError(f"theory: {err}") from None


def theory_to_json(T: QuiverGaugeTheory) -> dict:
    if len(set(T.theta)) == 1:
        theta = "+1" if T.theta[0] == 1 else "-1"
    else:
        theta = dict(zip(T.vertices, T.theta))
    return {"vertices": list(T.vertices), "arrows": [list(a) for a in T.arrows],
            "v": T.vd(), "w": T.wd(), "theta": theta}


# monomials ---------------------------------------------------------------------

def half_from_json(x) -> int:
    """Doubled exponent from an int or a "p/2" string."""
    if isinstance(x, int):
        return 2 * x
    m = re.fullmatch(r"(-?\d+)(/2)?", x)
    if not m:
        raise SchemaError(f"bad half-integer {x!r}")
    return int(m.group(1)) * (1 if m.group(2) else 2)


def half_to_json(e2: int):
    return e2 // 2 if e2 % 2 == 0 else f"{e2}/2"


def monomial_from_json(obj: Mapping) -> Monomial:
    _validate(obj, MONOMIAL_SCHEMA, "monomial")
    exps = {}
    for key, e in obj.get("a", {}).items():
        j, _, k = key.rpartition(".")
        exps[akey(j, int(k))] = e
    if "hbar" in obj:
        exps[H] = half_from_json(obj["hbar"])
    if "q" in obj:
        exps[Q] = half_from_json(obj["q"])
    return Monomial.make(exps, obj.get("sign", 1))


def monomial_to_json(m: Monomial) -> dict:
    a, out = {}, {}
    for k, e in m.exps:
        if k[0] == "a":
            a[f"{k[1]}.{k[2]}"] = e
        elif k[0] == "z":
            raise SchemaError("fixed-point weights carry no Kahler variables")
    out["a"] = a
    out["hbar"] = half_to_json(m.h2)
    if m.q2:
        out["q"] = half_to_json(m.q2)
    out["sign"] = m.sign
    return out


# fixed points ------------------------------------------------------------------

def point_from_json(obj: Mapping, base: Path | None = None, validate: bool = True) -> FixedPointData:
    """Parse a fixed-point object; a string theory is a path relative to ``base``."""
    _validate(obj, POINT_SCHEMA, "fixed point")
    th = obj["theory"]
    if isinstance(th, str):
        T = load_theory((base or Path(".")) / th)
    else:
        T = theory_from_json(th)
    chars = {}
    for u, ms in obj["characters"].items():
        if u not in T.vertices:
            raise SchemaError(f"fixed point: characters for undeclared vertex {u}")
        chars[u] = [monomial_from_json(m) for m in ms]
    declared = {akey(j, k) for j, k in T.framing_slots()}
    for ms in chars.values():
        for m in ms:
            for k, _ in m.exps:
                if k[0] == "a" and k not in declared:
                    raise SchemaError(f"fixed point: undeclared framing variable a[{k[1]},{k[2]}]")
    try:
        p = FixedPointData.make(T, chars)
    except ValueError as err:
        raise SchemaError(f"fixed point: {err}") from None
    if validate:
        bad = {k: v for k, v in validate_fixed_point(p).items() if v}
        if bad:
            raise SchemaError(f"fixed point fails validation: {bad}")
    return p


def point_to_json(p: FixedPointData, theory_ref: str | None = None) -> dict:
    return {"theory": theory_ref if theory_ref is not None else theory_to_json(p.theory),
            "characters": {u: [monomial_to_json(m) for m in c]
                           for u, c in zip(p.theory.vertices, p.chars)}}


def _read(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: not valid JSON ({err})") from None


def load_theory(path) -> QuiverGaugeTheory:
    return theory_from_json(_read(path))


def load_point(path, validate: bool = True) -> FixedPointData:
    path = Path(path)
    return point_from_json(_read(path), path.parent, validate)


def dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def series_to_json(s: TruncatedSeries) -> dict:
    """Canonical listing: terms sorted by total degree, then exponent vector."""
    return {"variables": list(s.variables), "order": s.order, "lossy": s.lossy,
            "terms": [{"z": list(e), "coefficient": str(c)} for e, c in s.sorted_terms()]}
