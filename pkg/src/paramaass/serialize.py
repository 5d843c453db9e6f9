"""JSON reading and writing with a fixed, byte-stable layout."""
from __future__ import annotations

import json
from fractions import Fraction

from .core import fmt_rational, parse_rational
from .jacobi import JacobiExpansion
from .paramod import ExpansionBox, ParamodularExpansion

__all__ = [
    "expansion_to_json",
    "expansion_from_json",
    "jacobi_to_json",
    "jacobi_from_json",
    "load_any",
    "dumps",
]


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, ensure_ascii=True) + "\n"


def expansion_to_json(f: ParamodularExpansion) -> dict:
    # box.indices already runs in (m, n, r) order
    coeffs = [
        {"n": n, "r": r, "m": m, "c": fmt_rational(c)}
        for (n, r, m), c in f.items()
        if c
    ]
    return {
        "weight": f.weight,
        "level": f.level,
        "nmax": f.box.n_max,
        "mmax": f.box.m_max,
        "coeffs": coeffs,
    }


def _int_field(obj: dict, name: str, minimum: int = 0) -> int:
    value = obj.get(name)
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ValueError(f"field {name!r} must be an integer >= {minimum}, got {value!r}")
    return value


def _records(obj: dict, fields: tuple[str, ...]):
    records = obj.get("coeffs")
    if not isinstance(records, list):
        raise ValueError("field 'coeffs' must be a list")
    for rec in records:
        if not isinstance(rec, dict) or set(rec) != set(fields) | {"c"}:
            raise ValueError(f"malformed coefficient record {rec!r}")
        key = tuple(rec[f] for f in fields)
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in key):
            raise ValueError(f"non-integer index in {rec!r}")
        yield key, parse_rational(rec["c"])


def expansion_from_json(obj: dict) -> ParamodularExpansion:
    k = _int_field(obj, "weight")
    N = _int_field(obj, "level", 1)
    box = ExpansionBox(_int_field(obj, "nmax"), _int_field(obj, "mmax"))
    data: dict = {}
    for (n, r, m), c in _records(obj, ("n", "r", "m")):
        if not box.contains(n, m) or 4 * n * m * N < r * r:
            raise ValueError(f"coefficient ({n}, {r}, {m}) lies outside the declared box")
        if (n, r, m) in data:
            raise ValueError(f"duplicate coefficient ({n}, {r}, {m})")
        if c:
            data[n, r, m] = c
    return ParamodularExpansion(k, N, box, data)


def jacobi_to_json(phi: JacobiExpansion) -> dict:
    coeffs = [{"n": n, "r": r, "c": fmt_rational(c)} for (n, r), c in phi.items() if c]
    return {"weight": phi.weight, "index": phi.index, "nmax": phi.n_max, "coeffs": coeffs}


def jacobi_from_json(obj: dict) -> JacobiExpansion:
    k = _int_field(obj, "weight")
    M = _int_field(obj, "index")
    n_max = _int_field(obj, "nmax")
    data: dict = {}
    for (n, r), c in _records(obj, ("n", "r")):
        if n > n_max or n < 0 or 4 * n * M < r * r:
            raise ValueError(f"coefficient ({n}, {r}) lies outside the declared box")
        if (n, r) in data:
            raise ValueError(f"duplicate coefficient ({n}, {r})")
        if c:
            data[n, r] = Fraction(c)
    return JacobiExpansion(k, M, n_max, data)


def load_any(text: str) -> ParamodularExpansion | JacobiExpansion:
    """Parse either schema; Jacobi files carry 'index' instead of 'level'."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ValueError("top-level JSON value must be an object")
    if "index" in obj:
        return jacobi_from_json(obj)
    return expansion_from_json(obj)
