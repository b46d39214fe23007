"""JSON class files.

    {"g": 3, "n": 0, "coeffs": {"lambda": "6", "delta:1:{}": "-2"}}

Keys are ``lambda``, ``delta0``, ``omega:<i>``, ``psi:<i>`` (input only) and
``delta:<i>:{a,b,...}``.  Values are rational strings ``"p"`` or ``"p/q"``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .basis import DELTA_IRR, LAMBDA, BasisElement, DivisorClass, SpaceId, delta, omega, psi
from .errors import ModpicError, ParseError

_MARK_KEY = re.compile(r"^(omega|psi):(\d+)$")
_DELTA_KEY = re.compile(r"^delta:(\d+):\{([0-9,]*)\}$")
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def element_key(b: BasisElement) -> str:
    if b.kind in ("lambda", "delta0"):
        return b.kind
    if b.kind in ("omega", "psi"):
        return f"{b.kind}:{b.mark}"
    return f"delta:{b.boundary.genus}:{{{','.join(map(str, sorted(b.boundary.marks)))}}}"


def to_document(d: DivisorClass) -> dict[str, Any]:
    return {
        "g": d.space.g,
        "n": d.space.n,
        "coeffs": {element_key(b): str(c) for b, c in d.items()},
    }


def serialize(d: DivisorClass) -> str:
    return json.dumps(to_document(d), separators=(",", ":"))


def _parse_key(space: SpaceId, key: str) -> BasisElement:
    if key == "lambda":
        return LAMBDA
    if key == "delta0":
        return DELTA_IRR
    m = _MARK_KEY.match(key)
    if m:
        i = int(m.group(2))
        return omega(i) if m.group(1) == "omega" else psi(i)
    m = _DELTA_KEY.match(key)
    if m:
        marks = [int(x) for x in m.group(2).split(",") if x]
        if marks != sorted(set(marks)):
            raise ParseError(f"marks not strictly ascending in {key!r}")
        return delta(space, int(m.group(1)), marks)
    raise ParseError(f"unknown key {key!r}")


def from_document(doc: Any) -> DivisorClass:
    if not isinstance(doc, dict) or set(doc) != {"g", "n", "coeffs"}:
        raise ParseError("class document must have exactly the fields g, n, coeffs")
    g, n, coeffs = doc["g"], doc["n"], doc["coeffs"]
    if type(g) is not int or type(n) is not int or not isinstance(coeffs, dict):
        raise ParseError("g and n must be integers and coeffs an object")
    try:
        space = SpaceId(g, n)
        terms = []
        for key, value in coeffs.items():
            if not isinstance(value, str) or not _RATIONAL.match(value):
                raise ParseError(f"bad rational {value!r} for key {key!r}")
            terms.append((_parse_key(space, key), Fraction(value)))
        return DivisorClass(space, terms)
    except ParseError:
        raise
    except (ModpicError, ZeroDivisionError) as exc:
        raise ParseError(str(exc)) from exc


def parse(text: str, space: SpaceId | None = None) -> DivisorClass:
    """Parse a class file; if ``space`` is given the document must live there."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    d = from_document(doc)
    if space is not None and d.space != space:
        raise ParseError(f"document is on {d.space}, expected {space}")
    return d
