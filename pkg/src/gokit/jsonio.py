"""JSON encoding helpers.

All rational values cross the JSON boundary as exact "p/q" strings (plain
"p" when the denominator is 1). Floats never appear in tool output; the
decoder rejects them so a round-trip cannot silently lose exactness.
"""

from __future__ import annotations

import json
from fractions import Fraction as Q
from typing import Any


def encode_rational(x: Q | int) -> str:
    q = Q(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def decode_rational(s: str) -> Q:
    if not isinstance(s, str):
        raise TypeError(f"rational must be a 'p/q' string, got {type(s).__name__}")
    return Q(s)


def encode_vector(v: tuple[Q, ...]) -> list[str]:
    return [encode_rational(x) for x in v]


def decode_vector(items: list[str]) -> tuple[Q, ...]:
    return tuple(decode_rational(x) for x in items)


def _reject_float(val: str) -> Any:
    raise ValueError(f"float literal {val!r} not allowed; rationals must be 'p/q' strings")


def loads(text: str) -> Any:
    return json.loads(text, parse_float=_reject_float)


def dumps(obj: Any) -> str:
    """Canonical serialization: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
