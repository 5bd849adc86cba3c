"""Exact rational parsing and canonical formatting.

Every number that leaves the package is written as ``"num/den"`` in lowest
terms, sign on the numerator, so reports never contain floats.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import ParseError

Q = Fraction


def to_q(x) -> Fraction:
    """Coerce ``x`` to a Fraction, refusing floats and bools."""
    if isinstance(x, bool):
        raise ParseError(f"boolean is not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        raise ParseError(f"floats are not accepted, got {x!r}")
    if isinstance(x, str):
        s = x.strip()
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed rational {x!r}") from exc
    raise ParseError(f"cannot read {type(x).__name__} as a rational")


def fmt_q(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
