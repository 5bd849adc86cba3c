"""Weight sequences, Köthe sets and the weighted l1 seminorms.

A weight is a total function on the positive integers.  Statements that
quantify over every index are checked on a finite prefix only, and every
verdict records the horizon it was checked up to.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .errors import InvalidIndex, KotheError, ParseError
from .rational import fmt_q, to_q
from .seq import ZERO, _Sparse

DEFAULT_HORIZON = 10_000


def default_horizon() -> int:
    raw = os.environ.get("KOTHE_HORIZON")
    if not raw:
        return DEFAULT_HORIZON
    try:
        h = int(raw)
    except ValueError as exc:
        raise ParseError(f"KOTHE_HORIZON must be a positive integer, got {raw!r}") from exc
    if h < 1:
        raise ParseError(f"KOTHE_HORIZON must be a positive integer, got {raw!r}")
    return h


class Weight:
    """A lazily evaluated sequence ``p_1, p_2, ...`` of rationals.

    Values are cached on first use; filling the cache is idempotent, so
    concurrent readers at worst compute the same value twice.
    """

    __slots__ = ("_fn", "descriptor", "_cache")

    def __init__(self, fn: Callable[[int], object], descriptor: str):
        self._fn = fn
        self.descriptor = descriptor
        self._cache: dict[int, Fraction] = {}

    def __getitem__(self, i: int) -> Fraction:
        v = self._cache.get(i)
        if v is None:
            if isinstance(i, bool) or not isinstance(i, int) or i < 1:
                raise InvalidIndex(f"weights are indexed from 1, got {i!r}")
            v = to_q(self._fn(i))
            self._cache[i] = v
        return v

    def prefix(self, n: int) -> list[Fraction]:
        return [self[i] for i in range(1, n + 1)]

    def __repr__(self):
        return f"Weight({self.descriptor!r})"

    @classmethod
    def const(cls, c=1) -> "Weight":
        c = to_q(c)
        return cls(lambda i: c, f"const:{fmt_q(c)}")

    @classmethod
    def from_list(cls, values: Sequence, tail=None) -> "Weight":
        """Weight with explicit leading values; later indices take ``tail``.

        Without a tail the last listed value repeats.
        """
        vals = [to_q(v) for v in values]
        if not vals:
            raise ParseError("list weight needs at least one value")
        t = vals[-1] if tail is None else to_q(tail)
        desc = "list:" + json.dumps([fmt_q(v) for v in vals], separators=(",", ":"))
        if tail is not None:
            desc += f";tail={fmt_q(t)}"
        n = len(vals)
        return cls(lambda i: vals[i - 1] if i <= n else t, desc)


def parse_weight(spec: str) -> Weight:
    """Read ``const:<q>``, ``list:<json>[;tail=<q>]`` or ``cex:<k>``."""
    kind, sep, rest = spec.strip().partition(":")
    if not sep:
        raise ParseError(f"weight spec needs a kind prefix: {spec!r}")
    if kind == "const":
        return Weight.const(to_q(rest))
    if kind == "list":
        body, _, tail = rest.partition(";")
        tail_q = None
        if tail:
            key, _, val = tail.partition("=")
            if key.strip() != "tail":
                raise ParseError(f"unknown list-weight option {tail!r}")
            tail_q = to_q(val)
        try:
            values = json.loads(body)
        except json.JSONDecodeError as exc:
            raise ParseError(f"list weight body is not JSON: {body!r}") from exc
        if not isinstance(values, list):
            raise ParseError("list weight body must be a JSON array")
        return Weight.from_list(values, tail_q)
    if kind == "cex":
        from .counterexample import cex_weight

        try:
            k = int(rest)
        except ValueError as exc:
            raise ParseError(f"cex weight needs an integer k: {spec!r}") from exc
        if k < 1:
            raise ParseError(f"cex weight needs k >= 1: {spec!r}")
        return cex_weight(k)
    raise ParseError(f"unknown weight kind {kind!r}")


@dataclass
class KotheSet:
    members: list[Weight]
    horizon: int = field(default_factory=default_horizon)

    def __post_init__(self):
        if self.horizon < 1:
            raise KotheError("horizon must be >= 1")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def descriptors(self) -> list[str]:
        return [p.descriptor for p in self.members]

    def to_json(self) -> dict:
        return {"weights": self.descriptors(), "horizon": self.horizon}


def parse_kothe_set(spec) -> KotheSet:
    """Accept a JSON array of weight specs, or ``{"weights": [...], "horizon": H}``."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ParseError(f"family spec is not JSON: {spec!r}") from exc
    if isinstance(spec, list):
        specs, horizon = spec, default_horizon()
    elif isinstance(spec, dict) and "weights" in spec:
        specs = spec["weights"]
        horizon = spec.get("horizon", default_horizon())
    else:
        raise ParseError('family must be a JSON array or {"weights": [...], "horizon": H}')
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 1:
        raise ParseError(f"bad horizon {horizon!r}")
    if not specs:
        raise ParseError("family must have at least one weight")
    return KotheSet([parse_weight(s) for s in specs], horizon)


def seminorm(a: _Sparse, p: Weight) -> Fraction:
    """``||a||_p = sum |a_i| p_i`` over the (finite) support of ``a``."""
    return sum((abs(x) * p[i] for i, x in a.items()), ZERO)


@dataclass(frozen=True)
class GeOneVerdict:
    ok: bool
    horizon: int
    first_violation: int | None = None

    def to_json(self):
        return {"ok": self.ok, "horizon": self.horizon, "first_violation": self.first_violation}


def check_ge_one(p: Weight, horizon: int) -> GeOneVerdict:
    if horizon < 1:
        raise KotheError("horizon must be >= 1")
    for i in range(1, horizon + 1):
        if p[i] < 1:
            return GeOneVerdict(False, horizon, i)
    return GeOneVerdict(True, horizon)


class Order(str, Enum):
    LE = "p<=q"
    GE = "q<=p"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare_weights(p: Weight, q: Weight, horizon: int) -> Order:
    """Pointwise comparison of two weights on indices ``1..horizon``."""
    if horizon < 1:
        raise KotheError("horizon must be >= 1")
    le = ge = True
    for i in range(1, horizon + 1):
        a, b = p[i], q[i]
        if a > b:
            le = False
        elif a < b:
            ge = False
        if not (le or ge):
            return Order.INCOMPARABLE
    if le and ge:
        return Order.EQUAL
    return Order.LE if le else Order.GE


def _first_undominated(r: Weight, p: Weight, q: Weight, horizon: int) -> int | None:
    for i in range(1, horizon + 1):
        if r[i] < max(p[i], q[i]):
            return i
    return None


@dataclass(frozen=True)
class DirectedVerdict:
    ok: bool
    horizon: int
    # (i, j) -> index of the majorant member
    witnesses: dict
    # (i, j) -> {candidate index: first index where it fails}
    failures: dict

    def to_json(self):
        return {
            "ok": self.ok,
            "horizon": self.horizon,
            "witnesses": [[i, j, w] for (i, j), w in sorted(self.witnesses.items())],
            "failures": [
                [i, j, [[r, bad] for r, bad in sorted(f.items())]]
                for (i, j), f in sorted(self.failures.items())
            ],
        }


def check_directed(P: KotheSet) -> DirectedVerdict:
    """Find, for each pair of members, a member majorizing both up to the horizon.

    Candidates are tried in member order, so a chain yields the larger of
    the two as witness.
    """
    if not P.members:
        raise KotheError("Köthe set must be nonempty")
    ms = P.members
    witnesses, failures = {}, {}
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            bad = {}
            for r_idx, r in enumerate(ms):
                first = _first_undominated(r, ms[i], ms[j], P.horizon)
                if first is None:
                    witnesses[(i, j)] = r_idx
                    break
                bad[r_idx] = first
            else:
                failures[(i, j)] = bad
    return DirectedVerdict(not failures, P.horizon, witnesses, failures)
