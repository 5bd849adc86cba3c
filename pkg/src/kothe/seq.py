"""Finitely supported rational sequences and the min-product algebra.

Elements of A(P) with finite support are stored sparsely as ``index -> coef``
with 1-based indices and no explicit zeros, so structural equality is
mathematical equality.  The product is the bilinear extension of
``e_i * e_j = e_min(i, j)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InvalidIndex, ParseError, UndefinedForZero
from .rational import fmt_q, to_q

ZERO = Fraction(0)


class _Sparse:
    """Immutable sparse rational vector indexed by positive integers."""

    __slots__ = ("_c", "_hash")

    def __init__(self, entries=()):
        if isinstance(entries, dict):
            entries = entries.items()
        c: dict[int, Fraction] = {}
        for i, x in entries:
            if isinstance(i, bool) or not isinstance(i, int):
                raise InvalidIndex(f"index must be an int, got {i!r}")
            if i < 1:
                raise InvalidIndex(f"indices start at 1, got {i}")
            v = c.get(i, ZERO) + to_q(x)
            if v:
                c[i] = v
            else:
                c.pop(i, None)
        self._c = dict(sorted(c.items()))
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, Fraction]):
        # caller guarantees canonical form: positive int keys, nonzero values
        obj = cls.__new__(cls)
        obj._c = dict(sorted(c.items()))
        obj._hash = None
        return obj

    def __getitem__(self, i: int) -> Fraction:
        return self._c.get(i, ZERO)

    def __iter__(self) -> Iterator[int]:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def items(self):
        return self._c.items()

    def support(self) -> tuple[int, ...]:
        return tuple(self._c)

    def max_index(self) -> int:
        """Largest support index, 0 for the zero sequence."""
        return max(self._c, default=0)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, tuple(self._c.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{i}: {x}" for i, x in self._c.items())
        return f"{type(self).__name__}({{{body}}})"

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        c = dict(self._c)
        for i, x in other._c.items():
            v = c.get(i, ZERO) + x
            if v:
                c[i] = v
            else:
                del c[i]
        return type(self)._raw(c)

    def __neg__(self):
        return type(self)._raw({i: -x for i, x in self._c.items()})

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "_Sparse":
        s = to_q(s)
        if not s:
            return type(self)()
        return type(self)._raw({i: s * x for i, x in self._c.items()})

    def to_json(self) -> list:
        return [[i, fmt_q(x)] for i, x in self._c.items()]

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ParseError(f"not valid JSON: {data!r}") from exc
        if not isinstance(data, list):
            raise ParseError("sequence JSON must be an array of [index, rational] pairs")
        last = 0
        pairs = []
        for item in data:
            if not (isinstance(item, list) and len(item) == 2):
                raise ParseError(f"bad entry {item!r}; expected [index, \"num/den\"]")
            i, x = item
            if isinstance(i, bool) or not isinstance(i, int) or i < 1:
                raise ParseError(f"bad index {i!r}")
            if i <= last:
                raise ParseError("indices must be strictly increasing")
            q = to_q(x)
            if not q:
                raise ParseError(f"zero coefficient at index {i}")
            last = i
            pairs.append((i, q))
        return cls(pairs)


class FinSeq(_Sparse):
    """Finitely supported element of a min-product algebra.

    ``a * b`` is the min-product, ``s * a`` scales by a rational.
    """

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, FinSeq):
            return min_product(self, other)
        if isinstance(other, _Sparse):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, _Sparse):
            return NotImplemented
        return self.scale(other)


def basis_e(i: int) -> FinSeq:
    if isinstance(i, bool) or not isinstance(i, int) or i < 1:
        raise InvalidIndex(f"basis vectors are indexed from 1, got {i!r}")
    return FinSeq._raw({i: Fraction(1)})


def lin_comb(terms: Iterable[tuple[object, FinSeq]]) -> FinSeq:
    c: dict[int, Fraction] = {}
    for s, a in terms:
        s = to_q(s)
        if not s:
            continue
        for i, x in a.items():
            c[i] = c.get(i, ZERO) + s * x
    return FinSeq._raw({i: x for i, x in c.items() if x})


def suffix_sum(a: _Sparse, k: int, strict: bool = False) -> Fraction:
    """``sum_{j >= k} a_j``, or ``sum_{j > k}`` when ``strict``."""
    if strict:
        return sum((x for i, x in a.items() if i > k), ZERO)
    return sum((x for i, x in a.items() if i >= k), ZERO)


def min_product(a: FinSeq, b: FinSeq) -> FinSeq:
    """Product extending ``e_i e_j = e_min(i,j)``.

    Uses ``(ab)_k = a_k b_k + a_k S_{>k}(b) + b_k S_{>k}(a)`` in a single
    descending sweep over the union of supports.
    """
    idx = sorted(set(a._c) | set(b._c), reverse=True)
    sa = sb = ZERO
    out = {}
    for k in idx:
        ak, bk = a[k], b[k]
        v = ak * bk + ak * sb + bk * sa
        if v:
            out[k] = v
        sa += ak
        sb += bk
    return FinSeq._raw(out)


def brute_product(a: FinSeq, b: FinSeq) -> FinSeq:
    """Double sum over support pairs; reference for :func:`min_product`."""
    out: dict[int, Fraction] = {}
    for i, x in a.items():
        for j, y in b.items():
            k = min(i, j)
            out[k] = out.get(k, ZERO) + x * y
    return FinSeq._raw({k: v for k, v in out.items() if v})


def weight_of(a: _Sparse) -> Fraction:
    """Total mass ``w(a) = sum |a_i|``."""
    return sum((abs(x) for _, x in a.items()), ZERO)


def leading_index(a: _Sparse) -> int:
    if not a:
        raise UndefinedForZero("leading index is undefined for the zero sequence")
    return next(iter(a))


@dataclass(frozen=True)
class UnitalElement:
    """Element ``(scalar, part)`` of the unitization A+."""

    scalar: Fraction
    part: FinSeq

    def __post_init__(self):
        object.__setattr__(self, "scalar", to_q(self.scalar))
        if not isinstance(self.part, FinSeq):
            raise TypeError("part must be a FinSeq")

    @classmethod
    def one(cls) -> "UnitalElement":
        return cls(Fraction(1), FinSeq())

    @classmethod
    def embed(cls, a: FinSeq) -> "UnitalElement":
        return cls(ZERO, a)

    def __mul__(self, other):
        if not isinstance(other, UnitalElement):
            return NotImplemented
        return unital_product(self, other)

    def to_json(self) -> dict:
        return {"scalar": fmt_q(self.scalar), "part": self.part.to_json()}

    @classmethod
    def from_json(cls, data) -> "UnitalElement":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ParseError(f"not valid JSON: {data!r}") from exc
        if not isinstance(data, dict) or set(data) != {"scalar", "part"}:
            raise ParseError('unital element must be {"scalar": ..., "part": [...]}')
        return cls(to_q(data["scalar"]), FinSeq.from_json(data["part"]))


def unital_product(x: UnitalElement, y: UnitalElement) -> UnitalElement:
    # (s,a)(t,b) = (st, sb + ta + ab)
    part = lin_comb([(x.scalar, y.part), (y.scalar, x.part), (1, min_product(x.part, y.part))])
    return UnitalElement(x.scalar * y.scalar, part)
