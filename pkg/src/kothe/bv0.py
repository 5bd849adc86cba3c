"""The isomorphism of the min-product algebra on l1 with bv0.

``e_n`` goes to the step sequence ``e_1 + ... + e_n``; on a general ``a`` the
image is the sequence of suffix sums ``(T a)_k = sum_{i>=k} a_i``.  It turns
the min-product into the coordinatewise product, since
``S_k(ab) = S_k(a) S_k(b)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .seq import ZERO, FinSeq, _Sparse, min_product


class BvSeq(_Sparse):
    """Finitely supported sequence under the coordinatewise product."""

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, BvSeq):
            return BvSeq._raw({i: x * other[i] for i, x in self.items() if other[i]})
        if isinstance(other, _Sparse):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, _Sparse):
            return NotImplemented
        return self.scale(other)


def to_bv0(a: FinSeq) -> BvSeq:
    out = {}
    s = ZERO
    idx = sorted(a, reverse=True)
    for pos, i in enumerate(idx):
        s += a[i]
        lo = idx[pos + 1] + 1 if pos + 1 < len(idx) else 1
        # suffix sum is constant on lo..i
        if s:
            for k in range(lo, i + 1):
                out[k] = s
    return BvSeq._raw(out)


def from_bv0(x: BvSeq) -> FinSeq:
    """Difference transform ``a_k = x_k - x_{k+1}``."""
    out = {}
    for k in sorted(set(x) | {i - 1 for i in x if i > 1}):
        v = x[k] - x[k + 1]
        if v:
            out[k] = v
    return FinSeq._raw(out)


def bv_norm(x: BvSeq) -> Fraction:
    """Total variation ``sum_k |x_k - x_{k+1}|``."""
    return sum((abs(v) for _, v in from_bv0(x).items()), ZERO)


@dataclass(frozen=True)
class MultiplicativeCheck:
    lhs: BvSeq
    rhs: BvSeq

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self):
        return {"image_of_product": self.lhs.to_json(), "product_of_images": self.rhs.to_json(), "ok": self.ok}


def check_multiplicative(a: FinSeq, b: FinSeq) -> MultiplicativeCheck:
    return MultiplicativeCheck(to_bv0(min_product(a, b)), to_bv0(a) * to_bv0(b))


def norm_ratio(a: FinSeq) -> Fraction | None:
    """``bv_norm(T a) / ||a||_1``; ``None`` for ``a = 0``."""
    if not a:
        return None
    return bv_norm(to_bv0(a)) / sum(abs(v) for _, v in a.items())
