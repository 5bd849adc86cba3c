"""The weight family of the counterexample algebra.

``alpha(k, i, j)`` is ``i*j`` for rows ``i <= k`` and ``i`` below, and the
weight ``p^(k)`` reads the matrix along anti-diagonals: ``p^(k)_n`` is
``alpha(k, *phi_inv(n))``.

Enumeration convention: anti-diagonals ``i + j = d`` come in increasing
``d``, and inside one anti-diagonal ``i`` increases (so ``phi(1, d-1)``
starts the block).  Only the between-diagonal order is forced; the within
order is this package's choice and is reported as ``PHI_CONVENTION``.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

from .errors import InvalidIndex
from .weights import Weight

PHI_CONVENTION = "antidiagonal-ascending-i"


def _check_pos(name: str, v) -> None:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InvalidIndex(f"{name} must be a positive integer, got {v!r}")


def phi(i: int, j: int) -> int:
    _check_pos("i", i)
    _check_pos("j", j)
    d = i + j
    return (d - 2) * (d - 1) // 2 + i


def phi_inv(n: int) -> tuple[int, int]:
    _check_pos("n", n)
    # largest m = d - 1 with m(m-1)/2 < n
    m = (1 + isqrt(8 * n - 7)) // 2
    if m * (m - 1) // 2 >= n:
        m -= 1
    i = n - m * (m - 1) // 2
    return i, m + 1 - i


def diagonal_of(n: int) -> int:
    i, j = phi_inv(n)
    return i + j


def diagonal_range(d: int) -> range:
    """Indices ``n`` lying on anti-diagonal ``i + j = d`` (``d >= 2``)."""
    if d < 2:
        raise InvalidIndex(f"anti-diagonals start at d=2, got {d}")
    base = (d - 2) * (d - 1) // 2
    return range(base + 1, base + d)


def alpha(k: int, i: int, j: int) -> int:
    _check_pos("k", k)
    _check_pos("i", i)
    _check_pos("j", j)
    return i * j if i <= k else i


@lru_cache(maxsize=None)
def cex_weight(k: int) -> Weight:
    _check_pos("k", k)
    return Weight(lambda n: alpha(k, *phi_inv(n)), f"cex:k={k}")


def bounded_subsequence_witness(k: int, count: int) -> list[int]:
    """Indices ``phi(k+1, j)``, ``j = 1..count``, on which ``p^(k)`` equals ``k+1``."""
    _check_pos("k", k)
    _check_pos("count", count)
    return [phi(k + 1, j) for j in range(1, count + 1)]
