"""Two-phase tableau simplex over exact rationals with Bland's rule.

Solves ``min c.x  s.t.  A x = b, x >= 0``.  Rows with negative right-hand
side are negated on entry.  One artificial column per row is kept for the
whole run: its final column is the matching column of ``B^-1``, which is
how the dual values ``y = c_B B^-1`` are read off.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None
    value: Fraction | None
    duals: tuple[Fraction, ...] | None
    pivots: int


class _Tableau:
    def __init__(self, A, b, n):
        m = len(A)
        self.m, self.n = m, n
        self.rows = []
        self.sign = []
        for r in range(m):
            row = [Fraction(v) for v in A[r]]
            rhs = Fraction(b[r])
            s = -1 if rhs < 0 else 1
            if s < 0:
                row = [-v for v in row]
                rhs = -rhs
            art = [ZERO] * m
            art[r] = ONE
            self.rows.append(row + art + [rhs])
            self.sign.append(s)
        self.basis = [n + r for r in range(m)]
        self.pivots = 0

    def pivot(self, r, c):
        row = self.rows[r]
        pv = row[c]
        if pv != 1:
            row[:] = [v / pv if v else v for v in row]
        nz = [(j, w) for j, w in enumerate(row) if w]
        for k, other in enumerate(self.rows):
            if k != r:
                f = other[c]
                if f:
                    for j, w in nz:
                        other[j] -= f * w
        self.basis[r] = c
        self.pivots += 1
        return nz

    def run(self, cost, allowed) -> bool:
        """Minimize ``cost`` over the current basis; ``False`` if unbounded."""
        # reduced-cost row, kept in step with the pivots below
        obj = [Fraction(v) for v in cost] + [ZERO]
        for r, j in enumerate(self.basis):
            f = obj[j]
            if f:
                for jj, v in enumerate(self.rows[r]):
                    if v:
                        obj[jj] -= f * v
        order = sorted(allowed)
        while True:
            # Bland: lowest-index improving column
            enter = next((j for j in order if obj[j] < 0), None)
            if enter is None:
                return True
            best = None
            for r in range(self.m):
                a = self.rows[r][enter]
                if a > 0:
                    key = (self.rows[r][-1] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            f = obj[enter]
            for j, w in self.pivot(best[1], enter):
                obj[j] -= f * w


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0``, exactly."""
    m, n = len(A), len(c)
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent LP dimensions")
    t = _Tableau(A, b, n)
    arts = range(n, n + m)
    phase1 = [ZERO] * n + [ONE] * m
    t.run(phase1, set(range(n + m)))
    infeas = sum((t.rows[r][-1] for r in range(m) if t.basis[r] >= n), ZERO)
    if infeas > 0:
        return LPResult("infeasible", None, None, None, t.pivots)
    # drive zero-level artificials out of the basis where possible
    for r in range(m):
        if t.basis[r] >= n:
            col = next((j for j in range(n) if t.rows[r][j] != 0), None)
            if col is not None:
                t.pivot(r, col)
    cost = [Fraction(v) for v in c] + [ZERO] * m
    if not t.run(cost, set(range(n))):
        return LPResult("unbounded", None, None, None, t.pivots)
    x = [ZERO] * n
    for r, j in enumerate(t.basis):
        if j < n:
            x[j] = t.rows[r][-1]
    value = sum((cv * xv for cv, xv in zip(cost, x)), ZERO)
    cb = [cost[j] for j in t.basis]
    y = []
    for r, a in enumerate(arts):
        yr = sum((cb[k] * t.rows[k][a] for k in range(m)), ZERO)
        y.append(yr * t.sign[r])
    return LPResult("optimal", tuple(x), value, tuple(y), t.pivots)
