"""Exact lower bounds on the norms of mass-carrying tails.

For a window ``W`` of coordinates far out (anti-diagonals ``i + j >= D``)
the minimax program

    min  max_{k <= K} <p^(k), x>   over  x >= 0 on W,  sum x = delta

bounds from below ``max_k ||x||_{p^(k)}`` for every ``x`` supported in
``W`` with ``w(x) >= delta``.  Nonnegativity loses nothing because ``w``
and every ``||.||_p`` see only ``|x_n|``.  The program is solved in epigraph
form (minimize ``t`` with ``<p^(k), x> <= t``) by the exact simplex, and the
optimum is certified by dual multipliers that are re-checked here
independently of the solver.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .counterexample import cex_weight, diagonal_of, diagonal_range, phi_inv
from .errors import KotheError, ParseError
from .rational import fmt_q, to_q
from .seq import ZERO, FinSeq, weight_of
from .simplex import solve_lp
from .weights import seminorm

NONNEG_NOTE = (
    "restricting to x >= 0 is lossless: mass and every weighted norm depend on |x_n| only"
)
WIDEN_STEP = 4
MAX_WIDEN = 3


@dataclass(frozen=True)
class LowerBoundInstance:
    delta: Fraction
    D: int
    K: int
    window: tuple[int, ...]
    dmax: int | None = None
    floor: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "delta", to_q(self.delta))
        if self.delta <= 0:
            raise KotheError("delta must be > 0")
        if self.K < 1:
            raise KotheError("K must be >= 1")
        if not self.window:
            raise KotheError("window is empty")
        if list(self.window) != sorted(set(self.window)):
            raise KotheError("window must be strictly increasing")
        if any(diagonal_of(n) < self.D for n in self.window):
            raise KotheError(f"window has coordinates below anti-diagonal {self.D}")

    @classmethod
    def diagonals(cls, delta, D: int, K: int, dmax: int | None = None) -> "LowerBoundInstance":
        """Full anti-diagonals ``D..dmax`` (default ``D + WIDEN_STEP``)."""
        if D < 2:
            raise KotheError("D must be >= 2")
        dmax = D + WIDEN_STEP if dmax is None else dmax
        if dmax < D:
            raise KotheError("dmax must be >= D")
        window = tuple(n for d in range(D, dmax + 1) for n in diagonal_range(d))
        return cls(delta, D, K, window, dmax)

    @classmethod
    def index_floor(cls, delta, m: int, M: int, K: int) -> "LowerBoundInstance":
        """Raw coordinates ``m..M``; ``D`` is the lowest anti-diagonal they touch."""
        if m < 1 or M < m:
            raise KotheError("need 1 <= m <= M")
        window = tuple(range(m, M + 1))
        return cls(delta, min(diagonal_of(n) for n in window), K, window, floor=m)

    def first_omitted_diagonal(self) -> int:
        return diagonal_of(self.window[-1] + 1)

    @property
    def widenable(self) -> bool:
        # explicit windows are taken as given
        return self.dmax is not None or self.floor is not None

    def widened(self) -> "LowerBoundInstance":
        if self.dmax is not None:
            return LowerBoundInstance.diagonals(self.delta, self.D, self.K, self.dmax + WIDEN_STEP)
        if self.floor is None:
            raise KotheError("explicit windows are not widened")
        stop = diagonal_range(diagonal_of(self.window[-1]) + WIDEN_STEP).stop
        return LowerBoundInstance.index_floor(self.delta, self.floor, stop - 1, self.K)

    def to_json(self):
        return {
            "delta": fmt_q(self.delta),
            "D": self.D,
            "K": self.K,
            "dmax": self.dmax,
            "index_floor": self.floor,
            "window_size": len(self.window),
            "window_first": self.window[0],
            "window_last": self.window[-1],
        }


@dataclass(frozen=True)
class DualCertificate:
    # multipliers on <p^(k), x> - t <= 0, and on sum x = delta
    lambdas: tuple[Fraction, ...]
    mu: Fraction

    def verify(self, inst: LowerBoundInstance, value: Fraction) -> bool:
        """Lagrangian bound: ``t >= sum_k lambda_k <p^(k),x> >= mu * delta``."""
        if any(l < 0 for l in self.lambdas) or sum(self.lambdas) > 1:
            return False
        weights = [cex_weight(k) for k in range(1, inst.K + 1)]
        for n in inst.window:
            if sum((l * p[n] for l, p in zip(self.lambdas, weights)), ZERO) < self.mu:
                return False
        return self.mu * inst.delta == value

    def to_json(self):
        return {"lambdas": [fmt_q(l) for l in self.lambdas], "mu": fmt_q(self.mu)}


@dataclass(frozen=True)
class LowerBoundCertificate:
    instance: LowerBoundInstance
    value: Fraction
    x: FinSeq
    norms: tuple[Fraction, ...]
    active: tuple[int, ...]
    dual: DualCertificate
    dual_ok: bool
    enum_lower: Fraction
    enum_upper: Fraction
    # delta * (least p^(K) value over window and everything past it)
    tail_lower: Fraction
    pivots: int

    @property
    def feasible(self) -> bool:
        return (
            all(v > 0 for _, v in self.x.items())
            and weight_of(self.x) == self.instance.delta
            and set(self.x.support()) <= set(self.instance.window)
        )

    @property
    def exact_beyond_window(self) -> bool:
        """The window optimum is also the optimum over all coordinates on diagonals >= D."""
        return self.value == self.tail_lower

    @property
    def ok(self) -> bool:
        return (
            self.feasible
            and self.dual_ok
            and self.enum_lower <= self.value <= self.enum_upper
            and max(self.norms) == self.value
        )

    def closed_form(self) -> Fraction | None:
        inst = self.instance
        if inst.dmax is None or inst.D < 3:
            return None
        return closed_form_bound(inst.delta, inst.D, inst.K)

    def to_json(self):
        cf = self.closed_form()
        return {
            "instance": self.instance.to_json(),
            "value": fmt_q(self.value),
            "optimizer": self.x.to_json(),
            "optimizer_coords": [[n, *phi_inv(n)] for n in self.x.support()],
            "norms": [fmt_q(v) for v in self.norms],
            "active_weights": list(self.active),
            "dual": self.dual.to_json(),
            "dual_ok": self.dual_ok,
            "enumeration_bounds": [fmt_q(self.enum_lower), fmt_q(self.enum_upper)],
            "tail_lower_bound": fmt_q(self.tail_lower),
            "exact_beyond_window": self.exact_beyond_window,
            "closed_form": None if cf is None else fmt_q(cf),
            "matches_closed_form": None if cf is None else cf == self.value,
            "feasible": self.feasible,
            "ok": self.ok,
            "note": NONNEG_NOTE,
        }


def _solve_window(inst: LowerBoundInstance) -> LowerBoundCertificate:
    W, K = inst.window, inst.K
    N = len(W)
    weights = [cex_weight(k) for k in range(1, K + 1)]
    # columns: x_1..x_N, t, s_1..s_K
    A, b = [], []
    for r, p in enumerate(weights):
        row = [p[n] for n in W] + [Fraction(-1)] + [ZERO] * K
        row[N + 1 + r] = Fraction(1)
        A.append(row)
        b.append(ZERO)
    A.append([Fraction(1)] * N + [ZERO] * (1 + K))
    b.append(inst.delta)
    c = [ZERO] * N + [Fraction(1)] + [ZERO] * K
    res = solve_lp(c, A, b)
    if res.status != "optimal":
        raise KotheError(f"minimax LP reported {res.status}; the window is nonempty so this is a solver bug")
    x = FinSeq({W[i]: res.x[i] for i in range(N) if res.x[i]})
    value = res.value
    dual = DualCertificate(tuple(-y for y in res.duals[:K]), res.duals[K])
    norms = tuple(seminorm(x, p) for p in weights)
    active = tuple(k for k, v in enumerate(norms, start=1) if v == value)
    d = inst.delta
    enum_lower = d * max(min(p[n] for n in W) for p in weights)
    enum_upper = d * min(max(p[n] for p in weights) for n in W)
    # on anti-diagonal e the least p^(K) value is min(e - 1, K + 1)
    tail_min = min(inst.first_omitted_diagonal() - 1, K + 1)
    tail_lower = d * min(min(weights[-1][n] for n in W), tail_min)
    return LowerBoundCertificate(
        inst, value, x, norms, active, dual, dual.verify(inst, value),
        enum_lower, enum_upper, tail_lower, res.pivots,
    )


def solve_minimax(inst: LowerBoundInstance, widen: bool = True) -> LowerBoundCertificate:
    """Exact optimum on the window, widening it while the tail could still undercut it."""
    cert = _solve_window(inst)
    tries = 0
    while widen and inst.widenable and not cert.exact_beyond_window and tries < MAX_WIDEN:
        inst = inst.widened()
        cert = _solve_window(inst)
        tries += 1
    return cert


def closed_form_bound(delta, D: int, K: int) -> Fraction:
    """``delta * min(K+1, D-1)``.

    Lower: ``max_k <p^(k),x> >= <p^(K),x>`` and ``p^(K) >= min(K+1, D-1)``
    on anti-diagonals ``>= D``.  Upper: all mass at ``(K+1, D-K-1)`` (cost
    ``K+1`` under every ``k <= K``) or at ``(1, D-1)`` (cost ``D-1``).
    """
    if D < 3 or K < 1:
        raise KotheError("closed form needs D >= 3 and K >= 1")
    delta = to_q(delta)
    if delta <= 0:
        raise KotheError("delta must be > 0")
    return delta * min(K + 1, D - 1)


def parse_k_rule(spec: str) -> Callable[[int], int]:
    """``"D"`` (K equals D) or ``"const:K"``."""
    spec = spec.strip()
    if spec == "D":
        return _k_equals_d
    kind, _, rest = spec.partition(":")
    if kind == "const":
        try:
            k = int(rest)
        except ValueError as exc:
            raise ParseError(f"bad K rule {spec!r}") from exc
        if k < 1:
            raise ParseError("K must be >= 1")
        return _ConstK(k)
    raise ParseError(f"unknown K rule {spec!r}")


def _k_equals_d(D: int) -> int:
    return D


@dataclass(frozen=True)
class _ConstK:
    k: int

    def __call__(self, D: int) -> int:
        return self.k


@dataclass(frozen=True)
class GrowthRow:
    D: int
    K: int
    certificate: LowerBoundCertificate
    floor: Fraction

    def to_json(self):
        c = self.certificate
        return {
            "D": self.D,
            "K": self.K,
            "L": fmt_q(c.value),
            "floor": fmt_q(self.floor),
            "lp_ok": c.ok,
            "exact_beyond_window": c.exact_beyond_window,
            "optimizer_coords": [[n, *phi_inv(n)] for n in c.x.support()],
        }


@dataclass(frozen=True)
class GrowthCertificate:
    delta: Fraction
    rows: tuple[GrowthRow, ...]

    @property
    def values(self) -> list[Fraction]:
        return [r.certificate.value for r in self.rows]

    @property
    def nondecreasing(self) -> bool:
        v = self.values
        return all(a <= b for a, b in zip(v, v[1:]))

    @property
    def ok(self) -> bool:
        return (
            self.nondecreasing
            and all(r.certificate.value >= r.floor for r in self.rows)
            and all(r.certificate.ok for r in self.rows)
        )

    def to_json(self):
        return {
            "kind": "lp-sweep",
            "delta": fmt_q(self.delta),
            "L": [fmt_q(v) for v in self.values],
            "nondecreasing": self.nondecreasing,
            "ok": self.ok,
            "rows": [r.to_json() for r in self.rows],
            "note": NONNEG_NOTE,
        }


def growth_certificate(
    delta, D_list: Sequence[int], K_rule: Callable[[int], int] = _k_equals_d, workers: int = 1
) -> GrowthCertificate:
    """Solve the minimax for every ``D`` and check ``L(D) >= delta*min(K(D)+1, D-1)``.

    A bounded sequence with mass ``>= delta`` pushed past anti-diagonal ``D``
    has norm at least ``L(D)`` in some ``p^(k)``; so growth of ``L`` rules
    out any uniform bound below ``sup_D L(D)``.
    """
    delta = to_q(delta)
    if delta <= 0:
        raise KotheError("delta must be > 0")
    Ds = list(D_list)
    if any(b <= a for a, b in zip(Ds, Ds[1:])):
        raise KotheError("D_list must be increasing")
    insts = [LowerBoundInstance.diagonals(delta, D, K_rule(D)) for D in Ds]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            certs = list(pool.map(solve_minimax, insts))
    else:
        certs = [solve_minimax(i) for i in insts]
    rows = tuple(
        GrowthRow(i.D, i.K, c, delta * min(i.K + 1, i.D - 1)) for i, c in zip(insts, certs)
    )
    return GrowthCertificate(delta, rows)
