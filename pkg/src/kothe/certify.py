"""Checking and constructing approximate-identity witnesses.

All defect tests are closed (``defect <= eps``) so that ``eps = 0`` asks
for an exact identity ``a = ab``; any positive ``eps`` gives the strict
version.  Candidates are basis vectors ``e_n`` searched in an explicit
window, and an empty window is a refusal (:class:`WindowExhausted`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .counterexample import cex_weight, phi
from .errors import KotheError, WindowExhausted
from .rational import fmt_q, to_q
from .seq import ZERO, FinSeq, basis_e, min_product, suffix_sum
from .weights import KotheSet, Weight, seminorm


def ai_defect(a: FinSeq, b: FinSeq, p: Weight) -> Fraction:
    """``||a - ab||_p``."""
    return seminorm(a - min_product(a, b), p)


def tail_defect_formula(a: FinSeq, n: int, p: Weight) -> Fraction:
    """Closed form of ``ai_defect(a, e_n, p)``.

    ``a - a e_n`` keeps the tail ``a_i`` for ``i > n`` and puts
    ``-sum_{i>n} a_i`` at ``n``, hence
    ``p_n |sum_{i>n} a_i| + sum_{i>n} p_i |a_i|``.
    """
    if n < 1:
        raise KotheError(f"n must be >= 1, got {n}")
    tail = suffix_sum(a, n, strict=True)
    return p[n] * abs(tail) + sum((p[i] * abs(x) for i, x in a.items() if i > n), ZERO)


def _supp_max(F: Sequence[FinSeq]) -> int:
    return max((a.max_index() for a in F), default=0)


@dataclass(frozen=True)
class AiWitness:
    F: tuple[FinSeq, ...]
    b: FinSeq
    p: Weight
    eps: Fraction
    defects: tuple[Fraction, ...]
    ok: bool

    def to_json(self):
        return {
            "kind": "ai",
            "weight": self.p.descriptor,
            "eps": fmt_q(self.eps),
            "b": self.b.to_json(),
            "test_family": [a.to_json() for a in self.F],
            "defects": [fmt_q(d) for d in self.defects],
            "ok": self.ok,
        }


def check_ai_witness(F: Sequence[FinSeq], b: FinSeq, p: Weight, eps) -> AiWitness:
    eps = to_q(eps)
    if eps < 0:
        raise KotheError("eps must be >= 0")
    F = tuple(F)
    defects = tuple(ai_defect(a, b, p) for a in F)
    return AiWitness(F, b, p, eps, defects, all(d <= eps for d in defects))


@dataclass(frozen=True)
class LbaiRecord:
    witness: AiWitness
    bound: Fraction
    norm_b: Fraction

    @property
    def ok(self) -> bool:
        return self.witness.ok and self.norm_b <= self.bound

    def to_json(self):
        d = self.witness.to_json()
        d.update(kind="lbai", bound=fmt_q(self.bound), norm_b=fmt_q(self.norm_b), ok=self.ok)
        return d


def check_lbai_witness(F: Sequence[FinSeq], b: FinSeq, p: Weight, eps, C) -> LbaiRecord:
    """Defect in ``p`` plus ``||b||_p <= C``: the bound is asked in the same seminorm only."""
    C = to_q(C)
    if C <= 0:
        raise KotheError("C must be > 0")
    return LbaiRecord(check_ai_witness(F, b, p, eps), C, seminorm(b, p))


@dataclass
class LbaiCertificate:
    records: list[LbaiRecord]
    horizon: int

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def constants(self) -> dict[str, Fraction]:
        return {r.witness.p.descriptor: r.bound for r in self.records}

    def to_json(self):
        return {
            "kind": "lbai",
            "horizon": self.horizon,
            "ok": self.ok,
            "constants": {k: fmt_q(v) for k, v in self.constants().items()},
            "records": [r.to_json() for r in self.records],
        }


@dataclass(frozen=True)
class BaiCertificate:
    F: tuple[FinSeq, ...]
    b: FinSeq
    eps: dict[str, Fraction]
    C_family: dict[str, Fraction]
    defects: dict[str, tuple[Fraction, ...]]
    norms: dict[str, Fraction]

    @property
    def defect_ok(self) -> bool:
        return all(d <= self.eps[k] for k, ds in self.defects.items() for d in ds)

    @property
    def bounds_ok(self) -> bool:
        return all(self.norms[k] <= self.C_family[k] for k in self.norms)

    @property
    def ok(self) -> bool:
        return self.defect_ok and self.bounds_ok

    def to_json(self):
        return {
            "kind": "bai",
            "b": self.b.to_json(),
            "test_family": [a.to_json() for a in self.F],
            "eps": {k: fmt_q(v) for k, v in self.eps.items()},
            "bounds": {k: fmt_q(v) for k, v in self.C_family.items()},
            "defects": {k: [fmt_q(d) for d in ds] for k, ds in self.defects.items()},
            "norms": {k: fmt_q(v) for k, v in self.norms.items()},
            "defect_ok": self.defect_ok,
            "bounds_ok": self.bounds_ok,
            "ok": self.ok,
        }


def check_bai_witness(
    F: Sequence[FinSeq],
    b: FinSeq,
    P: KotheSet,
    eps_per_weight: Mapping[str, object],
    C_family: Mapping[str, object],
) -> BaiCertificate:
    """Defects on the weights named in ``eps_per_weight``, bounds on every member.

    Both mappings are keyed by weight descriptor.
    """
    by_desc = {p.descriptor: p for p in P.members}
    missing = [d for d in by_desc if d not in C_family]
    if missing:
        raise KotheError(f"no bound given for member weight(s) {missing}")
    unknown = [d for d in eps_per_weight if d not in by_desc]
    if unknown:
        raise KotheError(f"eps given for weight(s) outside the family: {unknown}")
    F = tuple(F)
    eps = {d: to_q(e) for d, e in eps_per_weight.items()}
    defects = {d: tuple(ai_defect(a, b, by_desc[d]) for a in F) for d in eps}
    norms = {d: seminorm(b, p) for d, p in by_desc.items()}
    C = {d: to_q(C_family[d]) for d in by_desc}
    return BaiCertificate(F, b, eps, C, defects, norms)


def construct_lbai_element(F: Sequence[FinSeq], k: int) -> FinSeq:
    """``e_n`` with ``n = phi(k+1, j)`` for the least ``j`` putting ``n`` past every support.

    ``p^(k)`` equals ``k+1`` on that row, so the bound is ``k+1`` whatever ``F`` is.
    """
    m = _supp_max(F)
    j = 1
    while phi(k + 1, j) <= m:
        j += 1
    return basis_e(phi(k + 1, j))


def lbai_certificate(
    families: Sequence[Sequence[FinSeq]], ks: Sequence[int], horizon: int
) -> LbaiCertificate:
    """One exact (eps = 0, C = k+1) record per requested ``(k, F)``."""
    records = []
    for k in ks:
        p = cex_weight(k)
        for F in families:
            b = construct_lbai_element(F, k)
            records.append(check_lbai_witness(F, b, p, 0, k + 1))
    return LbaiCertificate(records, horizon)


@dataclass(frozen=True)
class BaiNetResult:
    b: FinSeq
    C_family: dict[str, Fraction]
    # sup over the first half of the index list, to expose growth
    half_sups: dict[str, Fraction]
    certificate: BaiCertificate | None

    @property
    def bounded(self) -> bool:
        return self.certificate is not None

    def growing(self) -> list[str]:
        return [d for d, c in self.C_family.items() if c > self.half_sups[d]]

    def to_json(self):
        return {
            "kind": "bai-net",
            "b": self.b.to_json(),
            "observed_sup": {k: fmt_q(v) for k, v in self.C_family.items()},
            "observed_sup_first_half": {k: fmt_q(v) for k, v in self.half_sups.items()},
            "growing": self.growing(),
            "bounded": self.bounded,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def construct_bai_net(
    common_indices: Sequence[int], F: Sequence[FinSeq], P: KotheSet
) -> BaiNetResult:
    """Common bounded subsequence construction.

    ``b = e_n`` for the first listed ``n`` past all supports.  The bound for
    each weight is its observed sup on the listed indices (up to the
    horizon).  When some sup is still growing between the first half and
    the whole list, no certificate is issued and the growth is reported.
    """
    idx = [n for n in common_indices if n <= P.horizon]
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise KotheError("common indices must be strictly increasing")
    m = _supp_max(F)
    n = next((n for n in idx if n > m), None)
    if n is None:
        raise WindowExhausted(
            f"no common index beyond support {m} within horizon {P.horizon}"
        )
    half = idx[: max(1, len(idx) // 2)]
    sups = {p.descriptor: max(p[i] for i in idx) for p in P.members}
    half_sups = {p.descriptor: max(p[i] for i in half) for p in P.members}
    b = basis_e(n)
    result = BaiNetResult(b, sups, half_sups, None)
    if result.growing():
        return result
    eps = {d: 0 for d in sups}
    cert = check_bai_witness(F, b, P, eps, sups)
    return BaiNetResult(b, sups, half_sups, cert)


@dataclass(frozen=True)
class LevelReport:
    weight: str
    window: int
    # best bound at each support floor m: min of p_n over m < n <= window
    profile: tuple[Fraction, ...]
    bound: Fraction
    stable: bool
    witness: AiWitness | None

    def to_json(self):
        return {
            "weight": self.weight,
            "window": self.window,
            "bound": fmt_q(self.bound),
            "stable": self.stable,
            "profile_tail": [fmt_q(v) for v in self.profile[-5:]],
            "witness": None if self.witness is None else self.witness.to_json(),
        }


@dataclass
class PerLevelReport:
    levels: list[LevelReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(lv.stable and lv.witness is not None and lv.witness.ok for lv in self.levels)

    def constants(self) -> dict[str, Fraction]:
        return {lv.weight: lv.bound for lv in self.levels}

    def to_json(self):
        return {
            "kind": "per-level",
            "ok": self.ok,
            "constants": {k: fmt_q(v) for k, v in self.constants().items()},
            "levels": [lv.to_json() for lv in self.levels],
        }


def level_bound_profile(p: Weight, window: int) -> list[Fraction]:
    """``beta(m) = min_{m < n <= window} p_n`` for support floors ``m = 0..window//2``.

    A single-seminorm bounded a.i. from basis vectors exists at level ``p``
    iff ``sup_m beta(m)`` is finite; within the window it shows up as a
    profile that stops growing.
    """
    vals = p.prefix(window)
    suffix_min = [ZERO] * (window + 1)
    cur = None
    for n in range(window, 0, -1):
        v = vals[n - 1]
        cur = v if cur is None or v < cur else cur
        suffix_min[n - 1] = cur
    return [suffix_min[m] for m in range(window // 2 + 1)]


def per_level_report(P: KotheSet, F: Sequence[FinSeq], eps, window: int = 1000) -> PerLevelReport:
    """Per-seminorm search for bounded witnesses, one level at a time.

    For each member ``p`` the uniform constant is ``C_p = max_m beta(m)``;
    it counts as found (``stable``) if the maximum is already reached in the
    first quarter of the floors.  The witness for ``F`` is the smallest
    ``e_n`` in the window with defect ``<= eps`` and ``p_n <= C_p``.
    """
    eps = to_q(eps)
    F = tuple(F)
    report = PerLevelReport()
    for p in P.members:
        prof = level_bound_profile(p, window)
        C = max(prof)
        stable = max(prof[: len(prof) // 4 + 1]) == C
        wit = None
        for n in range(1, window + 1):
            if p[n] > C:
                continue
            cand = check_ai_witness(F, basis_e(n), p, eps)
            if cand.ok:
                wit = cand
                break
        report.levels.append(LevelReport(p.descriptor, window, tuple(prof), C, stable, wit))
    return report


def search_witness(
    F: Sequence[FinSeq],
    weights: Sequence[Weight],
    eps,
    window: int,
    bounds: Mapping[str, object] | None = None,
) -> FinSeq:
    """Smallest ``e_n``, ``n <= window``, meeting the defect on every weight and any bounds."""
    eps = to_q(eps)
    bounds = {k: to_q(v) for k, v in (bounds or {}).items()}
    for n in range(1, window + 1):
        b = basis_e(n)
        if any(seminorm(b, p) > bounds[p.descriptor] for p in weights if p.descriptor in bounds):
            continue
        if all(ai_defect(a, b, p) <= eps for p in weights for a in F):
            return b
    raise WindowExhausted(f"no basis candidate up to n={window} meets the requirements")


def geometric_truncation(m: int) -> FinSeq:
    """``sum_{i<=m} 2^-i e_i``."""
    return FinSeq({i: Fraction(1, 2**i) for i in range(1, m + 1)})


def truncation_sweep(m: int, ns: Sequence[int], p: Weight | None = None) -> list[tuple[int, Fraction]]:
    """Exact defects ``||a - a e_n||_p`` of the geometric truncation ``a`` against ``e_n``."""
    p = p or Weight.const(1)
    a = geometric_truncation(m)
    return [(n, ai_defect(a, basis_e(n), p)) for n in ns]
