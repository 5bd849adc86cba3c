"""Command-line front end.

Every command prints one JSON document (sorted keys, rationals as
``"num/den"``).  Exit status: 0 success, 1 a check failed, 2 bad input,
3 a search window was exhausted (refusal).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .bv0 import BvSeq, bv_norm, check_multiplicative, from_bv0, to_bv0
from .certify import (
    LbaiCertificate,
    check_ai_witness,
    check_bai_witness,
    check_lbai_witness,
    lbai_certificate,
    per_level_report,
    search_witness,
)
from .counterexample import (
    PHI_CONVENTION,
    alpha,
    bounded_subsequence_witness,
    cex_weight,
    phi,
    phi_inv,
)
from .errors import KotheError, ParseError, WindowExhausted
from .lp import (
    LowerBoundInstance,
    closed_form_bound,
    growth_certificate,
    parse_k_rule,
    solve_minimax,
)
from .rational import fmt_q, to_q
from .seq import FinSeq, UnitalElement, min_product
from .weights import KotheSet, check_directed, default_horizon, parse_kothe_set, parse_weight, seminorm

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REFUSAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} is not valid JSON: {text!r}") from exc


def _finseq(text: str) -> FinSeq:
    return FinSeq.from_json(_load_json(text, "sequence"))


def _family(text: str) -> list[FinSeq]:
    """A single sequence or a JSON array of sequences."""
    data = _load_json(text, "test family")
    if not isinstance(data, list):
        raise ParseError("test family must be a JSON array")
    if data and isinstance(data[0], list) and len(data[0]) == 2 and isinstance(data[0][0], int) \
            and not isinstance(data[0][0], bool):
        return [FinSeq.from_json(data)]
    return [FinSeq.from_json(a) for a in data]


def _pos_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


def _int_range(text: str) -> list[int]:
    """``"3..12"`` or ``"3,5,8"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad integer list {text!r}") from exc


def _bounds(text: str | None, P: KotheSet) -> dict[str, Fraction]:
    if text is None:
        return {}
    data = _load_json(text, "bounds")
    if not isinstance(data, dict):
        raise ParseError("bounds must be a JSON object {weight: rational}")
    known = set(P.descriptors())
    out = {}
    for key, v in data.items():
        desc = key if key in known else parse_weight(key).descriptor
        out[desc] = to_q(v)
    return out


# --- handlers -------------------------------------------------------------

def cmd_product(args):
    a = _load_json(args.a, "a")
    b = _load_json(args.b, "b")
    if isinstance(a, dict) or isinstance(b, dict):
        x = UnitalElement.from_json(a) if isinstance(a, dict) else UnitalElement.embed(FinSeq.from_json(a))
        y = UnitalElement.from_json(b) if isinstance(b, dict) else UnitalElement.embed(FinSeq.from_json(b))
        return (x * y).to_json(), EXIT_OK
    return min_product(FinSeq.from_json(a), FinSeq.from_json(b)).to_json(), EXIT_OK


def cmd_norm(args):
    return fmt_q(seminorm(_finseq(args.a), parse_weight(args.weight))), EXIT_OK


def cmd_cex(args):
    if args.cex_cmd == "phi":
        return {"i": args.i, "j": args.j, "n": phi(args.i, args.j), "phi_convention": PHI_CONVENTION}, EXIT_OK
    if args.cex_cmd == "phi-inv":
        i, j = phi_inv(args.n)
        return {"n": args.n, "i": i, "j": j, "phi_convention": PHI_CONVENTION}, EXIT_OK
    p = cex_weight(args.k)
    if args.cex_cmd == "weight":
        i, j = phi_inv(args.n)
        return {"k": args.k, "n": args.n, "i": i, "j": j, "value": fmt_q(p[args.n]),
                "phi_convention": PHI_CONVENTION}, EXIT_OK
    if args.cex_cmd == "weight-prefix":
        return {"k": args.k, "values": [fmt_q(v) for v in p.prefix(args.len)],
                "phi_convention": PHI_CONVENTION}, EXIT_OK
    idx = bounded_subsequence_witness(args.k, args.count)
    vals = [p[n] for n in idx]
    return {
        "k": args.k,
        "indices": idx,
        "values": [fmt_q(v) for v in vals],
        "constant": fmt_q(args.k + 1),
        "ok": all(v == args.k + 1 for v in vals),
        "phi_convention": PHI_CONVENTION,
    }, EXIT_OK


def cmd_certify(args):
    P = parse_kothe_set(args.family)
    F = _family(args.test)
    eps = to_q(args.eps)
    if eps < 0:
        raise ParseError("eps must be >= 0")
    given_b = _finseq(args.b) if args.b else None
    bounds = _bounds(args.bounds, P)
    echo = {"family": P.to_json(), "eps": fmt_q(eps), "window": args.window,
            "test_family": [a.to_json() for a in F]}

    if args.kind == "ai":
        recs = []
        for p in P.members:
            b = given_b or search_witness(F, [p], eps, args.window)
            recs.append(check_ai_witness(F, b, p, eps))
        ok = all(r.ok for r in recs)
        return {"kind": "ai", "input": echo, "ok": ok, "records": [r.to_json() for r in recs]}, \
            EXIT_OK if ok else EXIT_FAIL

    if args.kind == "lbai":
        if not all(d in bounds for d in P.descriptors()):
            levels = per_level_report(P, F, eps, args.window)
            for lv in levels.levels:
                bounds.setdefault(lv.weight, lv.bound)
        recs = []
        for p in P.members:
            C = bounds[p.descriptor]
            b = given_b or search_witness(F, [p], eps, args.window, {p.descriptor: C})
            recs.append(check_lbai_witness(F, b, p, eps, C))
        cert = LbaiCertificate(recs, P.horizon)
        out = cert.to_json()
        out["input"] = echo
        return out, EXIT_OK if cert.ok else EXIT_FAIL

    missing = [d for d in P.descriptors() if d not in bounds]
    if missing:
        raise ParseError(f"bai needs --bounds for every weight; missing {missing}")
    b = given_b or search_witness(F, P.members, eps, args.window, bounds)
    cert = check_bai_witness(F, b, P, {d: eps for d in P.descriptors()}, bounds)
    out = cert.to_json()
    out["input"] = echo
    return out, EXIT_OK if cert.ok else EXIT_FAIL


def cmd_lp_bound(args):
    delta = to_q(args.delta)
    if args.floor is not None:
        if args.mmax is None:
            raise ParseError("--floor needs --mmax")
        inst = LowerBoundInstance.index_floor(delta, args.floor, args.mmax, args.kmax)
    else:
        if args.diagonal is None:
            raise ParseError("give --diagonal D (or --floor m --mmax M)")
        inst = LowerBoundInstance.diagonals(delta, args.diagonal, args.kmax, args.dmax)
    cert = solve_minimax(inst)
    out = cert.to_json()
    out["phi_convention"] = PHI_CONVENTION
    return out, EXIT_OK if cert.ok else EXIT_FAIL


def cmd_lp_sweep(args):
    g = growth_certificate(to_q(args.delta), _int_range(args.dlist), parse_k_rule(args.krule),
                           workers=args.workers)
    out = g.to_json()
    out["k_rule"] = args.krule
    out["phi_convention"] = PHI_CONVENTION
    return out, EXIT_OK if g.ok else EXIT_FAIL


def cmd_bv0(args):
    if args.bv_cmd == "to":
        x = to_bv0(_finseq(args.x))
        return {"image": x.to_json(), "bv_norm": fmt_q(bv_norm(x))}, EXIT_OK
    if args.bv_cmd == "from":
        return {"preimage": from_bv0(BvSeq.from_json(_load_json(args.x, "x"))).to_json()}, EXIT_OK
    chk = check_multiplicative(_finseq(args.a), _finseq(args.b))
    return chk.to_json(), EXIT_OK if chk.ok else EXIT_FAIL


def _test_families(n: int, seed: int) -> list[list[FinSeq]]:
    rng = random.Random(seed)
    fams = [[], [FinSeq({1: 1, 2: 1})]]
    while len(fams) < n:
        fam = []
        for _ in range(rng.randint(1, 3)):
            size = rng.randint(1, 4)
            fam.append(FinSeq({rng.randint(1, 40): Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
                               for _ in range(size)}))
        fams.append(fam)
    return fams[:n]


def cmd_reproduce(args):
    K = args.kmax
    horizon = args.horizon or default_horizon()
    ks = list(range(1, K + 1))

    subseq = []
    for k in ks:
        p = cex_weight(k)
        idx = bounded_subsequence_witness(k, args.count)
        row = [phi(1, j) for j in range(1, args.count + 1)]
        subseq.append({
            "k": k,
            "indices": idx,
            "constant": fmt_q(k + 1),
            "bounded_ok": all(p[n] == k + 1 for n in idx),
            "first_row_values": [fmt_q(p[n]) for n in row],
            "first_row_unbounded_ok": all(p[n] == j for j, n in enumerate(row, start=1)),
        })

    directed = check_directed(KotheSet([cex_weight(k) for k in ks], horizon))
    fams = _test_families(args.families, args.seed)
    lbai = lbai_certificate(fams, ks, horizon)
    sweep = growth_certificate(1, list(range(3, args.dmax + 1)), parse_k_rule("D"))
    closed = [fmt_q(closed_form_bound(1, D, D)) for D in range(3, args.dmax + 1)]
    strictly = all(a < b for a, b in zip(sweep.values, sweep.values[1:]))

    prop_i = all(s["bounded_ok"] and s["first_row_unbounded_ok"] for s in subseq) and lbai.ok
    prop_ii = sweep.ok and strictly and [fmt_q(v) for v in sweep.values] == closed
    report = {
        "config": {"kmax": K, "dmax": args.dmax, "count": args.count, "families": args.families,
                   "seed": args.seed, "horizon": horizon},
        "phi_convention": PHI_CONVENTION,
        "weights": [cex_weight(k).descriptor for k in ks],
        "alpha_rule": "alpha(k,i,j) = i*j if i <= k else i",
        "directed": directed.to_json(),
        "property_i": {
            "bounded_subsequences": subseq,
            "lbai_constants": {f"cex:k={k}": fmt_q(k + 1) for k in ks},
            "lbai_certificate": lbai.to_json(),
            "ok": prop_i,
        },
        "property_ii": {
            "sweep": sweep.to_json(),
            "closed_form": closed,
            "strictly_increasing": strictly,
            "ok": prop_ii,
        },
        "verdict": {
            "locally_bounded_ai": prop_i and directed.ok,
            "no_bounded_ai_at_finite_scale": prop_ii,
        },
    }
    ok = prop_i and prop_ii and directed.ok
    return report, EXIT_OK if ok else EXIT_FAIL


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="kothe", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("product", help="min-product of two sequences (or unital elements)")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("norm", help="weighted l1 seminorm")
    p.add_argument("--a", required=True)
    p.add_argument("--weight", required=True)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("cex", help="counterexample weights and enumeration")
    cs = p.add_subparsers(dest="cex_cmd", required=True, parser_class=_Parser)
    q = cs.add_parser("phi")
    q.add_argument("--i", type=_pos_int, required=True)
    q.add_argument("--j", type=_pos_int, required=True)
    q = cs.add_parser("phi-inv")
    q.add_argument("--n", type=_pos_int, required=True)
    q = cs.add_parser("weight")
    q.add_argument("--k", type=_pos_int, required=True)
    q.add_argument("--n", type=_pos_int, required=True)
    q = cs.add_parser("weight-prefix")
    q.add_argument("--k", type=_pos_int, required=True)
    q.add_argument("--len", type=_pos_int, required=True)
    q = cs.add_parser("witness")
    q.add_argument("--k", type=_pos_int, required=True)
    q.add_argument("--count", type=_pos_int, required=True)
    p.set_defaults(func=cmd_cex)

    p = sub.add_parser("certify", help="check or find approximate-identity witnesses")
    p.add_argument("kind", choices=["ai", "lbai", "bai"])
    p.add_argument("--family", required=True, help='JSON array of weight specs or {"weights":[...],"horizon":H}')
    p.add_argument("--test", required=True, help="a sequence or JSON array of sequences")
    p.add_argument("--eps", required=True)
    p.add_argument("--bounds", help="JSON object weight -> rational bound")
    p.add_argument("--b", help="candidate element; searched among basis vectors if omitted")
    p.add_argument("--window", type=_pos_int, default=1000)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("lp-bound", help="exact minimax lower bound for one window")
    p.add_argument("--delta", required=True)
    p.add_argument("--diagonal", type=_pos_int)
    p.add_argument("--dmax", type=_pos_int)
    p.add_argument("--floor", type=_pos_int, help="raw index floor m (window m..mmax)")
    p.add_argument("--mmax", type=_pos_int)
    p.add_argument("--kmax", type=_pos_int, required=True)
    p.set_defaults(func=cmd_lp_bound)

    p = sub.add_parser("lp-sweep", help="lower bounds over a range of anti-diagonals")
    p.add_argument("--delta", required=True)
    p.add_argument("--dlist", required=True, help='"3..12" or "3,5,8"')
    p.add_argument("--krule", default="D", help='"D" or "const:K"')
    p.add_argument("--workers", type=_pos_int, default=1)
    p.set_defaults(func=cmd_lp_sweep)

    p = sub.add_parser("bv0", help="the bv0 isomorphism")
    bs = p.add_subparsers(dest="bv_cmd", required=True, parser_class=_Parser)
    q = bs.add_parser("to")
    q.add_argument("--x", required=True)
    q = bs.add_parser("from")
    q.add_argument("--x", required=True)
    q = bs.add_parser("check")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    p.set_defaults(func=cmd_bv0)

    p = sub.add_parser("reproduce-counterexample", help="end-to-end report on the counterexample algebra")
    p.add_argument("--kmax", type=_pos_int, default=6)
    p.add_argument("--dmax", type=_pos_int, default=12)
    p.add_argument("--count", type=_pos_int, default=10)
    p.add_argument("--families", type=_pos_int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=_pos_int)
    p.set_defaults(func=cmd_reproduce)
    return ap


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        payload, code = args.func(args)
    except WindowExhausted as exc:
        print(f"kothe: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSAL
    except (KotheError, argparse.ArgumentTypeError) as exc:
        print(f"kothe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
