"""Exact computations in min-product Köthe sequence algebras.

Finitely supported elements, weighted l1 seminorms, approximate-identity
witnesses, the anti-diagonal counterexample family and an exact LP lower
bound showing that family admits no bounded approximate identity.
"""

from .bv0 import BvSeq, bv_norm, check_multiplicative, from_bv0, to_bv0
from .certify import (
    ai_defect,
    check_ai_witness,
    check_bai_witness,
    check_lbai_witness,
    construct_bai_net,
    construct_lbai_element,
    per_level_report,
    tail_defect_formula,
)
from .counterexample import alpha, bounded_subsequence_witness, cex_weight, phi, phi_inv
from .errors import InvalidIndex, KotheError, ParseError, UndefinedForZero, WindowExhausted
from .lp import LowerBoundInstance, closed_form_bound, growth_certificate, solve_minimax
from .seq import (
    FinSeq,
    UnitalElement,
    basis_e,
    brute_product,
    leading_index,
    lin_comb,
    min_product,
    unital_product,
    weight_of,
)
from .weights import KotheSet, Weight, check_directed, check_ge_one, compare_weights, seminorm

__version__ = "0.1.0"
