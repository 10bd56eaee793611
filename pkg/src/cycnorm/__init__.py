"""Hilbert symbols, Hasse norm tests and executable diophantine sets over Q and Q(zeta_3)."""

__version__ = "0.1.0"

from .arith import CycElem, CycInt, Place, crt_approx, factor, primes_above, real_place, valuation
from .errors import (
    ArithmeticOverflow,
    ConditionViolated,
    CycNormError,
    EllMismatch,
    IsANorm,
    PreconditionError,
    SearchExhausted,
)
from .expr import format_elem, parse_elem
from .places import Mu, power_residue_symbol
from .symbols import all_symbols, hilbert_symbol, prescribe_symbols, wild_split_oracle
from .norms import delta, is_lth_power, is_norm, lth_root, norm_form_coeffs, norm_solve
from .algebra import AlgebraElem, AlgebraParams, reduced_norm, reduced_trace
from .dioph import Params, SetQuery, classify, fix_ab, j_decompose, member
from .certificates import (
    build_certificate,
    is_norm_squarefree,
    nonpower_witness,
    verify_certificate,
)

__all__ = [
    "AlgebraElem", "AlgebraParams", "ArithmeticOverflow", "ConditionViolated", "CycElem",
    "CycInt", "CycNormError", "EllMismatch", "IsANorm", "Mu", "Params", "Place",
    "PreconditionError", "SearchExhausted", "SetQuery", "all_symbols", "build_certificate",
    "classify", "crt_approx", "delta", "factor", "fix_ab", "format_elem", "hilbert_symbol",
    "is_lth_power", "is_norm", "is_norm_squarefree", "j_decompose", "lth_root", "member",
    "nonpower_witness", "norm_form_coeffs", "norm_solve", "parse_elem", "power_residue_symbol",
    "prescribe_symbols", "primes_above", "real_place", "reduced_norm", "reduced_trace",
    "valuation", "verify_certificate", "wild_split_oracle",
]
