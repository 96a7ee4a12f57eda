"""Maximal lengths of non-trivial Büchi sequences of quadratics modulo odd prime powers."""
from .arith import INF, PrimePowerModulus, Residue, is_square_residue, padic_ord, qr_mod_p, square_table, unit_part
from .errors import BudgetExceeded, BuchiError, CapExceeded, InvalidInput, ModulusMismatch
from .formulas import BaseConstants, base_constants, corollary_opt, formula_opt
from .polyspace import QuadPoly, build_linear_square_index, evaluate, is_square_of_linear, is_square_poly
from .search import SearchOutcome, buchi_length, ml_f1, ml_opt, sweep

__all__ = [
    "INF", "PrimePowerModulus", "Residue", "is_square_residue", "padic_ord", "qr_mod_p", "square_table",
    "unit_part", "BudgetExceeded", "BuchiError", "CapExceeded", "InvalidInput", "ModulusMismatch",
    "BaseConstants", "base_constants", "corollary_opt", "formula_opt", "QuadPoly", "build_linear_square_index",
    "evaluate", "is_square_of_linear", "is_square_poly", "SearchOutcome", "buchi_length", "ml_f1", "ml_opt",
    "sweep", "clear_caches",
]
__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop every memoised table, index and base constant."""
    from . import arith, formulas, polyspace, verify

    for fn in (arith._square_table, arith._square_mask, arith._order_array, polyspace._build_index,
               polyspace.bounded_square_quadratics, verify._ml, verify._opt):
        fn.cache_clear()
    formulas.clear_cache()
