"""Finite-field arithmetic: F_{q^n} contexts, elements and symbolic exponents."""

from .exponents import (Cyc, ExpSpec, IntExp, Prod, QPowMinus1, Sum, as_exp,
                        exp_from_json, geometric_sum_mod, reduce_exponent)
from .field import (TABLE_LIMIT, ContextMismatch, FFElement, FieldCtx, FieldError,
                    ReducibleModulus, builtin_modulus, ctx_new, embedding, field_arith,
                    frobenius, is_dth_power, is_in_subfield)

__all__ = [
    "Cyc", "ExpSpec", "IntExp", "Prod", "QPowMinus1", "Sum", "as_exp", "exp_from_json",
    "geometric_sum_mod", "reduce_exponent", "TABLE_LIMIT", "ContextMismatch", "FFElement",
    "FieldCtx", "FieldError", "ReducibleModulus", "builtin_modulus", "ctx_new", "embedding",
    "field_arith", "frobenius", "is_dth_power", "is_in_subfield",
]
