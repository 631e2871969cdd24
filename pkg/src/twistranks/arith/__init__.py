"""Arithmetic kernel: symbols, sieving, Selmer ranks and class groups."""

from .classgroup import (ClassGroupResult, class_group, class_number, compose,
                         fundamental_discriminant, redei_rank4, reduced_forms)
from .selmer import SelmerResult, selmer_rank_descent, selmer_rank_monsky
from .sieve import SquarefreeInt, factor_small, primes_up_to, squarefree_sieve
from .symbols import additive, jacobi, kronecker, legendre, symbol_pair

__all__ = [
    "ClassGroupResult", "class_group", "class_number", "compose",
    "fundamental_discriminant", "redei_rank4", "reduced_forms",
    "SelmerResult", "selmer_rank_descent", "selmer_rank_monsky",
    "SquarefreeInt", "factor_small", "primes_up_to", "squarefree_sieve",
    "additive", "jacobi", "kronecker", "legendre", "symbol_pair",
]
