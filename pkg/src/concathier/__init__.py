"""Concatenation hierarchies of regular languages over finite bases."""

from .classes import LanguageClass, builtin_basis, in_class, period, resolve_basis
from .hierarchy import LevelExpr, Monomial, PolyExpr, piece_complement, strictness_witnesses
from .logic import compile_sentence, evaluate, parse_formula
from .regular import Alphabet, Dfa
from .strata import (
    Verdict,
    bpol_stratum_member,
    bpol_stratum_separable,
    pol_stratum_member,
    pol_stratum_separable,
    word_leq_k,
)

__version__ = "0.1.0"
