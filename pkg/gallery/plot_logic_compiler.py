"""
From first-order sentences to automata
======================================

Sentences over a basis use letter tests, equality and one predicate
family per basis member.  The compiler turns them into minimal automata
by marking variable positions with extra bits.
"""

from concathier import Alphabet, builtin_basis, compile_sentence, evaluate, parse_formula
from concathier.logic import classify, encode, marked_concat_sentence, to_text

A = Alphabet("ab")
st0 = builtin_basis("st0", A)
dd0 = builtin_basis("dd0", A)

####################################################################
# Parsing and evaluating
# ----------------------
#
# ``x < y`` is sugar for the infix predicate with A*; over dd0 the aliases
# ``+1``, ``min``, ``max`` and ``epsilon`` use the member {ε}.

f = parse_formula("exists x. exists y. x < y & a(x) & b(y)", st0)
print(to_text(f))
print([w for w in ["ab", "ba", "aab", "bba"] if evaluate(f, w)])

####################################################################
# Compiling
# ---------
#
# The result is a canonical Dfa plus the hierarchy level the quantifier
# prefix predicts.

dfa, claim = compile_sentence(f, st0)
print(classify(f), claim, dfa.n_states, "states")

g = parse_formula("forall x. forall y. +1(x, y) -> !(a(x) & a(y))", dd0)
dfa_g, claim_g = compile_sentence(g, dd0)
print(classify(g), claim_g, dfa_g.enumerate(3))

####################################################################
# How assignments are encoded
# ---------------------------
#
# A word with positions for x1, x2 becomes a word over letters
# (bits, a).  Existential quantifiers keep the words where the new bit is
# set once and erase it.

print(encode("aba", (1, 3)))

####################################################################
# Marked concatenation of sentences
# ---------------------------------

left = parse_formula("exists x. a(x)", st0)
right = parse_formula("forall x. b(x)", st0)
h = marked_concat_sentence(left, "a", right, st0)
print(to_text(h))
print(compile_sentence(h, st0)[0].enumerate(3))
