"""
Complements of piecewise languages as polynomials
=================================================

A* a1 A* ... an A* collects the words having a1...an as a scattered
subword.  Its complement is again a polynomial, this time over the
languages B* for subsets B of the alphabet.
"""

from concathier import Alphabet, Dfa, piece_complement
from concathier.hierarchy import alphabet_trick_check

A = Alphabet("ab")

####################################################################
# A few complements
# -----------------

for letters in ["a", "ab", "aba", "abba"]:
    P = piece_complement(letters, A)
    print(letters, "->", P.describe())

####################################################################
# Checking against the direct complement
# --------------------------------------

piece = Dfa.from_regex(".*a.*b.*a.*", A)
print(piece_complement("aba", A).language() == ~piece)

####################################################################
# Unions of pieces
# ----------------
#
# The complement of a union is the intersection of the complements; the
# rewriting keeps everything inside the polynomial world.

for row in alphabet_trick_check([["ab", "ba"], ["aa", "bb"]]):
    print(row["sample"], row["monomials"], "monomials, degree", row["degree"], row["equal"])
