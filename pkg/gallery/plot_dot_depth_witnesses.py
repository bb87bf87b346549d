"""
Why a*b* never enters a polynomial stratum of dot-depth zero
=============================================================

The basis ``dd0`` is {∅, {ε}, A+, A*}.  For each level k we ask the
membership engine about a*b*, then look at the pair of words it returns.
"""

from concathier import Alphabet, Dfa, builtin_basis, pol_stratum_member, word_leq_k

A = Alphabet("ab")
C = builtin_basis("dd0", A)
L = Dfa.from_regex("a*b*", A)

####################################################################
# The engine's answer
# -------------------
#
# A NotMember verdict comes with the least pair (w, w') such that w is in
# the language, w' is not, and w <=_k w'.  Any language of the stratum
# containing w would have to contain w' too.

for k in range(4):
    v = pol_stratum_member(L, C, k)
    print(k, v.status, v.witness)

####################################################################
# A family of witnesses
# ---------------------
#
# The pair below works at every level: the first word is in a*b*, the
# second is not, and the comparison holds for the given k.

for k in range(4):
    n = 2 ** (k + 1)
    u = "a" * n + "b"
    v = "a" * n + "b" * n + "a" * n + "b"
    print(k, len(u), len(v), word_leq_k(C, k, u, v, method="types"))

####################################################################
# The comparison is one-sided: going back fails.

print(word_leq_k(C, 2, "a" * 8 + "b" * 8 + "a" * 8 + "b", "a" * 8 + "b", method="types"))
