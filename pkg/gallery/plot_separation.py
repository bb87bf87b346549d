"""
Separating two languages level by level
=======================================

A stratum language separates L1 from L2 if it contains L1 and misses L2.
When there is none, a pair of related words proves it.
"""

from concathier import Alphabet, Dfa, builtin_basis
from concathier.strata import pol_separability_search

A = Alphabet("ab")
st0 = builtin_basis("st0", A)

L1 = Dfa.from_regex(".*ab.*", A)
L2 = Dfa.from_regex("b*a*", A)

####################################################################
# Searching upward
# ----------------
#
# Strata grow with k, so the search stops at the first separable level.

for v in pol_separability_search(L1, L2, st0, 3):
    print(v.k, v.status, v.witness)

####################################################################
# The separator
# -------------
#
# It is the least stratum language containing L1.

sep = v.separator
print(sep.n_states, "states")
print(L1.issubset(sep), (sep & L2).is_empty())
print(sep.enumerate(3))
