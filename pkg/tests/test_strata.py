import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from concathier.classes import builtin_basis
from concathier.errors import BudgetExceeded, PreconditionViolated
from concathier.regular import Alphabet, Dfa
from concathier.strata import (
    bounded_stratum,
    bounded_word_search,
    bpol_stratum_member,
    bpol_stratum_separable,
    build_type_monoid,
    enumerate_stratum,
    pol_separability_search,
    pol_stratum_member,
    pol_stratum_separable,
    pumping_bound,
    verify_pumping_1,
    verify_pumping_2,
    word_leq_k,
    word_leq_recursive,
)
from oracles import basis_predicates, family_leq, restricted_stratum, stratum_leq, words

A = Alphabet("ab")
BASES = {k: builtin_basis(k, A) for k in ("st0", "dd0", "at", "wat", "att:2")}
SMALL = ["a*b*", "(ab)*", ".*ab.*", "a+", "b*a", "(a|b)*", "_", "a(a|b)*b", ".*aa.*",
         "(aa)*", "b+a+", ".*a.*b.*", "a|b", "(ba)*b"]


def lang(p):
    return Dfa.from_regex(p, A)


def wlist(maxlen):
    return words("ab", maxlen)


# --- the three views of <=_k agree with the definitional oracle ----------------


@pytest.mark.parametrize("kind", ["st0", "dd0", "at", "wat", "att:2"])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_preorder_views_agree(kind, k):
    C = BASES[kind]
    ref = stratum_leq(basis_predicates(kind), k)
    ws = wlist(4)
    for w1 in ws:
        for w2 in ws:
            expect = ref(w1, w2)
            assert word_leq_recursive(C, k, w1, w2) == expect
            assert word_leq_k(C, k, w1, w2, method="types") == expect


@pytest.mark.parametrize("kind", ["st0", "dd0", "at"])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_restricted_stratum_matches_oracle(kind, k):
    maxlen = 4
    C = BASES[kind]
    fam = restricted_stratum(basis_predicates(kind), "ab", k, maxlen)
    B = bounded_stratum(C, k, maxlen)
    for w1 in wlist(maxlen):
        for w2 in wlist(maxlen):
            expect = family_leq(fam, w1, w2)
            assert B.leq(w1, w2) == expect
            # restricting to short words only removes separating languages
            if word_leq_recursive(C, k, w1, w2):
                assert expect


@pytest.mark.parametrize("kind,k", [("st0", 0), ("st0", 1), ("dd0", 0)])
def test_full_enumeration(kind, k):
    C = BASES[kind]
    members = enumerate_stratum(C, k)
    for L in members:
        assert pol_stratum_member(L, C, k).status == "Member"
    for w1 in wlist(3):
        for w2 in wlist(3):
            assert word_leq_recursive(C, k, w1, w2) == all(
                L.accepts(w2) for L in members if L.accepts(w1))


def test_enumeration_sizes_and_budget():
    assert len(enumerate_stratum(BASES["st0"], 0)) == 2
    assert len(enumerate_stratum(BASES["st0"], 1)) == 6
    with pytest.raises(BudgetExceeded):
        enumerate_stratum(BASES["dd0"], 1, budget=200)


def test_type_counts():
    assert len(build_type_monoid(BASES["st0"], 0)) == 1
    assert len(build_type_monoid(BASES["st0"], 1)) <= 4
    with pytest.raises(BudgetExceeded):
        build_type_monoid(BASES["dd0"], 3, budget=10)


# --- properties of <=_k ----------------------------------------------------------

short_words = st.text(alphabet="ab", max_size=5)
kinds = st.sampled_from(["st0", "dd0", "at", "att:2"])
levels = st.integers(min_value=0, max_value=2)


@settings(max_examples=120, deadline=None)
@given(kinds, levels, short_words, short_words, short_words)
def test_preorder_laws(kind, k, x, y, z):
    C = BASES[kind]
    leq = lambda u, v, j=k: word_leq_k(C, j, u, v)  # noqa: E731
    assert leq(x, x)
    if leq(x, y) and leq(y, z):
        assert leq(x, z)
    if leq(x, y, k + 1):
        assert leq(x, y)


@settings(max_examples=80, deadline=None)
@given(kinds, levels, short_words, short_words, short_words, short_words)
def test_precongruence(kind, k, x, y, u, v):
    C = BASES[kind]
    assume(word_leq_k(C, k, x, y))
    assert word_leq_k(C, k, u + x + v, u + y + v)


def test_negative_controls():
    st0, dd0 = BASES["st0"], BASES["dd0"]
    assert word_leq_k(st0, 1, "ab", "ba")
    assert not word_leq_k(st0, 2, "ab", "ba")
    assert word_leq_k(st0, 1, "ab", "aba")
    assert not word_leq_k(dd0, 0, "", "a")
    # the a*b* witnesses only compare in one direction
    for k in (2, 3):
        n = 2 ** (k + 1)
        u, v = "a" * n + "b", "a" * n + "b" * n + "a" * n + "b"
        assert word_leq_k(dd0, k, u, v, method="types")
        assert not word_leq_k(dd0, k, v, u, method="types")


# --- membership and separation ----------------------------------------------------


MEMBER_CASES = [(kind, k) for kind in ("st0", "dd0", "at") for k in (0, 1)] + [("st0", 2)]


@pytest.mark.parametrize("kind,k", MEMBER_CASES)
@pytest.mark.parametrize("r", SMALL)
def test_member_verdicts(kind, k, r):
    C = BASES[kind]
    L = lang(r)
    v = pol_stratum_member(L, C, k)
    assert v.definite
    if v.status == "NotMember":
        w1, w2 = v.witness
        assert L.accepts(w1) and not L.accepts(w2)
        assert word_leq_k(C, k, w1, w2)
        brute = bounded_word_search(C, k, L, ~L, max(len(w1), len(w2)))
        assert brute is not None
        assert len(brute[0]) + len(brute[1]) >= len(w1) + len(w2)
    else:
        assert v.status == "Member"
        assert bounded_word_search(C, k, L, ~L, 4) is None
        # strata grow with k; a larger level may only run out of budget
        assert pol_stratum_member(L, C, k + 1, budget=5_000).status in ("Member", "Inconclusive")


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["st0", "dd0", "at"]), st.integers(0, 2), st.sampled_from(SMALL))
def test_engines_agree(kind, k, r):
    C = BASES[kind]
    L = lang(r)
    loc = pol_stratum_member(L, C, k, budget=5_000, engine="local")
    mon = pol_stratum_member(L, C, k, budget=5_000, engine="monoid")
    assume("exceeded" not in loc.budget and "exceeded" not in mon.budget)
    assert loc.status == mon.status
    assert loc.witness == mon.witness


def test_known_memberships():
    st0 = BASES["st0"]
    assert pol_stratum_member(lang(".*a.*"), st0, 1).status == "Member"
    assert pol_stratum_member(lang(".*a.*b.*"), st0, 1).status == "NotMember"
    assert pol_stratum_member(lang(".*a.*b.*"), st0, 2).status == "Member"
    v = pol_stratum_member(lang("a*b*"), st0, 2)
    assert v.status == "NotMember"
    assert bpol_stratum_member(lang(".*a.*"), st0, 1).status == "Member"
    assert bpol_stratum_member(lang("b*"), st0, 1).status == "Member"
    assert pol_stratum_member(lang("b*"), st0, 1).status == "NotMember"


@pytest.mark.parametrize("r1,r2", [("a*", "b+"), (".*ab.*", "b*a*"), ("(ab)*", "(ba)+"),
                                   ("a+b+", "b+a+"), (".*a.*", "b*")])
@pytest.mark.parametrize("k", [0, 1])
def test_separation(r1, r2, k):
    C = BASES["dd0"]
    L1, L2 = lang(r1), lang(r2)
    v = pol_stratum_separable(L1, L2, C, k)
    if v.status == "Separable":
        S = v.separator
        assert S is not None
        assert L1.issubset(S) and (S & L2).is_empty()
        assert pol_stratum_member(S, C, k).status == "Member"
    else:
        assert v.status == "NotSeparable"
        w1, w2 = v.witness
        assert L1.accepts(w1) and L2.accepts(w2) and word_leq_k(C, k, w1, w2)


def test_bool_separation_and_search():
    C = BASES["st0"]
    v = bpol_stratum_separable(lang("b*"), lang(".*a.*"), C, 1)
    assert v.status == "Separable"
    S = v.separator
    assert bpol_stratum_member(S, C, 1).status == "Member"
    out = pol_separability_search(lang(".*ab.*"), lang("b*a*"), C, 3)
    assert [x.status for x in out][-1] == "Separable"
    assert all(x.status == "NotSeparable" for x in out[:-1])


def test_budget_gives_inconclusive_or_bounded_witness():
    C = BASES["dd0"]
    v = pol_stratum_member(lang("(ab)*"), C, 3, budget=5, maxlen=2)
    assert v.status == "Inconclusive"
    assert "exceeded" in v.budget
    v = pol_stratum_member(lang("a*b*"), BASES["st0"], 2, budget=5, maxlen=6)
    assert v.status in ("NotMember", "Inconclusive")
    if v.status == "NotMember":
        assert word_leq_recursive(BASES["st0"], 2, *v.witness)


def test_verdict_json():
    v = pol_stratum_member(lang("a*b*"), BASES["st0"], 1)
    data = v.to_json()
    assert data["status"] == "NotMember" and data["k"] == 1
    assert isinstance(data["witness"], list)


# --- pumping -------------------------------------------------------------------


@pytest.mark.parametrize("kind", ["st0", "dd0", "at", "att:2"])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_pumping_first(kind, k):
    C = BASES[kind]
    b = pumping_bound(k)
    for u in ["a", "ab", "ba", "aab"]:
        assert verify_pumping_1(C, k, u, b, b + 1)
        assert verify_pumping_1(C, k, u, b + 1, b)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_pumping_second(k):
    C = BASES["dd0"]
    b = pumping_bound(k)
    for u, v in [("a", "b"), ("ab", "b"), ("ab", "ba"), ("a", "bab")]:
        assert verify_pumping_2(C, k, u, v, b, b, b)


def test_pumping_preconditions():
    C = BASES["dd0"]
    with pytest.raises(PreconditionViolated):
        verify_pumping_1(C, 2, "a", 2, 7)
    with pytest.raises(PreconditionViolated):
        verify_pumping_2(C, 0, "a", "", 1, 1, 1)
    at = BASES["at"]
    with pytest.raises(PreconditionViolated):
        verify_pumping_2(at, 0, "a", "b", 1, 1, 1)


def test_pumping_exponent_is_needed():
    # below the bound the inequality can fail
    assert not word_leq_k(BASES["dd0"], 0, "", "a")
    assert not word_leq_k(BASES["st0"], 2, "a", "aa") or not word_leq_k(BASES["st0"], 2, "aa", "a")


def test_unambiguous_family_not_separable():
    C = BASES["dd0"]
    L = lang(".*abba.*")
    V = lang("(aba|abba)(aba|abba)*")
    for k in range(4):
        v = pol_stratum_separable(~L & V, L & V, C, k)
        assert v.status == "NotSeparable"
        w1, w2 = v.witness
        assert w1 in (~L & V) and w2 in (L & V)
        u = "aba" * 2 ** (k + 1)
        assert word_leq_k(C, k, u, u + "abba" + u, method="types")
