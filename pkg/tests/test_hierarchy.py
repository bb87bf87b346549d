from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concathier.classes import LanguageClass, builtin_basis
from concathier.errors import (
    AlphabetTooSmall,
    EpsilonNotInBasis,
    NotInBasis,
    NotQuotienting,
    PreconditionViolated,
    TagViolation,
)
from concathier.hierarchy import (
    LevelExpr,
    Monomial,
    PolyExpr,
    alphabet_trick_check,
    classic_expressions,
    eps_chain,
    eval_level,
    interleaving_check,
    piece_complement,
    pol_concat_rewrite,
    pol_intersect_rewrite,
    pol_quotient_rewrite,
    poly_intersection,
    strictness_witnesses,
)
from concathier.regular import Alphabet, Dfa, concat
from oracles import regex_predicate, words

A = Alphabet("ab")
W6 = words("ab", 6)


def lang(p):
    return Dfa.from_regex(p, A)


def same_on_words(d, pred, ws=W6):
    return all(d.accepts(w) == pred(w) for w in ws)


def monomials(kind):
    members = builtin_basis(kind, A).members
    factor = st.sampled_from(members)

    @st.composite
    def build(draw):
        n = draw(st.integers(0, 2))
        fs = [draw(factor) for _ in range(n + 1)]
        ls = [draw(st.sampled_from("ab")) for _ in range(n)]
        return Monomial(fs, ls)

    return build()


# --- monomials and polynomials ------------------------------------------------


def test_monomial_language():
    full = Dfa.universal(A)
    m = Monomial((full, full), ("a",))
    assert m.language() == lang(".*a.*")
    assert m.degree == 1
    assert Monomial((lang("b*"), full), ("a",)).language() == lang("b*a.*")
    with pytest.raises(ValueError):
        Monomial((full,), ("a",))


def test_poly_drops_empty_and_duplicates():
    full = Dfa.universal(A)
    m = Monomial((full,))
    p = PolyExpr((m, m, Monomial((Dfa.empty(A),))))
    assert len(p) == 1
    assert PolyExpr((), A).language() == Dfa.empty(A)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["dd0", "wat", "at"]).flatmap(monomials), st.sampled_from("ab"),
       st.sampled_from(["left", "right"]))
def test_quotient_rewrite(m, a, side):
    got = pol_quotient_rewrite(m, a, side).language()
    L = m.language()
    want = L.left_quotient(a) if side == "left" else L.right_quotient(a)
    assert got == want


@pytest.mark.parametrize("kind", ["dd0", "wat", "at"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_intersection_rewrite(kind, data):
    C = builtin_basis(kind, A)
    K = data.draw(monomials(kind))
    L = data.draw(monomials(kind))
    P = pol_intersect_rewrite(K, L, C)
    assert P.language() == K.language() & L.language()
    assert all(m.degree <= K.degree + L.degree for m in P)
    assert all(C.contains(f) for m in P for f in m.factors)


@settings(max_examples=30, deadline=None)
@given(st.lists(monomials("wat"), min_size=1, max_size=2),
       st.lists(monomials("wat"), min_size=1, max_size=2))
def test_concat_and_poly_intersection(ks, ls):
    C = builtin_basis("wat", A)
    K, L = PolyExpr(tuple(ks), A), PolyExpr(tuple(ls), A)
    assert pol_concat_rewrite(K, L).language() == concat(K.language(), L.language())
    assert poly_intersection(K, L, C).language() == K.language() & L.language()


def test_intersection_needs_basis_and_quotients():
    C = builtin_basis("dd0", A)
    bad = Monomial((lang("a*"),))
    with pytest.raises(NotInBasis):
        pol_intersect_rewrite(bad, Monomial((Dfa.universal(A),)), C)
    pref = LanguageClass("pref", A, [Dfa.empty(A), Dfa.universal(A), lang("a.*")])
    m = Monomial((Dfa.universal(A),))
    with pytest.raises(NotQuotienting):
        pol_intersect_rewrite(m, m, pref)


def test_eps_chain():
    C = builtin_basis("dd0", A)
    full = Dfa.universal(A)
    K = PolyExpr((Monomial((full,)),))
    P = eps_chain(K, "aba", K, C)
    assert P.language() == lang(".*aba.*")
    assert all(C.contains(f) for m in P for f in m.factors)
    with pytest.raises(EpsilonNotInBasis):
        eps_chain(K, "ab", K, builtin_basis("st0", A))
    with pytest.raises(PreconditionViolated):
        eps_chain(K, "", K, C)


# --- piece complements and the alphabet trick -------------------------------------


def test_piece_complement_examples():
    assert piece_complement("", A).language() == Dfa.empty(A)
    assert piece_complement("a", A).language() == lang("b*")
    assert piece_complement("ab", A).language() == lang("b*a*")
    assert piece_complement("ab", A).describe() == "(a)* | (b)* b (a)*"


@pytest.mark.parametrize("letters", ["a", "ab", "aa", "aba", "abba", "bab"])
def test_piece_complement_against_subwords(letters):
    def has_subword(w):
        it = iter(w)
        return all(c in it for c in letters)

    P = piece_complement(letters, A)
    assert same_on_words(P.language(), lambda w: not has_subword(w))
    W = builtin_basis("wat", A)
    assert all(W.contains(f) for m in P for f in m.factors)
    assert P.degree == len(letters) - 1


def test_alphabet_trick():
    rows = alphabet_trick_check([["ab"], ["ab", "ba"], ["aa", "bb"], ["aba", "b"]])
    for r in rows:
        assert r["equal"] and r["enumeration"] and r["in_basis"]
    rows3 = alphabet_trick_check([["abc", "ca"]], alphabet="abc", maxlen=5)
    assert rows3[0]["equal"]


# --- level expressions ------------------------------------------------------------


def test_level_tags():
    full = LevelExpr.ref(Dfa.universal(A))
    with pytest.raises(TagViolation):
        eval_level(LevelExpr.complement(full, level=Fraction(1, 2)))
    with pytest.raises(TagViolation):
        eval_level(LevelExpr.mconcat(full, "a", full, level=1))
    with pytest.raises(TagViolation):
        eval_level(LevelExpr.union(LevelExpr.ref(Dfa.universal(A), level=2), level=1))
    e = LevelExpr.mconcat(full, "a", full, level=Fraction(1, 2))
    assert eval_level(e) == lang(".*a.*")
    assert eval_level(LevelExpr.complement(e, level=1)) == lang("b*")


@pytest.mark.parametrize("name", ["dd1_ab_star", "dd1_ba_star", "dd2_nested"])
def test_classic_expressions(name):
    expr, target = classic_expressions()[name]
    assert eval_level(expr) == target
    data = expr.to_json()
    assert data["op"] == "complement"
    assert data["level"] in ("1", "2")


def test_classic_expressions_need_two_letters():
    with pytest.raises(PreconditionViolated):
        classic_expressions("abc")


# --- strictness and interleaving --------------------------------------------------


@pytest.mark.parametrize("kind", ["st0", "dd0"])
def test_strictness(kind):
    bundle = strictness_witnesses(builtin_basis(kind, A), 2)
    assert bundle.ok
    assert bundle.augmented == (kind == "st0")
    for r in bundle.rows:
        assert len(r.u) < len(r.v)


def test_strictness_words_for_period_one():
    bundle = strictness_witnesses(builtin_basis("dd0", A), 1)
    assert bundle.period == 1
    assert bundle.L == lang(".*abba.*")
    u0 = bundle.rows[0].u
    assert u0 == "aba" * 2
    assert bundle.rows[0].v == u0 + "abba" + u0
    assert bundle.rows[1].u == "aba" * 4


def test_strictness_needs_two_letters():
    with pytest.raises(AlphabetTooSmall):
        strictness_witnesses(builtin_basis("dd0", "a"), 1)


def test_interleaving():
    assert all(interleaving_check().values())


def test_regex_oracle_for_piece():
    P = piece_complement("ba", A).language()
    assert same_on_words(P, regex_predicate("a*b*"))
