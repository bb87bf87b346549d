import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concathier.errors import AlphabetMismatch, RegexSyntaxError, UnknownLetter
from concathier.regular import (
    Alphabet,
    Dfa,
    concat,
    letter_splits,
    marked_concat,
    shortest_common_word,
    star,
    union_all,
)
from oracles import nerode_classes, regex_predicate, words

A = Alphabet("ab")
W6 = words("ab", 6)


def regexes():
    leaf = st.sampled_from(["a", "b", "_", "."])
    return st.recursive(
        leaf,
        lambda inner: st.one_of(
            st.tuples(inner, inner).map(lambda t: f"({t[0]}|{t[1]})"),
            st.tuples(inner, inner).map(lambda t: f"{t[0]}{t[1]}"),
            inner.map(lambda r: f"({r})*"),
        ),
        max_leaves=6,
    )


def lang(pattern):
    return Dfa.from_regex(pattern, A)


def agrees(d, pred, ws=W6):
    return all(d.accepts(w) == pred(w) for w in ws)


# --- compilation -------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(regexes())
def test_regex_matches_python_re(pattern):
    assert agrees(lang(pattern), regex_predicate(pattern))


def test_universal_and_sizes():
    assert lang("(a|b)*") == Dfa.universal(A)
    assert lang("a*b*").n_states == 3
    assert nerode_classes(regex_predicate("a*b*"), "ab") == 3


@pytest.mark.parametrize("bad", ["", "(a", "a|", "*a", "a)", "|"])
def test_regex_syntax_errors(bad):
    with pytest.raises(RegexSyntaxError):
        lang(bad)


def test_unknown_letter():
    with pytest.raises(UnknownLetter):
        lang("ac")


def test_syntax_error_reports_position():
    with pytest.raises(RegexSyntaxError) as exc:
        lang("ab|")
    assert exc.value.pos == 3


# --- Boolean operations --------------------------------------------------------


def test_boolean_examples():
    full = Dfa.universal(A)
    assert ~full == Dfa.empty(A)
    assert lang(".*a.*") | lang(".*b.*") == Dfa.nonempty(A)
    B = Alphabet("abc")
    assert Dfa.from_regex("(a|b)*", B) & Dfa.from_regex("(b|c)*", B) == Dfa.from_regex("b*", B)


@settings(max_examples=60, deadline=None)
@given(regexes(), regexes())
def test_boolean_ops_against_enumeration(r1, r2):
    p1, p2 = regex_predicate(r1), regex_predicate(r2)
    d1, d2 = lang(r1), lang(r2)
    assert agrees(d1 | d2, lambda w: p1(w) or p2(w))
    assert agrees(d1 & d2, lambda w: p1(w) and p2(w))
    assert agrees(~d1, lambda w: not p1(w))
    assert agrees(d1.difference(d2), lambda w: p1(w) and not p2(w))
    assert d1.issubset(d1 | d2)
    if d1 == d2:
        assert all(p1(w) == p2(w) for w in W6)


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        lang("a") | Dfa.from_regex("a", "abc")


# --- concatenation -------------------------------------------------------------


def test_concat_examples():
    full = Dfa.universal(A)
    assert marked_concat(full, "a", full) == lang(".*a.*")
    K = lang("a*b")
    assert concat(K, Dfa.epsilon(A)) == K
    assert marked_concat(lang("a*"), "b", lang("a*")) == lang("a*ba*")


@settings(max_examples=50, deadline=None)
@given(regexes(), regexes())
def test_concat_and_star_against_re(r1, r2):
    assert agrees(concat(lang(r1), lang(r2)), regex_predicate(f"({r1})({r2})"))
    assert agrees(star(lang(r1)), regex_predicate(f"({r1})*"))


# --- quotients and residuals -----------------------------------------------------


def test_quotient_examples():
    L = lang(".*a.*")
    assert L.left_quotient("a") == Dfa.universal(A)
    M = lang("(ab|b)*a")
    assert M.left_quotient("ba") == M.left_quotient("b").left_quotient("a")
    assert (~M).left_quotient("ab") == ~M.left_quotient("ab")


@settings(max_examples=50, deadline=None)
@given(regexes(), regexes(), st.sampled_from(words("ab", 3)), st.sampled_from(words("ab", 3)))
def test_quotient_laws(r1, r2, u, v):
    L1, L2 = lang(r1), lang(r2)
    assert (L1 | L2).left_quotient(u) == L1.left_quotient(u) | L2.left_quotient(u)
    assert (~L1).left_quotient(u) == ~L1.left_quotient(u)
    assert L1.left_quotient(u + v) == L1.left_quotient(u).left_quotient(v)
    p = regex_predicate(r1)
    assert agrees(L1.left_quotient(u), lambda w: p(u + w), words("ab", 5))
    assert agrees(L1.right_quotient(u), lambda w: p(w + u), words("ab", 5))


def test_residuals():
    assert set(Dfa.universal(A).left_residuals()) == {Dfa.universal(A)}
    assert set(Dfa.empty(A).left_residuals()) == {Dfa.empty(A)}
    L = lang("a*b*")
    res = set(L.left_residuals())
    assert len(res) == 3
    assert res == {L.left_quotient(u) for u in words("ab", 3)}


@settings(max_examples=40, deadline=None)
@given(regexes())
def test_residual_count_is_state_count(r):
    L = lang(r)
    assert len(set(L.left_residuals())) == L.n_states
    assert {L.left_quotient(u) for u in words("ab", L.n_states)} == set(L.left_residuals())


# --- canonical form, enumeration, serialisation ----------------------------------


@settings(max_examples=50, deadline=None)
@given(regexes())
def test_canonical_idempotent(r):
    d = lang(r)
    again = Dfa(A, d.delta, 0, d.accepting)
    assert again == d and again.delta == d.delta
    assert Dfa.from_json(json.loads(json.dumps(d.to_json()))) == d


def test_enumerate_and_membership():
    assert lang("a*b*").enumerate(2) == ["", "a", "b", "aa", "ab", "bb"]
    assert lang("(ab)*").accepts("ab")
    assert not lang("(ab)*").accepts("ba")


def test_json_schema_fields():
    data = lang("ab").to_json()
    assert set(data) == {"alphabet", "states", "transitions", "initial", "accepting"}
    assert all(len(t) == 3 for t in data["transitions"])


# --- helpers used by the engines -------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.lists(regexes(), min_size=1, max_size=3))
def test_shortest_common_word(rs):
    preds = [regex_predicate(r) for r in rs]
    expect = next((w for w in words("ab", 7) if all(p(w) for p in preds)), None)
    got = shortest_common_word([lang(r) for r in rs])
    if expect is not None:
        assert got == expect
    else:
        assert got is None or len(got) > 7


@settings(max_examples=40, deadline=None)
@given(regexes(), st.sampled_from("ab"))
def test_letter_splits_rebuild(r, b):
    L = lang(r)
    pieces = [marked_concat(P, b, S) for P, S in letter_splits(L, b)]
    assert union_all(pieces, A) == L & lang(f".*{b}.*")
