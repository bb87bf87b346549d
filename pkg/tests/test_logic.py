from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concathier.classes import builtin_basis
from concathier.errors import (
    BadEncoding,
    BudgetExceeded,
    FormulaSyntaxError,
    NotInClass,
    NotInFragment,
    NotSigmaN,
    UnboundVariable,
    UnknownLanguage,
    UnknownLetter,
    UnknownPredicate,
)
from concathier.logic import (
    SENTENCE_CATALOG,
    Exists,
    Forall,
    Not,
    Or,
    classify,
    compile_sentence,
    decode,
    encode,
    evaluate,
    extended_alphabet,
    free_variables,
    good_filter,
    inv_alpha,
    marked_concat_sentence,
    nnf,
    normalize_sigma,
    parse_formula,
    prenex,
    project,
    round_trip_check,
    split_by_letter,
    to_text,
)
from concathier.logic import _Compiler
from concathier.regular import Alphabet, Dfa, concat, marked_concat, star, union_all
from oracles import regex_predicate, words

A = Alphabet("ab")
ST0 = builtin_basis("st0", A)
DD0 = builtin_basis("dd0", A)
BASES = {"st0": ST0, "dd0": DD0}


def lang(p):
    return Dfa.from_regex(p, A)


# --- parsing ---------------------------------------------------------------------


def test_parse_and_print_round_trip():
    for text, basis in SENTENCE_CATALOG:
        f = parse_formula(text, BASES[basis])
        assert parse_formula(to_text(f), BASES[basis]) == f


@pytest.mark.parametrize("text,exc", [
    ("exists x.", FormulaSyntaxError),
    ("exists . a(x)", FormulaSyntaxError),
    ("a(x) &", FormulaSyntaxError),
    ("(a(x)", FormulaSyntaxError),
    ("c(x)", UnknownLetter),
    ("I{nothing}(x, y)", UnknownLanguage),
    ("min(x)", UnknownPredicate),
    ("foo(x)", UnknownPredicate),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_formula(text, ST0)


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("a(x) & & b(x)", ST0)
    assert info.value.pos == 7


def test_aliases_over_dd0():
    f = parse_formula("exists x. min(x) & a(x)", DD0)
    g = parse_formula("exists x. P{eps}(x) & a(x)", DD0)
    assert f == g


# --- semantics -----------------------------------------------------------------


def test_evaluate_examples():
    f = parse_formula("exists x. exists y. x < y & a(x) & b(y)", ST0)
    assert evaluate(f, "aab")
    assert not evaluate(f, "ba")
    g = parse_formula("a(x) & +1(x, y) & b(y)", DD0)
    assert evaluate(g, "ab", {"x": 1, "y": 2})
    assert not evaluate(g, "abb", {"x": 1, "y": 3})
    assert evaluate(parse_formula("epsilon", DD0), "")
    assert evaluate(parse_formula("forall x. a(x)", ST0), "")
    with pytest.raises(UnboundVariable):
        evaluate(parse_formula("a(x)", ST0), "a")


def test_infix_predicate():
    f = parse_formula("I{Aplus}(x, y)", DD0)
    assert not evaluate(f, "ab", {"x": 1, "y": 2})
    assert evaluate(f, "aab", {"x": 1, "y": 3})
    assert not evaluate(f, "aab", {"x": 3, "y": 1})


def test_free_variables():
    f = parse_formula("exists x. a(x) & x < y", ST0)
    assert free_variables(f) == {"y"}


@pytest.mark.parametrize("text,cls", [
    ("a(x)", "Sigma(0)"),
    ("exists x. a(x)", "Sigma(1)"),
    ("forall x. a(x)", "Pi(1)"),
    ("(exists x. a(x)) & (forall y. b(y))", "BSigma(1)"),
    ("exists x. forall y. x < y | x = y", "Sigma(2)"),
    ("exists x. exists y. forall z. exists t. t < z | x < y", "Sigma(3)"),
    ("forall x. forall y. exists z. forall t. t < z | x < y", "Pi(3)"),
    ("!(exists x. a(x))", "Pi(1)"),
])
def test_classify(text, cls):
    assert str(classify(parse_formula(text, ST0))) == cls


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SENTENCE_CATALOG), st.text("ab", max_size=6))
def test_normal_forms_preserve_truth(item, w):
    text, basis = item
    f = parse_formula(text, BASES[basis])
    assert evaluate(nnf(f), w) == evaluate(f, w)
    # prenex forms can only disagree on the empty word
    if w:
        assert evaluate(prenex(f), w) == evaluate(f, w)
    cls = classify(f)
    if cls.kind == "Sigma" and cls.n >= 1:
        assert evaluate(normalize_sigma(f, cls.n - 1), w) == evaluate(f, w)


def test_normalize_sigma_fixes_empty_word():
    f = parse_formula("(forall x. a(x)) | exists y. b(y)", ST0)
    g = normalize_sigma(f, 1)
    for w in words("ab", 5):
        assert evaluate(g, w) == evaluate(f, w)
    with pytest.raises(NotSigmaN):
        normalize_sigma(parse_formula("forall x. exists y. x < y", ST0), 0)


# --- encodings --------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.text("ab", min_size=1, max_size=6), st.data())
def test_encode_decode(w, data):
    ell = data.draw(st.integers(0, 3))
    pos = tuple(data.draw(st.integers(1, len(w))) for _ in range(ell))
    enc = encode(w, pos)
    assert decode(enc, ell, A) == (w, pos)
    if ell:
        Aext = extended_alphabet(A, ell)
        assert all(x in Aext for x in enc)
        assert good_filter(A, ell).accepts(enc)


def test_bad_encodings():
    with pytest.raises(BadEncoding):
        encode("ab", (3,))
    with pytest.raises(BadEncoding):
        decode((((0,), "a"), ((0,), "b")), 1, A)
    with pytest.raises(BadEncoding):
        decode((((1,), "a"), ((1,), "b")), 1, A)


def test_extended_alphabet_size():
    assert len(extended_alphabet(A, 0)) == 2
    assert len(extended_alphabet(A, 2)) == 8


def test_good_filter_counts_last_bit():
    Aext = extended_alphabet(A, 2)
    G = good_filter(A, 2)
    for n in range(4):
        for enc in product(Aext.letters, repeat=n):
            assert G.accepts(enc) == (sum(x[0][1] for x in enc) == 1)


def test_project_and_inverse():
    A1 = extended_alphabet(A, 1)
    # words over A_1 where the marked position carries a
    L = Dfa.universal(A1)
    L = concat(L, Dfa.letters(A1, [((1,), "a")]), L)
    assert project(L & good_filter(A, 1), A, 0) == lang(".*a.*")
    # inv_alpha keeps words whose zero-extension lies in the language
    Z = Dfa.letters(A1, [((0,), "a"), ((0,), "b")])
    assert inv_alpha(star(Z), A, 0) == Dfa.universal(A)


def test_split_by_letter():
    L = lang("a*ba*")
    pieces = split_by_letter(L, None, "b")
    assert union_all([marked_concat(P, b, S) for P, b, S in pieces], A) == L
    with pytest.raises(NotInClass):
        split_by_letter(L, DD0, "b")
    full = Dfa.universal(A)
    assert split_by_letter(full, ST0, "a") == [(full, "a", full)]


# --- compilation ------------------------------------------------------------------


@pytest.mark.parametrize("text,basis", SENTENCE_CATALOG)
def test_catalog_round_trip(text, basis):
    C = BASES[basis]
    f = parse_formula(text, C)
    report = round_trip_check(f, C, maxlen=6, kmax=1)
    assert report["agree"], report["mismatches"]
    direct, claim = compile_sentence(f, C)
    split, _ = compile_sentence(f, C, via_split=True)
    assert direct == split


@pytest.mark.parametrize("text,pattern", [
    ("exists x. a(x) | !a(x)", "(a|b)+"),
    ("(exists x. a(x)) | !(exists x. a(x))", "(a|b)*"),
    ("exists x. exists y. x < y & a(x) & b(y)", ".*a.*b.*"),
])
def test_compile_against_regex(text, pattern):
    dfa, _ = compile_sentence(parse_formula(text, ST0), ST0)
    assert dfa == lang(pattern)


def test_alternating_words_sentence():
    text = ("!(exists x. (min(x) & b(x)) | (max(x) & a(x)) | "
            "(exists y. +1(x, y) & ((a(x) & a(y)) | (b(x) & b(y)))))")
    f = parse_formula(text, DD0)
    dfa, claim = compile_sentence(f, DD0)
    assert dfa == lang("(ab)*")
    assert str(classify(f)) == "Pi(1)"
    assert claim.complement


@pytest.mark.parametrize("ell", [0, 1, 2])
def test_open_formula_encoding(ell):
    variables = ("x", "y")[:ell]
    body = {
        0: "exists x. a(x)",
        1: "exists y. x < y & b(y)",
        2: "x < y & a(x) & I{Astar}(x, y)",
    }[ell]
    f = nnf(parse_formula(body, ST0))
    dfa = _Compiler(ST0).compile(f, variables)
    for w in words("ab", 4):
        for pos in product(range(1, len(w) + 1), repeat=ell):
            mu = dict(zip(variables, pos))
            assert dfa.accepts(encode(w, pos)) == evaluate(f, w, mu)


MARKED_PAIRS = [
    ("exists x. a(x)", "forall y. b(y)"),
    ("forall x. a(x)", "exists y. a(y)"),
    ("exists x. exists y. x < y & b(x) & a(y)", "forall x. a(x)"),
]


@pytest.mark.parametrize("t1,t2", MARKED_PAIRS)
@pytest.mark.parametrize("letter", ["a", "b"])
def test_marked_concat_sentence(t1, t2, letter):
    f1, f2 = parse_formula(t1, ST0), parse_formula(t2, ST0)
    g = marked_concat_sentence(f1, letter, f2, ST0)
    d1, _ = compile_sentence(f1, ST0)
    d2, _ = compile_sentence(f2, ST0)
    target = marked_concat(d1, letter, d2)
    dg, _ = compile_sentence(g, ST0)
    assert dg == target
    for w in words("ab", 5):
        assert evaluate(g, w) == target.accepts(w)


def test_marked_concat_errors():
    with pytest.raises(UnboundVariable):
        marked_concat_sentence(parse_formula("a(x)", ST0), "a",
                               parse_formula("exists y. a(y)", ST0), ST0)
    with pytest.raises(NotSigmaN):
        marked_concat_sentence(parse_formula("forall x. exists y. x < y", ST0), "a",
                               parse_formula("exists y. a(y)", ST0), ST0, n=1)


def test_compile_errors():
    f = parse_formula("forall x. exists y. x < y", ST0)
    with pytest.raises(NotInFragment):
        compile_sentence(f, ST0, n=0)
    with pytest.raises(UnboundVariable):
        compile_sentence(parse_formula("a(x)", ST0), ST0)
    g = parse_formula("exists x. exists y. exists z. x < y & y < z & a(x) & b(y) & a(z)", ST0)
    with pytest.raises(BudgetExceeded):
        compile_sentence(g, ST0, budget=2)


def test_level_claims():
    f = parse_formula("exists x. exists y. x < y & a(x) & b(y)", ST0)
    _, claim = compile_sentence(f, ST0)
    assert str(claim) == "st0[1/2]"
    _, claim = compile_sentence(parse_formula("forall x. a(x)", ST0), ST0)
    assert str(claim) == "co-st0[1/2]"


def test_tautology_is_universal():
    f = parse_formula("forall x. a(x) | !a(x)", ST0)
    dfa, _ = compile_sentence(f, ST0)
    assert dfa == Dfa.universal(A)
    assert isinstance(nnf(Not(Exists("x", Or(())))), Forall)


def test_regex_oracle_agrees_with_compiler():
    f = parse_formula("exists x. max(x) & b(x)", DD0)
    dfa, _ = compile_sentence(f, DD0)
    pred = regex_predicate("(a|b)*b")
    assert all(dfa.accepts(w) == pred(w) for w in words("ab", 6))
