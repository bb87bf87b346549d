"""First-order sentences over a basis of languages, and their compilation.

Positions of a word are 1..n.  Besides letter tests ``a(x)`` and equality
the signature has one predicate family per member L of the basis:

* ``I{L}(x, y)``: x < y and the infix strictly between them lies in L;
* ``P{L}(x)``: the prefix before x lies in L;
* ``S{L}(x)``: the suffix after x lies in L;
* ``N{L}``: the whole word lies in L.

Sentences are compiled into automata by encoding variable assignments as
extra bits on each letter: an existential quantifier becomes a projection
after keeping only the words that mark exactly one position.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian

from .errors import (
    BadEncoding,
    BudgetExceeded,
    FormulaSyntaxError,
    NotInClass,
    NotInFragment,
    NotSigmaN,
    UnboundVariable,
    UnknownBasis,
    UnknownLanguage,
    UnknownLetter,
    UnknownPredicate,
)
from .regular import Alphabet, Dfa, Nfa, concat, letter_splits, marked_concat, union_all

__all__ = [
    "Const", "Label", "Eq", "Infix", "Prefix", "Suffix", "Whole",
    "Not", "And", "Or", "Exists", "Forall",
    "LangRef", "AlternationClass", "LevelClaim",
    "parse_formula", "evaluate", "free_variables", "classify", "nnf", "prenex",
    "normalize_sigma", "marked_concat_sentence", "derived_signature",
    "extended_alphabet", "encode", "decode", "good_filter", "project", "inv_alpha",
    "split_by_letter", "compile_sentence", "round_trip_check", "SENTENCE_CATALOG",
]


# ---------------------------------------------------------------------------
# Syntax


@dataclass(frozen=True)
class LangRef:
    name: str
    dfa: Dfa

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Label:
    letter: object
    var: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Infix:
    lang: LangRef
    x: str
    y: str


@dataclass(frozen=True)
class Prefix:
    lang: LangRef
    x: str


@dataclass(frozen=True)
class Suffix:
    lang: LangRef
    x: str


@dataclass(frozen=True)
class Whole:
    lang: LangRef


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


ATOMS = (Const, Label, Eq, Infix, Prefix, Suffix, Whole)


def to_text(f):
    """Concrete syntax accepted back by :func:`parse_formula`."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Label):
        return f"{f.letter}({f.var})"
    if isinstance(f, Eq):
        return f"eq({f.x}, {f.y})"
    if isinstance(f, Infix):
        return f"I{{{f.lang}}}({f.x}, {f.y})"
    if isinstance(f, Prefix):
        return f"P{{{f.lang}}}({f.x})"
    if isinstance(f, Suffix):
        return f"S{{{f.lang}}}({f.x})"
    if isinstance(f, Whole):
        return f"N{{{f.lang}}}"
    if isinstance(f, Not):
        return f"!{_wrap(f.arg)}"
    if isinstance(f, And):
        return " & ".join(_wrap(a) for a in f.args) if f.args else "true"
    if isinstance(f, Or):
        return " | ".join(_wrap(a) for a in f.args) if f.args else "false"
    if isinstance(f, Exists):
        return f"exists {f.var}. {to_text(f.body)}"
    if isinstance(f, Forall):
        return f"forall {f.var}. {to_text(f.body)}"
    raise TypeError(f)


def _wrap(f):
    if isinstance(f, (And, Or, Exists, Forall)):
        return f"({to_text(f)})"
    return to_text(f)


def conj(*args):
    return args[0] if len(args) == 1 else And(tuple(args))


def disj(*args):
    return args[0] if len(args) == 1 else Or(tuple(args))


# ---------------------------------------------------------------------------
# Signature and parser


def derived_signature(basis):
    """Alias table: alias -> (predicate family, member alias) for a builtin basis."""
    table = {"<": ("I", "Astar")}
    if basis == "st0":
        return table
    if basis == "dd0":
        table.update(
            {
                "+1": ("I", "eps"),
                "min": ("P", "eps"),
                "max": ("S", "eps"),
                "epsilon": ("N", "eps"),
            }
        )
        return table
    raise UnknownBasis(basis)


def _aliases_for(C):
    A = C.alphabet
    table = {}
    if C.contains(Dfa.universal(A)):
        table["<"] = ("I", "Astar")
    if C.contains(Dfa.epsilon(A)):
        table.update(derived_signature("dd0"))
        if "<" not in table:
            del table["<"]
    return table


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<arrow>->)
      | (?P<succ>\+1)
      | (?P<brace>\{[^}]*\})
      | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<punct>[()!~&|<=.,:])
      | (?P<char>\S)
    )""",
    re.VERBOSE,
)

_QUANT = {"exists": Exists, "forall": Forall}


class _Parser:
    def __init__(self, text, C):
        self.text = text
        self.C = C
        self.aliases = _aliases_for(C)
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                raise FormulaSyntaxError("unreadable input", pos)
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self, off=0):
        j = self.i + off
        return self.toks[j] if j < len(self.toks) else (None, None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {val!r}", pos)

    def parse(self):
        if not self.toks:
            raise FormulaSyntaxError("empty formula", 0)
        f = self.implication()
        if self.peek()[0] is not None:
            raise FormulaSyntaxError(f"unexpected {self.peek()[1]!r}", self.peek()[2])
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek()[0] == "arrow":
            self.take()
            right = self.implication()
            return Or((Not(left), right))
        return left

    def disjunction(self):
        parts = [self.conjunction()]
        while self.peek()[1] in ("|", "or"):
            self.take()
            parts.append(self.conjunction())
        return disj(*parts)

    def conjunction(self):
        parts = [self.unary()]
        while self.peek()[1] in ("&", "and"):
            self.take()
            parts.append(self.unary())
        return conj(*parts)

    def unary(self):
        kind, val, pos = self.peek()
        if val in ("!", "~", "not"):
            self.take()
            return Not(self.unary())
        if val in _QUANT:
            self.take()
            var = self.variable()
            if self.peek()[1] in (".", ":"):
                self.take()
            return _QUANT[val](var, self.implication())
        if val == "(":
            self.take()
            f = self.implication()
            self.expect(")")
            return f
        return self.atom()

    def variable(self):
        kind, val, pos = self.take()
        if kind != "ident" or val in _KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable, found {val!r}", pos)
        return val

    def member(self, brace, pos):
        name = brace[1:-1].strip()
        try:
            return LangRef(name, self.C.member(name))
        except KeyError:
            raise UnknownLanguage(f"no member {name!r} in {self.C.name}") from None

    def alias_ref(self, alias, pos):
        if alias not in self.aliases:
            raise UnknownPredicate(f"{alias!r} is not available over {self.C.name}")
        family, member = self.aliases[alias]
        return family, LangRef(member, self.C.member(member))

    def args(self, n):
        self.expect("(")
        out = [self.variable()]
        for _ in range(n - 1):
            self.expect(",")
            out.append(self.variable())
        self.expect(")")
        return out

    def atom(self):
        kind, val, pos = self.take()
        if kind is None:
            raise FormulaSyntaxError("unexpected end of formula", pos)
        if val == "true":
            return Const(True)
        if val == "false":
            return Const(False)
        if val == "eq":
            x, y = self.args(2)
            return Eq(x, y)
        if val in ("I", "P", "S", "N") and self.peek()[0] == "brace":
            _, brace, bpos = self.take()
            ref = self.member(brace, bpos)
            if val == "I":
                return Infix(ref, *self.args(2))
            if val == "P":
                return Prefix(ref, *self.args(1))
            if val == "S":
                return Suffix(ref, *self.args(1))
            return Whole(ref)
        if kind == "succ" or val == "<":
            family, ref = self.alias_ref(val, pos)
            return Infix(ref, *self.args(2))
        if val in ("min", "max"):
            family, ref = self.alias_ref(val, pos)
            (x,) = self.args(1)
            return Prefix(ref, x) if family == "P" else Suffix(ref, x)
        if val == "epsilon":
            _, ref = self.alias_ref(val, pos)
            return Whole(ref)
        if val in self.C.alphabet and self.peek()[1] == "(":
            (x,) = self.args(1)
            return Label(val, x)
        if kind == "ident" and self.peek()[1] in ("<", "="):
            op = self.take()[1]
            y = self.variable()
            if op == "=":
                return Eq(val, y)
            _, ref = self.alias_ref("<", pos)
            return Infix(ref, val, y)
        if kind == "ident" and self.peek()[1] == "(":
            if len(val) == 1:
                raise UnknownLetter(f"letter {val!r} not in the alphabet")
            raise UnknownPredicate(f"unknown predicate {val!r} at position {pos}")
        raise FormulaSyntaxError(f"unexpected {val!r}", pos)


_KEYWORDS = {"exists", "forall", "true", "false", "eq", "not", "and", "or",
             "min", "max", "epsilon"}


def parse_formula(text, C):
    """Parse a formula over the predicates of class C.

    Grammar: ``!``, ``&``, ``|``, ``->``, ``exists x. F``, ``forall x. F``
    (quantifier bodies extend as far right as possible), atoms ``a(x)``,
    ``eq(x, y)`` or ``x = y``, ``I{L}(x, y)``, ``P{L}(x)``, ``S{L}(x)``,
    ``N{L}`` with L a member name, plus the aliases ``x < y``, ``+1(x, y)``,
    ``min(x)``, ``max(x)`` and ``epsilon`` when the class provides them.
    """
    return _Parser(text, C).parse()


# ---------------------------------------------------------------------------
# Semantics


def free_variables(f):
    if isinstance(f, Const) or isinstance(f, Whole):
        return set()
    if isinstance(f, Label):
        return {f.var}
    if isinstance(f, (Prefix, Suffix)):
        return {f.x}
    if isinstance(f, (Eq, Infix)):
        return {f.x, f.y}
    if isinstance(f, Not):
        return free_variables(f.arg)
    if isinstance(f, (And, Or)):
        return set().union(*(free_variables(a) for a in f.args)) if f.args else set()
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.body) - {f.var}
    raise TypeError(f)


def all_variables(f):
    if isinstance(f, (Exists, Forall)):
        return {f.var} | all_variables(f.body)
    if isinstance(f, Not):
        return all_variables(f.arg)
    if isinstance(f, (And, Or)):
        return set().union(*(all_variables(a) for a in f.args)) if f.args else set()
    return free_variables(f)


def evaluate(f, word, assignment=None):
    """Truth of ``f`` on ``word`` under ``assignment`` (variable -> 1-based position)."""
    mu = dict(assignment or {})
    n = len(word)
    for v, p in mu.items():
        if not 1 <= p <= n:
            raise ValueError(f"position {p} of {v} outside 1..{n}")
    cache = {}

    def inside(ref, part):
        key = (ref, part)
        r = cache.get(key)
        if r is None:
            r = cache[key] = ref.dfa.accepts(part)
        return r

    def pos(v):
        try:
            return mu[v]
        except KeyError:
            raise UnboundVariable(v) from None

    def ev(g):
        if isinstance(g, Const):
            return g.value
        if isinstance(g, Label):
            return word[pos(g.var) - 1] == g.letter
        if isinstance(g, Eq):
            return pos(g.x) == pos(g.y)
        if isinstance(g, Infix):
            i, j = pos(g.x), pos(g.y)
            return i < j and inside(g.lang, word[i:j - 1])
        if isinstance(g, Prefix):
            return inside(g.lang, word[:pos(g.x) - 1])
        if isinstance(g, Suffix):
            return inside(g.lang, word[pos(g.x):])
        if isinstance(g, Whole):
            return inside(g.lang, word)
        if isinstance(g, Not):
            return not ev(g.arg)
        if isinstance(g, And):
            return all(ev(a) for a in g.args)
        if isinstance(g, Or):
            return any(ev(a) for a in g.args)
        if isinstance(g, (Exists, Forall)):
            saved = mu.get(g.var)
            want = isinstance(g, Exists)
            result = not want
            for p in range(1, n + 1):
                mu[g.var] = p
                if ev(g.body) == want:
                    result = want
                    break
            if saved is None:
                mu.pop(g.var, None)
            else:
                mu[g.var] = saved
            return result
        raise TypeError(g)

    return ev(f)


# ---------------------------------------------------------------------------
# Normal forms and classification


def nnf(f):
    """Negation normal form: negations only in front of atoms."""
    return _nnf(f, False)


def _nnf(f, neg):
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, Const):
        return Const(f.value != neg)
    if isinstance(f, ATOMS):
        return Not(f) if neg else f
    if isinstance(f, (And, Or)):
        args = tuple(_nnf(a, neg) for a in f.args)
        flip = isinstance(f, And) == neg
        return Or(args) if flip else And(args)
    if isinstance(f, Exists):
        body = _nnf(f.body, neg)
        return Forall(f.var, body) if neg else Exists(f.var, body)
    if isinstance(f, Forall):
        body = _nnf(f.body, neg)
        return Exists(f.var, body) if neg else Forall(f.var, body)
    raise TypeError(f)


@dataclass(frozen=True)
class AlternationClass:
    kind: str  # "Sigma", "Pi" or "BSigma"
    n: int

    def __str__(self):
        return f"{self.kind}({self.n})"


def _levels(f):
    """(s, p, b) for a formula in negation normal form.

    s / p: least n with the formula in Sigma_n / Pi_n once quantifiers are
    pulled out optimally; b: least n with it a Boolean combination of
    Sigma_n formulas.
    """
    if isinstance(f, ATOMS) or isinstance(f, Not):
        return (0, 0, 0)
    if isinstance(f, (And, Or)):
        if not f.args:
            return (0, 0, 0)
        ls = [_levels(a) for a in f.args]
        return tuple(max(x[i] for x in ls) for i in range(3))
    s, p, _ = _levels(f.body)
    if isinstance(f, Exists):
        s2 = min(max(s, 1), p + 1)
        return (s2, s2 + 1, s2)
    p2 = min(max(p, 1), s + 1)
    return (p2 + 1, p2, p2)


def classify(f):
    """Least alternation class containing ``f`` syntactically."""
    s, p, b = _levels(nnf(f))
    if s == 0:
        return AlternationClass("Sigma", 0)
    if b < min(s, p):
        return AlternationClass("BSigma", b)
    if s <= p:
        return AlternationClass("Sigma", s)
    return AlternationClass("Pi", p)


def sigma_level(f):
    return _levels(nnf(f))[0]


def _rename_apart(f, used, renaming=None, counter=None):
    """Give every bound variable a fresh name (x1, x2, ... in traversal order)."""
    renaming = renaming or {}
    counter = counter if counter is not None else [0]

    def fresh():
        while True:
            counter[0] += 1
            name = f"x{counter[0]}"
            if name not in used:
                used.add(name)
                return name

    def go(g, ren):
        r = lambda v: ren.get(v, v)  # noqa: E731
        if isinstance(g, Const) or isinstance(g, Whole):
            return g
        if isinstance(g, Label):
            return Label(g.letter, r(g.var))
        if isinstance(g, Eq):
            return Eq(r(g.x), r(g.y))
        if isinstance(g, Infix):
            return Infix(g.lang, r(g.x), r(g.y))
        if isinstance(g, Prefix):
            return Prefix(g.lang, r(g.x))
        if isinstance(g, Suffix):
            return Suffix(g.lang, r(g.x))
        if isinstance(g, Not):
            return Not(go(g.arg, ren))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(a, ren) for a in g.args))
        name = fresh()
        return type(g)(name, go(g.body, {**ren, g.var: name}))

    return go(f, renaming)


def _merge(b1, b2, start):
    """Shortest alternating block list starting with ``start`` that interleaves b1, b2."""
    b1, b2 = list(b1), list(b2)
    out = []
    q = start
    while b1 or b2:
        vars_ = []
        for seq in (b1, b2):
            if seq and seq[0][0] == q:
                vars_ += seq.pop(0)[1]
        if vars_:
            out.append((q, tuple(vars_)))
        q = "A" if q == "E" else "E"
    return out


def _prefix_options(f):
    """Candidate (blocks, matrix) pulls for a renamed-apart NNF formula.

    Returns a dict keyed by the first quantifier ("E", "A"; "" when there are
    no quantifiers) with the fewest blocks for that start.
    """
    if isinstance(f, ATOMS) or isinstance(f, Not):
        return {"": ([], f)}
    if isinstance(f, (Exists, Forall)):
        q = "E" if isinstance(f, Exists) else "A"
        best = None
        for blocks, matrix in _prefix_options(f.body).values():
            if blocks and blocks[0][0] == q:
                cand = [(q, (f.var,) + blocks[0][1])] + blocks[1:]
            else:
                cand = [(q, (f.var,))] + blocks
            if best is None or len(cand) < len(best[0]):
                best = (cand, matrix)
        return {q: best}
    # conjunction / disjunction: fold pairwise
    opts = {"": ([], [])}
    for arg in f.args:
        sub = _prefix_options(arg)
        new = {}
        for b1, m1 in opts.values():
            for b2, m2 in sub.values():
                for start in ("E", "A"):
                    blocks = _merge(b1, b2, start)
                    key = blocks[0][0] if blocks else ""
                    if key not in new or len(blocks) < len(new[key][0]):
                        new[key] = (blocks, m1 + [m2])
        opts = new
    return {k: (b, type(f)(tuple(ms))) for k, (b, ms) in opts.items()}


def prenex(f, start=None):
    """Prenex form with the fewest quantifier alternations.

    Bound variables are renamed apart first.  ``start`` ("E" or "A") asks
    for a prefix beginning with that quantifier when possible.  Pulling
    quantifiers out of connectives is only sound on non-empty words.
    """
    g = _rename_apart(nnf(f), set(free_variables(f)))
    opts = _prefix_options(g)
    if start in opts:
        blocks, matrix = opts[start]
    elif "" in opts:
        blocks, matrix = opts[""]
    else:
        blocks, matrix = min(opts.values(), key=lambda bm: len(bm[0]))
    out = matrix
    for q, vars_ in reversed(blocks):
        for v in reversed(vars_):
            out = Exists(v, out) if q == "E" else Forall(v, out)
    return out


def quantifier_blocks(f):
    out = []
    while isinstance(f, (Exists, Forall)):
        q = "E" if isinstance(f, Exists) else "A"
        if out and out[-1][0] == q:
            out[-1] = (q, out[-1][1] + 1)
        else:
            out.append((q, 1))
        f = f.body
    return out


def normalize_sigma(f, n):
    """Rewrite a Sigma_{n+1} sentence into prenex shape, exact on every word.

    The result is ``psi``, ``psi | forall x. false`` or
    ``psi & exists x. true`` where ``psi`` is the prenex form; the extra
    disjunct / conjunct restores the truth value on the empty word.
    """
    s = sigma_level(f)
    if s > n + 1:
        raise NotSigmaN(f"formula is not in Sigma_{n + 1} (needs Sigma_{s})")
    psi = prenex(f, start="E")
    on_empty = evaluate(f, "")
    psi_empty = evaluate(psi, "")
    if on_empty == psi_empty:
        return psi
    v = _fresh_name(all_variables(psi), "z")
    if on_empty:
        return Or((psi, Forall(v, Const(False))))
    return And((psi, Exists(v, Const(True))))


def _fresh_name(used, base):
    i = 0
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"


# ---------------------------------------------------------------------------
# Marked concatenation of sentences


def _relativize(f, x, side, full):
    """Restrict quantifiers to positions left (side < 0) or right of x."""

    def bound(y):
        return Infix(full, y, x) if side < 0 else Infix(full, x, y)

    def go(g):
        if isinstance(g, Whole):
            return Prefix(g.lang, x) if side < 0 else Suffix(g.lang, x)
        if isinstance(g, Suffix) and side < 0:
            return Infix(g.lang, g.x, x)
        if isinstance(g, Prefix) and side > 0:
            return Infix(g.lang, x, g.x)
        if isinstance(g, ATOMS):
            return g
        if isinstance(g, Not):
            return Not(go(g.arg))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(go(a) for a in g.args))
        if isinstance(g, Exists):
            return Exists(g.var, And((bound(g.var), go(g.body))))
        return Forall(g.var, Or((Not(bound(g.var)), go(g.body))))

    return go(f)


def marked_concat_sentence(f1, a, f2, C, n=None):
    """Sentence defining L(f1) a L(f2), built from two sentences.

    A fresh variable x marks the letter a; quantifiers of f1 are restricted
    to positions before x, those of f2 to positions after x, and whole-word
    predicates become prefix / suffix / infix predicates around x.
    """
    for f in (f1, f2):
        if free_variables(f):
            raise UnboundVariable(f"not a sentence: free {sorted(free_variables(f))}")
    if n is not None:
        for f in (f1, f2):
            if sigma_level(f) > n:
                raise NotSigmaN(f"operand is not in Sigma_{n}")
    A = C.alphabet
    if a not in A:
        raise UnknownPredicate(f"letter {a!r} not in alphabet")
    full = Dfa.universal(A)
    if not C.contains(full):
        raise UnknownPredicate(f"{C.name} lacks the full language needed for order")
    ref = LangRef("Astar", full)
    x = _fresh_name(all_variables(f1) | all_variables(f2), "x")
    left = _relativize(f1, x, -1, ref)
    right = _relativize(f2, x, +1, ref)
    return Exists(x, And((Label(a, x), left, right)))


# ---------------------------------------------------------------------------
# Encodings of assignments


def extended_alphabet(base, ell):
    """Letters (bits, a) with ``bits`` in {0,1}^ell; the base itself for ell = 0."""
    base = base if isinstance(base, Alphabet) else Alphabet(base)
    if ell == 0:
        return base
    return Alphabet(
        [(bits, a) for bits in _cartesian((0, 1), repeat=ell) for a in base.letters]
    )


def _base_letter(letter, ell):
    return letter if ell == 0 else letter[1]


def _bits(letter, ell):
    return () if ell == 0 else letter[0]


def encode(word, positions, base=None):
    """Encode a word and the positions of x_1..x_ell (1-based) as one word."""
    ell = len(positions)
    n = len(word)
    for p in positions:
        if not 1 <= p <= n:
            raise BadEncoding(f"position {p} outside 1..{n}")
    if ell == 0:
        return word
    return tuple(
        (tuple(1 if p == i else 0 for p in positions), a) for i, a in enumerate(word, 1)
    )


def decode(encoded, ell, base):
    """Inverse of :func:`encode`; raises BadEncoding unless each bit is set once."""
    base = base if isinstance(base, Alphabet) else Alphabet(base)
    if ell == 0:
        return encoded, ()
    letters = [a for _, a in encoded]
    positions = []
    for h in range(ell):
        marks = [i for i, (bits, _) in enumerate(encoded, 1) if bits[h] == 1]
        if len(marks) != 1:
            raise BadEncoding(f"variable {h + 1} is marked {len(marks)} times")
        positions.append(marks[0])
    return base.join(letters), tuple(positions)


def good_filter(base, ell):
    """Words over the ell-bit alphabet whose last bit is set exactly once (ell >= 1)."""
    Aext = extended_alphabet(base, ell)
    row = lambda s: [  # noqa: E731
        min(s + letter[0][-1], 2) for letter in Aext.letters
    ]
    return Dfa(Aext, [row(0), row(1), row(2)], 0, (1,))


def project(L, base, ell):
    """Erase the last bit: a language over A_{ell+1} to one over A_ell."""
    target = extended_alphabet(base, ell)
    if ell == 0:
        return L.image(target, lambda letter: letter[1])
    return L.image(target, lambda letter: (letter[0][:-1], letter[1]))


def inv_alpha(L, base, ell):
    """Words over A_ell whose extension by a zero last bit lies in L."""
    source = extended_alphabet(base, ell)
    if ell == 0:
        return L.inverse_image(source, lambda a: ((0,), a))
    return L.inverse_image(source, lambda letter: (letter[0] + (0,), letter[1]))


def split_by_letter(L, C, b):
    """Triples (P, b, S) whose marked products cover L ∩ A*bA*.

    Unless C is None, L must belong to it; every P and S is then an
    intersection of quotients of L and belongs to C as well.
    """
    if C is not None and not C.contains(L):
        raise NotInClass(f"language is not a member of {C.name}")
    return [(P, b, S) for P, S in letter_splits(L, b)]


# ---------------------------------------------------------------------------
# Compilation


@dataclass(frozen=True)
class LevelClaim:
    """Level of the concatenation hierarchy predicted by the alternation class."""

    basis: str
    level: Fraction
    complement: bool = False

    def __str__(self):
        lv = self.level
        text = str(lv.numerator) if lv.denominator == 1 else f"{lv.numerator}/2"
        return f"{'co-' if self.complement else ''}{self.basis}[{text}]"


def level_claim(cls, C):
    if cls.kind == "Sigma" and cls.n == 0:
        return LevelClaim(C.name, Fraction(0))
    if cls.kind == "Sigma":
        return LevelClaim(C.name, Fraction(2 * cls.n - 1, 2))
    if cls.kind == "Pi":
        return LevelClaim(C.name, Fraction(2 * cls.n - 1, 2), complement=True)
    return LevelClaim(C.name, Fraction(cls.n))


class _Compiler:
    def __init__(self, C, via_split=False, budget=None):
        self.A = C.alphabet
        self.budget = budget
        self.via_split = via_split
        self.full = Dfa.universal(self.A)
        self._pi = {}

    def alphabet(self, ell):
        return extended_alphabet(self.A, ell)

    def marked(self, ell, pred):
        """Letters of A_ell satisfying ``pred(bits, a)``, as a one-letter language."""
        Aext = self.alphabet(ell)
        letters = [x for x in Aext.letters if pred(_bits(x, ell), _base_letter(x, ell))]
        return Dfa.letters(Aext, letters)

    def lift(self, K, ell):
        """pi^{-1}(K): words over A_ell whose letters, bits erased, spell K."""
        key = (K, ell)
        d = self._pi.get(key)
        if d is None:
            if ell == 0:
                d = K
            else:
                d = K.inverse_image(self.alphabet(ell), lambda x: x[1])
            self._pi[key] = d
        return d

    def index(self, v, scope):
        for i in range(len(scope) - 1, -1, -1):
            if scope[i] == v:
                return i
        raise UnboundVariable(v)

    def atom(self, g, scope):
        ell = len(scope)
        anyw = Dfa.universal(self.alphabet(ell))
        if isinstance(g, Const):
            return anyw if g.value else Dfa.empty(self.alphabet(ell))
        if isinstance(g, Label):
            h = self.index(g.var, scope)
            B = self.marked(ell, lambda bits, a: bits[h] == 1 and a == g.letter)
            return concat(anyw, B, anyw)
        if isinstance(g, Eq):
            h1, h2 = self.index(g.x, scope), self.index(g.y, scope)
            B = self.marked(ell, lambda bits, a: bits[h1] == 1 and bits[h2] == 1)
            return concat(anyw, B, anyw)
        if isinstance(g, Infix):
            i, j = self.index(g.x, scope), self.index(g.y, scope)
            if i == j:
                return Dfa.empty(self.alphabet(ell))
            Bi = self.marked(ell, lambda bits, a: bits[i] == 1)
            Bj = self.marked(ell, lambda bits, a: bits[j] == 1)
            return concat(anyw, Bi, self.lift(g.lang.dfa, ell), Bj, anyw)
        if isinstance(g, Prefix):
            h = self.index(g.x, scope)
            B = self.marked(ell, lambda bits, a: bits[h] == 1)
            return concat(self.lift(g.lang.dfa, ell), B, anyw)
        if isinstance(g, Suffix):
            h = self.index(g.x, scope)
            B = self.marked(ell, lambda bits, a: bits[h] == 1)
            return concat(anyw, B, self.lift(g.lang.dfa, ell))
        if isinstance(g, Whole):
            return self.lift(g.lang.dfa, ell)
        raise TypeError(g)

    def negated_atom(self, g, scope):
        """Negated atoms rewritten as positive ones of the same kind."""
        full = LangRef("Astar", self.full)
        if isinstance(g, Const):
            return self.atom(Const(not g.value), scope)
        if isinstance(g, Label):
            others = [Label(c, g.var) for c in self.A if c != g.letter]
            return union_all([self.atom(o, scope) for o in others], self.alphabet(len(scope)))
        if isinstance(g, Eq):
            return self.atom(Infix(full, g.x, g.y), scope) | self.atom(Infix(full, g.y, g.x), scope)
        if isinstance(g, Infix):
            co = LangRef(f"co-{g.lang.name}", ~g.lang.dfa)
            return union_all(
                [
                    self.atom(Infix(full, g.y, g.x), scope),
                    self.atom(Eq(g.x, g.y), scope),
                    self.atom(Infix(co, g.x, g.y), scope),
                ],
                self.alphabet(len(scope)),
            )
        co = LangRef(f"co-{g.lang.name}", ~g.lang.dfa)
        if isinstance(g, Prefix):
            return self.atom(Prefix(co, g.x), scope)
        if isinstance(g, Suffix):
            return self.atom(Suffix(co, g.x), scope)
        if isinstance(g, Whole):
            return self.atom(Whole(co), scope)
        raise TypeError(g)

    def compile(self, g, scope):
        d = self._compile(g, scope)
        if self.budget is not None and d.n_states > self.budget:
            raise BudgetExceeded("compiled automaton", d.n_states, self.budget)
        return d

    def _compile(self, g, scope):
        ell = len(scope)
        if isinstance(g, ATOMS):
            return self.atom(g, scope)
        if isinstance(g, Not):
            return self.negated_atom(g.arg, scope)
        if isinstance(g, And):
            parts = [self.compile(a, scope) for a in g.args]
            if not parts:
                return Dfa.universal(self.alphabet(ell))
            return parts[0].intersection(*parts[1:]) if len(parts) > 1 else parts[0]
        if isinstance(g, Or):
            return union_all([self.compile(a, scope) for a in g.args], self.alphabet(ell))
        if isinstance(g, Exists):
            inner = self.compile(g.body, scope + (g.var,))
            return self.exists(inner, ell)
        if isinstance(g, Forall):
            # a universal block is the complement of an existential one
            dual = nnf(Not(g))
            return ~self.compile(dual, scope)
        raise TypeError(g)

    def exists(self, inner, ell):
        if not self.via_split:
            return project(inner & good_filter(self.A, ell + 1), self.A, ell)
        # route through the splitting of the language at its marked letter
        Aext = self.alphabet(ell + 1)
        target = self.alphabet(ell)
        parts = []
        for b in Aext.letters:
            if b[0][-1] != 1:
                continue
            c = b[1] if ell == 0 else (b[0][:-1], b[1])
            for P, S in letter_splits(inner, b):
                parts.append(
                    concat(inv_alpha(P, self.A, ell), Dfa.letters(target, [c]),
                           inv_alpha(S, self.A, ell))
                )
        return union_all(parts, target)


def compile_sentence(f, C, via_split=False, n=None, budget=None):
    """Automaton of a sentence, with the hierarchy level its form predicts.

    Returns ``(dfa, claim)``.  With ``n`` given the sentence must lie in
    Sigma_{n+1}; ``budget`` caps the states of every intermediate automaton.
    ``via_split`` builds each projection as a union of marked products read
    off the splitting of the inner language, instead of a subset construction.
    """
    free = free_variables(f)
    if free:
        raise UnboundVariable(f"free variables {sorted(free)}")
    cls = classify(f)
    if n is not None and sigma_level(f) > n + 1:
        raise NotInFragment(f"sentence needs Sigma_{sigma_level(f)}, not Sigma_{n + 1}")
    g = f
    if cls.kind == "Sigma" and cls.n >= 1:
        g = normalize_sigma(f, cls.n - 1)
    dfa = _Compiler(C, via_split, budget).compile(nnf(g), ())
    return dfa, level_claim(cls, C)


def round_trip_check(f, C, maxlen=8, kmax=1, budget=None):
    """Compare compiled automaton and direct evaluation on all short words.

    For sentences of the first existential level the compiled language is
    also submitted to the stratum membership procedure for k <= kmax; those
    verdicts are reported, not asserted.
    """
    from .strata import DEFAULT_BUDGET, pol_stratum_member

    dfa, claim = compile_sentence(f, C)
    mismatches = []
    for w in C.alphabet.words(maxlen):
        if evaluate(f, w) != dfa.accepts(w):
            mismatches.append(w)
            if len(mismatches) >= 10:
                break
    cls = classify(f)
    strata = {}
    if cls.kind == "Sigma" and cls.n == 1:
        for k in range(kmax + 1):
            v = pol_stratum_member(dfa, C, k, budget or DEFAULT_BUDGET)
            strata[k] = v.status
    return {
        "formula": to_text(f),
        "class": str(cls),
        "claim": str(claim),
        "states": dfa.n_states,
        "agree": not mismatches,
        "mismatches": mismatches,
        "strata": strata,
    }


# Sentences used by the round-trip checks and the CLI demo: (text, basis).
SENTENCE_CATALOG = [
    ("exists x. a(x)", "st0"),
    ("forall x. a(x)", "st0"),
    ("exists x. exists y. x < y & a(x) & b(y)", "st0"),
    ("!(exists x. exists y. x < y & b(x) & a(y))", "st0"),
    ("exists x. forall y. x = y | x < y", "st0"),
    ("forall x. exists y. x < y | b(x)", "st0"),
    ("exists x. min(x) & a(x)", "dd0"),
    ("exists x. max(x) & b(x)", "dd0"),
    ("forall x. forall y. +1(x, y) -> !(a(x) & a(y))", "dd0"),
    ("epsilon | exists x. a(x)", "dd0"),
    ("exists x. exists y. I{Aplus}(x, y) & a(x) & a(y)", "dd0"),
    ("forall x. a(x) -> exists y. +1(x, y) & b(y)", "dd0"),
    ("exists x. S{eps}(x) & P{Aplus}(x)", "dd0"),
    ("(exists x. a(x)) & (forall y. b(y) -> max(y))", "dd0"),
]
