"""Expressions over a basis and the closure rewrites of polynomial classes.

A :class:`Monomial` is ``L0 a1 L1 ... an Ln`` with basis languages ``Li``;
a :class:`PolyExpr` is a finite union of monomials.  The rewrites below
compute, symbolically, quotients, intersections and concatenations of
polynomials as new polynomials over the same basis; every result can be
checked against the direct automaton construction.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .classes import builtin_basis, check_properties
from .errors import (
    AlphabetTooSmall,
    EpsilonNotInBasis,
    NotInBasis,
    NotQuotienting,
    PreconditionViolated,
    TagViolation,
)
from .regular import Alphabet, Dfa, concat, letter_splits, union_all
from .strata import (
    DEFAULT_BUDGET,
    bpol_stratum_member,
    period,
    pol_stratum_member,
    word_leq_k,
)

__all__ = [
    "Monomial",
    "PolyExpr",
    "LevelExpr",
    "eval_level",
    "pol_quotient_rewrite",
    "pol_intersect_rewrite",
    "pol_concat_rewrite",
    "poly_intersection",
    "eps_chain",
    "piece_complement",
    "alphabet_trick_check",
    "strictness_witnesses",
    "interleaving_check",
    "classic_expressions",
]


# ---------------------------------------------------------------------------
# Polynomials


@dataclass(frozen=True)
class Monomial:
    factors: tuple
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "letters", tuple(self.letters))
        if len(self.factors) != len(self.letters) + 1:
            raise ValueError("a monomial of degree n has n + 1 factors")
        alph = self.factors[0].alphabet
        for f in self.factors[1:]:
            f._check_same(self.factors[0])
        for a in self.letters:
            if a not in alph:
                raise ValueError(f"letter {a!r} not in alphabet")

    @property
    def alphabet(self):
        return self.factors[0].alphabet

    @property
    def degree(self):
        return len(self.letters)

    def is_empty(self):
        return any(f.is_empty() for f in self.factors)

    def language(self):
        A = self.alphabet
        parts = [self.factors[0]]
        for a, f in zip(self.letters, self.factors[1:]):
            parts.append(Dfa.word(A, [a]))
            parts.append(f)
        return concat(*parts)

    def then(self, letter, other):
        """``self . letter . other`` as one monomial."""
        return Monomial(self.factors + other.factors, self.letters + (letter,) + other.letters)

    def to_json(self, names=None):
        label = _labeller(names)
        return {"op": "monomial", "factors": [label(f) for f in self.factors],
                "letters": list(self.letters)}

    def describe(self, names=None):
        label = _labeller(names)
        out = [label(self.factors[0])]
        for a, f in zip(self.letters, self.factors[1:]):
            out += [a, label(f)]
        return " ".join(out)


@dataclass(frozen=True)
class PolyExpr:
    """Finite union of monomials over one alphabet."""

    monomials: tuple
    alphabet: Alphabet = field(compare=False, default=None)

    def __post_init__(self):
        seen = []
        for m in self.monomials:
            if not m.is_empty() and m not in seen:
                seen.append(m)
        object.__setattr__(self, "monomials", tuple(seen))
        if self.alphabet is None:
            if not seen:
                raise ValueError("empty polynomial needs an explicit alphabet")
            object.__setattr__(self, "alphabet", seen[0].alphabet)

    @property
    def degree(self):
        return max((m.degree for m in self.monomials), default=0)

    def language(self):
        return union_all([m.language() for m in self.monomials], self.alphabet)

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def to_json(self, names=None):
        return {"op": "poly", "monomials": [m.to_json(names) for m in self.monomials]}

    def describe(self, names=None):
        if not self.monomials:
            return "(empty)"
        return " | ".join(m.describe(names) for m in self.monomials)


def _labeller(names):
    table = dict(names or {})

    def label(d):
        if d in table:
            return table[d]
        A = d.alphabet
        if d == Dfa.universal(A):
            return "A*"
        if d == Dfa.epsilon(A):
            return "{eps}"
        if d == Dfa.nonempty(A):
            return "A+"
        if d == Dfa.empty(A):
            return "{}"
        # B* for a set of letters B
        letters = [a for a in A if d.accepts(A.join([a]))]
        if d == Dfa.from_regex("(" + "|".join(letters) + ")*" if letters else "_", A):
            return "(" + "".join(str(a) for a in letters) + ")*"
        return f"<{d.n_states}st>"

    return label


def _poly(monos, alphabet):
    return PolyExpr(tuple(monos), alphabet)


# ---------------------------------------------------------------------------
# Level expressions


@dataclass(frozen=True)
class LevelExpr:
    """Syntax tree of a language built level by level from a basis.

    ``level`` is a Fraction: integers are full levels (Boolean operations
    allowed), halves are polynomial levels (marked products allowed).
    """

    op: str
    args: tuple = ()
    letter: str = None
    value: object = None
    level: Fraction = None
    basis: str = None

    @staticmethod
    def ref(dfa, level=0, basis=None):
        return LevelExpr("ref", value=dfa, level=Fraction(level), basis=basis)

    @staticmethod
    def union(*args, level=None):
        return LevelExpr("union", tuple(args), level=_frac(level))

    @staticmethod
    def inter(*args, level=None):
        return LevelExpr("inter", tuple(args), level=_frac(level))

    @staticmethod
    def complement(arg, level=None):
        return LevelExpr("complement", (arg,), level=_frac(level))

    @staticmethod
    def mconcat(left, letter, right, level=None):
        return LevelExpr("mconcat", (left, right), letter=letter, level=_frac(level))

    @staticmethod
    def chain(parts, letters, level=None):
        """``parts[0] letters[0] parts[1] ...`` as nested marked products."""
        out = parts[0]
        for a, p in zip(letters, parts[1:]):
            out = LevelExpr.mconcat(out, a, p, level=level)
        return out

    @staticmethod
    def poly(p, level=None):
        return LevelExpr("poly", value=p, level=_frac(level))

    def to_json(self, names=None):
        out = {"op": self.op}
        if self.level is not None:
            out["level"] = str(self.level)
        if self.op == "ref":
            out["language"] = _labeller(names)(self.value)
            if self.basis:
                out["basis"] = self.basis
        elif self.op == "poly":
            out["monomials"] = self.value.to_json(names)["monomials"]
        else:
            out["args"] = [a.to_json(names) for a in self.args]
            if self.letter is not None:
                out["letter"] = self.letter
        return out

    def validate(self):
        """Raise TagViolation if an operation is used at the wrong kind of level."""
        lv = self.level
        if lv is not None:
            full = lv.denominator == 1
            half = lv.denominator == 2
            if not (full or half):
                raise TagViolation(f"level {lv} is neither full nor half")
            if self.op == "complement" and not full:
                raise TagViolation(f"complement tagged with half level {lv}")
            if self.op in ("mconcat", "poly") and not half:
                raise TagViolation(f"marked product tagged with full level {lv}")
        for a in self.args:
            a.validate()
            if lv is not None and a.level is not None and a.level > lv:
                raise TagViolation(f"operand at level {a.level} under level {lv}")


def _frac(level):
    return None if level is None else Fraction(level)


def eval_level(expr, cache=None):
    """Dfa of a level expression (validated first)."""
    expr.validate()
    cache = {} if cache is None else cache
    return _eval(expr, cache)


def _eval(e, cache):
    got = cache.get(e)
    if got is not None:
        return got
    if e.op == "ref":
        d = e.value
    elif e.op == "poly":
        d = e.value.language()
    elif e.op == "union":
        ds = [_eval(a, cache) for a in e.args]
        d = ds[0].union(*ds[1:]) if len(ds) > 1 else ds[0]
    elif e.op == "inter":
        ds = [_eval(a, cache) for a in e.args]
        d = ds[0].intersection(*ds[1:]) if len(ds) > 1 else ds[0]
    elif e.op == "complement":
        d = ~_eval(e.args[0], cache)
    elif e.op == "mconcat":
        left = _eval(e.args[0], cache)
        right = _eval(e.args[1], cache)
        d = concat(left, Dfa.word(left.alphabet, [e.letter]), right)
    else:
        raise ValueError(f"unknown operator {e.op!r}")
    cache[e] = d
    return d


# ---------------------------------------------------------------------------
# Rewrites


def pol_quotient_rewrite(m, a, side="left"):
    """Quotient of a monomial by one letter, as a polynomial.

    Left: ``a^{-1}(L0 a1 L1 ...)`` is ``(a^{-1}L0) a1 L1 ...``, plus
    ``L1 a2 ...`` when L0 contains the empty word and ``a1 == a``.  The
    right quotient is symmetric.
    """
    A = m.alphabet
    if side == "left":
        out = [Monomial((m.factors[0].left_quotient([a]),) + m.factors[1:], m.letters)]
        if m.degree and m.letters[0] == a and m.factors[0].contains_epsilon():
            out.append(Monomial(m.factors[1:], m.letters[1:]))
    elif side == "right":
        out = [Monomial(m.factors[:-1] + (m.factors[-1].right_quotient([a]),), m.letters)]
        if m.degree and m.letters[-1] == a and m.factors[-1].contains_epsilon():
            out.append(Monomial(m.factors[:-1], m.letters[:-1]))
    else:
        raise ValueError("side must be 'left' or 'right'")
    return _poly(out, A)


def _check_basis(C, monomials):
    members = set(C.members) if C.closure is None else None
    for m in monomials:
        for f in m.factors:
            ok = f in members if members is not None else C.contains(f)
            if not ok:
                raise NotInBasis(f"factor {f!r} is not a member of {C.name}")


def pol_intersect_rewrite(K, L, C):
    """``K ∩ L`` for monomials over a quotienting lattice C, as a polynomial.

    Every monomial of the result has degree at most ``deg K + deg L`` and
    factors in C.
    """
    props = check_properties(C)
    if not props["quotienting"]:
        raise NotQuotienting(f"{C.name} is not closed under quotients")
    _check_basis(C, [K, L])
    return _poly(_intersect(K, L), C.alphabet)


def _intersect(K, L):
    if K.degree == 0 and L.degree == 0:
        m = Monomial((K.factors[0] & L.factors[0],))
        return [] if m.is_empty() else [m]
    if K.degree == 0:
        return _intersect_single(K.factors[0], L)
    if L.degree == 0:
        return _intersect_single(L.factors[0], K)
    out = []
    out += _intersect_ordered(K, L)
    out += _intersect_ordered(L, K)
    if K.letters[0] == L.letters[0]:
        head = K.factors[0] & L.factors[0]
        if not head.is_empty():
            for m in _intersect(_tail(K), _tail(L)):
                out.append(Monomial((head,), ()).then(K.letters[0], m))
    return out


def _tail(m):
    return Monomial(m.factors[1:], m.letters[1:])


def _intersect_single(K0, L):
    """K0 ∩ L1 b Rest with K0 in the basis."""
    b = L.letters[0]
    out = []
    for P, S in letter_splits(K0, b):
        head = L.factors[0] & P
        if head.is_empty():
            continue
        for m in _intersect(Monomial((S,)), _tail(L)):
            out.append(Monomial((head,)).then(b, m))
    return out


def _intersect_ordered(K, L):
    """Words of K ∩ L where K's first marked letter comes first."""
    a = K.letters[0]
    b = L.letters[0]
    out = []
    for P, S in letter_splits(L.factors[0], a):
        head = K.factors[0] & P
        if head.is_empty():
            continue
        rest_l = Monomial((S,) + L.factors[1:], (b,) + L.letters[1:])
        for m in _intersect(_tail(K), rest_l):
            out.append(Monomial((head,)).then(a, m))
    return out


def poly_intersection(P1, P2, C):
    """Intersection of two polynomials, distributing over their monomials."""
    out = []
    for m1 in P1:
        for m2 in P2:
            out.extend(pol_intersect_rewrite(m1, m2, C).monomials)
    return _poly(out, P1.alphabet)


def pol_concat_rewrite(K, L):
    """``K L`` for polynomials: union of ``K a (a^{-1}L)``, plus K if L has ε."""
    A = K.alphabet
    out = []
    for a in A:
        quot = []
        for m in L:
            quot.extend(pol_quotient_rewrite(m, a, "left").monomials)
        for km in K:
            for lm in quot:
                out.append(km.then(a, lm))
    if L.language().contains_epsilon():
        out.extend(K.monomials)
    return _poly(out, A)


def eps_chain(K, w, L, C):
    """``K w L`` as ``K a1 {ε} a2 ... {ε} an L``; needs {ε} in C."""
    A = C.alphabet
    eps = Dfa.epsilon(A)
    if not C.contains(eps):
        raise EpsilonNotInBasis(f"{{eps}} is not a member of {C.name}")
    if len(w) == 0:
        raise PreconditionViolated("the inserted word must be non-empty")
    out = []
    for km in K:
        for lm in L:
            factors = km.factors + (eps,) * (len(w) - 1) + lm.factors
            out.append(Monomial(factors, km.letters + tuple(w) + lm.letters))
    return _poly(out, A)


def piece_complement(letters, alphabet):
    """Complement of ``A* a1 A* ... an A*`` as a polynomial over ``(B)*`` factors.

    Built by the recursion H1 = (A - a1)* and
    Hk = (A - ak)* ∪ H(k-1) ak (A - ak)*; with no letters the result is empty.
    """
    A = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    current = []
    for a in letters:
        avoid = _star_without(A, a)
        nxt = [Monomial((avoid,))]
        for m in current:
            nxt.append(m.then(a, Monomial((avoid,))))
        current = nxt
    return _poly(current, A)


def _star_without(A, a):
    rest = [b for b in A if b != a]
    k = len(A)
    # single accepting state looping on every letter but a
    delta = [[0 if A.letters[c] != a else 1 for c in range(k)], [1] * k]
    d = Dfa(A, delta, 0, (0,))
    assert rest or d == Dfa.epsilon(A)
    return d


def _piece(A, letters):
    full = Dfa.universal(A)
    return Monomial((full,) * (len(letters) + 1), tuple(letters)).language()


def alphabet_trick_check(samples, alphabet="ab", maxlen=6):
    """Rewrite complements of piecewise polynomials over the ``(B)*`` basis.

    Each sample is a list of letter sequences s_i standing for the union of
    ``A* s_i A*`` (pieces).  Its complement is the intersection of the piece
    complements; that intersection is rewritten into one polynomial and
    compared with the direct complement, by automaton equality and by
    enumeration up to ``maxlen``.
    """
    A = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    W = builtin_basis("wat", A)
    report = []
    for sample in samples:
        direct = ~union_all([_piece(A, s) for s in sample], A)
        poly = None
        for s in sample:
            pc = piece_complement(s, A)
            poly = pc if poly is None else poly_intersection(poly, pc, W)
        if poly is None:
            poly = _poly([Monomial((Dfa.universal(A),))], A)
        lang = poly.language()
        enum_ok = all(
            (w in lang) == (w in direct) for w in A.words(maxlen)
        )
        report.append(
            {
                "sample": [list(s) for s in sample],
                "monomials": len(poly),
                "degree": poly.degree,
                "in_basis": all(W.contains(f) for m in poly for f in m.factors),
                "equal": lang == direct,
                "enumeration": enum_ok,
                "poly": poly,
            }
        )
    return report


# ---------------------------------------------------------------------------
# Strictness witnesses


@dataclass
class StrictnessRow:
    k: int
    u: str
    v: str
    u_in_L: bool
    v_in_L: bool
    u_in_Vplus: bool
    v_in_Vplus: bool
    leq: bool

    @property
    def ok(self):
        return (not self.u_in_L) and self.v_in_L and self.u_in_Vplus and self.v_in_Vplus and self.leq


@dataclass
class StrictnessBundle:
    basis: str
    augmented: bool
    period: int
    L: Dfa
    V_plus: Dfa
    rows: list

    @property
    def ok(self):
        return all(r.ok for r in self.rows)


def augment_with_epsilon(C):
    """Boolean algebra generated by C and {ε} (C itself if already present)."""
    A = C.alphabet
    eps = Dfa.epsilon(A)
    if check_properties(C)["boolean"] and C.contains(eps):
        return C, False
    from .classes import LanguageClass

    gens = list(C.generators) + [eps]
    return LanguageClass(C.name + "+eps", A, generators=gens, closure="boolean"), True


def strictness_witnesses(C, kmax, budget=DEFAULT_BUDGET):
    """Witness pairs separating consecutive polynomial levels.

    With p the period of (C plus {ε}), L = A* a b^{2p} a A* and
    V = {a b^p a, a b^{2p} a}: u_k = (a b^p a)^{p 2^{k+1}} lies outside L,
    v_k = u_k (a b^{2p} a)^p u_k inside, both in V+, and u_k <=_k v_k.
    """
    A = C.alphabet
    if len(A) < 2:
        raise AlphabetTooSmall("needs at least two letters")
    a, b = A.letters[0], A.letters[1]
    D, augmented = augment_with_epsilon(C)
    p = period(D)
    x = a + b * p + a
    y = a + b * (2 * p) + a
    L = Dfa.from_regex(f".*{y}.*", A)
    V_plus = Dfa.from_regex(f"({x}|{y})({x}|{y})*", A)
    rows = []
    for k in range(kmax + 1):
        u = x * (p * 2 ** (k + 1))
        v = u + y * p + u
        rows.append(
            StrictnessRow(
                k, u, v,
                u in L, v in L, u in V_plus, v in V_plus,
                word_leq_k(D, k, u, v, method="types", budget=budget),
            )
        )
    return StrictnessBundle(C.name, augmented, p, L, V_plus, rows)


# ---------------------------------------------------------------------------
# Checks on the small levels


def interleaving_check(alphabet="ab", budget=DEFAULT_BUDGET):
    """Inclusions between the first levels built over the two small bases."""
    A = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    st0 = builtin_basis("st0", A)
    dd0 = builtin_basis("dd0", A)
    full = Dfa.universal(A)
    plus = union_all([_piece(A, [a]) for a in A], A)
    eps = ~plus
    return {
        "st0_within_dd0": all(dd0.contains(m) for m in st0.members),
        "Aplus_is_union_of_pieces": plus == Dfa.nonempty(A),
        "Aplus_in_pol1_st0": pol_stratum_member(plus, st0, 1, budget).status == "Member",
        "eps_is_complement": eps == Dfa.epsilon(A),
        "eps_in_bpol1_st0": bpol_stratum_member(eps, st0, 1, budget).status == "Member",
        "eps_not_in_pol1_st0": pol_stratum_member(eps, st0, 1, budget).status == "NotMember",
        "dd0_within_bpol1_st0": all(
            bpol_stratum_member(m, st0, 1, budget).status == "Member" for m in dd0.members
        ),
        "full_in_st0": st0.contains(full),
    }


def classic_expressions(alphabet="ab"):
    """Level expressions for (ab)* and (a(ab)*b)* over the dd0 basis.

    Returns name -> (expression, target Dfa).
    """
    A = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    if len(A) != 2:
        raise PreconditionViolated("the classic expressions are over two letters")
    a, b = A.letters
    ref = LevelExpr.ref
    full = ref(Dfa.universal(A), basis="dd0")
    eps = ref(Dfa.epsilon(A), basis="dd0")
    h = Fraction(1, 2)

    def mono(parts, letters, level):
        return LevelExpr.chain(parts, letters, level=level)

    def level1_alternating(first, last):
        # words that alternate, start with ``first`` and end with ``last``
        other = b if first == a else a
        bad = LevelExpr.union(
            mono([eps, full], [other], h),
            mono([full, eps], [first if last == other else other], h),
            mono([full, eps, full], [a, a], h),
            mono([full, eps, full], [b, b], h),
            level=h,
        )
        return LevelExpr.complement(bad, level=1)

    ab_star = level1_alternating(a, b)
    ba_star = level1_alternating(b, a)
    three = Fraction(3, 2)
    bad2 = LevelExpr.union(
        mono([ab_star, full], [b], three),
        mono([full, eps, ba_star, full], [a, a, a], three),
        mono([full, ba_star, eps, full], [b, b, b], three),
        mono([full, ab_star], [a], three),
        level=three,
    )
    k_expr = LevelExpr.complement(bad2, level=2)
    return {
        "dd1_ab_star": (ab_star, Dfa.from_regex(f"({a}{b})*", A)),
        "dd1_ba_star": (ba_star, Dfa.from_regex(f"({b}{a})*", A)),
        "dd2_nested": (k_expr, Dfa.from_regex(f"({a}({a}{b})*{b})*", A)),
    }
