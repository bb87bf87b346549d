"""Finite classes of regular languages and their canonical preorder.

A :class:`LanguageClass` is either an explicit list of member languages, or
the Boolean algebra / lattice generated by a list of generator languages.
In both cases membership of a word ``w`` in every relevant language is
summarised by a bit vector; the canonical preorder ``w <=_C w'`` holds when
every member containing ``w`` also contains ``w'``.
"""

import json
from collections import deque
from itertools import combinations
from math import lcm
from pathlib import Path

from .errors import (
    AlphabetMismatch,
    BudgetExceeded,
    NotLattice,
    NotQuotienting,
    UnknownBasis,
)
from .regular import Alphabet, Dfa, shortlex_key

__all__ = [
    "LanguageClass",
    "builtin_basis",
    "load_class",
    "resolve_basis",
    "check_properties",
    "leq_C",
    "upper_set",
    "in_class",
    "ClassMonoid",
    "class_monoid",
    "period",
    "non_membership_witness",
    "non_separability_witness",
    "DEFAULT_MEMBER_CAP",
]

DEFAULT_MEMBER_CAP = 4096


class LanguageClass:
    """A finite class of regular languages over one alphabet.

    ``closure`` is ``None`` for an explicit member list, ``"boolean"`` for the
    Boolean algebra generated by ``generators`` and ``"lattice"`` for the
    lattice generated by them together with the empty and full languages.
    """

    def __init__(
        self,
        name,
        alphabet,
        members=None,
        names=None,
        generators=None,
        closure=None,
        member_cap=DEFAULT_MEMBER_CAP,
    ):
        self.name = name
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        self.closure = closure
        self.member_cap = member_cap
        if closure is None:
            if members is None:
                raise ValueError("explicit class needs members")
            uniq, uniq_names = [], []
            names = list(names) if names is not None else [None] * len(members)
            for d, nm in zip(members, names):
                self._check(d)
                if d not in uniq:
                    uniq.append(d)
                    uniq_names.append(nm if nm is not None else f"m{len(uniq) - 1}")
            self._members = tuple(uniq)
            self._names = tuple(uniq_names)
            self.generators = self._members
            self.mode = "implication"
        else:
            if closure not in ("boolean", "lattice"):
                raise ValueError(f"unknown closure {closure!r}")
            if generators is None:
                raise ValueError("closure class needs generators")
            gens = []
            for d in generators:
                self._check(d)
                if d not in gens:
                    gens.append(d)
            self.generators = tuple(gens)
            self._members = None
            self._names = None
            self.mode = "equality" if closure == "boolean" else "implication"
        self._product = None
        self._props = None
        self._monoid = None

    def _check(self, d):
        if d.alphabet != self.alphabet:
            raise AlphabetMismatch(f"member over {d.alphabet!r}, class over {self.alphabet!r}")

    def __repr__(self):
        return f"<LanguageClass {self.name} over {self.alphabet!r}>"

    # -- product of the generators -----------------------------------------

    def product(self):
        """``(delta, vectors)`` of the joint automaton of all generators.

        ``vectors[p]`` is the bitmask of generators accepting in state ``p``.
        """
        if self._product is None:
            gens = self.generators
            k = len(self.alphabet)
            start = (0,) * len(gens)
            index = {start: 0}
            states = [start]
            delta = []
            i = 0
            while i < len(states):
                tup = states[i]
                i += 1
                row = []
                for c in range(k):
                    t = tuple(g.delta[s][c] for g, s in zip(gens, tup))
                    j = index.get(t)
                    if j is None:
                        j = index[t] = len(states)
                        states.append(t)
                    row.append(j)
                delta.append(tuple(row))
            vectors = []
            for tup in states:
                v = 0
                for bit, (g, s) in enumerate(zip(gens, tup)):
                    if s in g.accepting:
                        v |= 1 << bit
                vectors.append(v)
            self._product = (tuple(delta), tuple(vectors))
        return self._product

    def vector(self, word):
        """Bitmask of the generators that contain ``word``."""
        delta, vectors = self.product()
        s = 0
        for c in self.alphabet.codes(word):
            s = delta[s][c]
        return vectors[s]

    def vleq(self, v, w):
        if self.mode == "equality":
            return v == w
        return v & ~w == 0

    def leq(self, w1, w2):
        return self.vleq(self.vector(w1), self.vector(w2))

    def realized_vectors(self):
        return sorted(set(self.product()[1]))

    # -- members ------------------------------------------------------------

    def _language_of(self, vset):
        delta, vectors = self.product()
        acc = [p for p, v in enumerate(vectors) if v in vset]
        return Dfa(self.alphabet, delta, 0, acc)

    def _materialize(self):
        vecs = self.realized_vectors()
        r = len(vecs)
        if self.mode == "equality":
            count = 1 << r
            if count > self.member_cap:
                raise BudgetExceeded(f"members of {self.name}", count, self.member_cap)
            subsets = [
                frozenset(v for i, v in enumerate(vecs) if mask >> i & 1)
                for mask in range(count)
            ]
        else:
            above = {v: [w for w in vecs if self.vleq(v, w)] for v in vecs}
            subsets = []
            seen = set()
            # every up-set is a union of principal up-sets
            frontier = [frozenset()]
            seen.add(frozenset())
            while frontier:
                cur = frontier.pop()
                subsets.append(cur)
                for v in vecs:
                    if v not in cur:
                        nxt = cur | frozenset(above[v])
                        if nxt not in seen:
                            seen.add(nxt)
                            if len(seen) > self.member_cap:
                                raise BudgetExceeded(
                                    f"members of {self.name}", len(seen), self.member_cap
                                )
                            frontier.append(nxt)
            subsets.sort(key=lambda s: (len(s), sorted(s)))
        members = []
        for s in subsets:
            d = self._language_of(s)
            if d not in members:
                members.append(d)
        self._members = tuple(members)
        self._names = tuple(self._default_name(d, i) for i, d in enumerate(members))

    def _default_name(self, d, i):
        for alias, ref in _aliases(self.alphabet):
            if d == ref:
                return alias
        return f"m{i}"

    @property
    def members(self):
        if self._members is None:
            self._materialize()
        return self._members

    @property
    def names(self):
        self.members
        return self._names

    def named_members(self):
        return list(zip(self.names, self.members))

    def member(self, name):
        """Member by name (also accepts ``#i`` for the i-th member)."""
        if name.startswith("#") and name[1:].isdigit():
            return self.members[int(name[1:])]
        for alias, ref in _aliases(self.alphabet):
            if name == alias and self.contains(ref):
                return ref
        for nm, d in self.named_members():
            if nm == name:
                return d
        raise KeyError(name)

    def contains(self, language):
        """Exact membership of a language in the class."""
        if self.closure is None:
            return language in self._members
        return non_membership_witness(self, language) is None

    def __len__(self):
        return len(self.members)

    # -- serialisation -----------------------------------------------------

    def to_json(self):
        return {
            "name": self.name,
            "alphabet": list(self.alphabet.letters),
            "languages": [
                {"name": nm, "dfa": d.to_json()} for nm, d in self.named_members()
            ],
        }


def _aliases(alphabet):
    return (
        ("empty", Dfa.empty(alphabet)),
        ("Astar", Dfa.universal(alphabet)),
        ("eps", Dfa.epsilon(alphabet)),
        ("Aplus", Dfa.nonempty(alphabet)),
    )


# ---------------------------------------------------------------------------
# Builtin bases


def _contains_letter(alphabet, a):
    return Dfa.from_regex(f".*{a}.*", alphabet)


def _at_least(alphabet, a, d):
    return Dfa.from_regex(".*" + f"{a}.*" * d, alphabet)


def builtin_basis(kind, alphabet, member_cap=DEFAULT_MEMBER_CAP):
    """One of ``st0``, ``dd0``, ``at``, ``wat`` or ``att:d``."""
    alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
    empty = Dfa.empty(alphabet)
    full = Dfa.universal(alphabet)
    if kind == "st0":
        return LanguageClass("st0", alphabet, [empty, full], ["empty", "Astar"])
    if kind == "dd0":
        return LanguageClass(
            "dd0",
            alphabet,
            [empty, Dfa.epsilon(alphabet), Dfa.nonempty(alphabet), full],
            ["empty", "eps", "Aplus", "Astar"],
        )
    if kind == "at":
        gens = [_contains_letter(alphabet, a) for a in alphabet]
        return LanguageClass("at", alphabet, generators=gens, closure="boolean",
                             member_cap=member_cap)
    if kind == "wat":
        letters = alphabet.letters
        gens = []
        for r in range(len(letters) + 1):
            for sub in combinations(letters, r):
                nfa_regex = "(" + "|".join(sub) + ")*" if sub else "_"
                gens.append(Dfa.from_regex(nfa_regex, alphabet))
        return LanguageClass("wat", alphabet, generators=gens, closure="lattice",
                             member_cap=member_cap)
    if kind.startswith("att:"):
        try:
            d = int(kind[4:])
        except ValueError:
            raise UnknownBasis(kind) from None
        if d < 1:
            raise UnknownBasis(f"{kind}: threshold must be >= 1")
        gens = [_at_least(alphabet, a, t) for a in alphabet for t in range(1, d + 1)]
        return LanguageClass(kind, alphabet, generators=gens, closure="boolean",
                             member_cap=member_cap)
    raise UnknownBasis(kind)


def load_class(data, alphabet=None):
    """Class from its JSON form ``{name, alphabet, languages: [{name, regex|dfa}]}``."""
    if isinstance(data, (str, Path)):
        data = json.loads(Path(data).read_text())
    alpha = Alphabet(data["alphabet"] if alphabet is None else alphabet)
    members, names = [], []
    for entry in data["languages"]:
        if "dfa" in entry:
            d = Dfa.from_json(entry["dfa"])
            if d.alphabet != alpha:
                raise AlphabetMismatch(f"language {entry.get('name')} has another alphabet")
        else:
            d = Dfa.from_regex(entry["regex"], alpha)
        members.append(d)
        names.append(entry.get("name"))
    return LanguageClass(data.get("name", "custom"), alpha, members, names)


def resolve_basis(spec, alphabet, member_cap=DEFAULT_MEMBER_CAP):
    """Builtin kind name or path to a class JSON file."""
    if spec.endswith(".json"):
        return load_class(spec)
    return builtin_basis(spec, alphabet, member_cap)


# ---------------------------------------------------------------------------
# Properties and the canonical preorder


def check_properties(C, exhaustive=False):
    """``{"lattice", "boolean", "quotienting"}`` flags for the class.

    Generated classes are lattices (and Boolean algebras) by construction;
    their quotient closure is decided on the generators, which suffices as
    quotients commute with the Boolean operations.  ``exhaustive`` forces a
    pairwise check over the materialised members instead.
    """
    if C._props is not None and not exhaustive:
        return dict(C._props)
    A = C.alphabet
    if C.closure is not None and not exhaustive:
        props = {"lattice": True, "boolean": C.closure == "boolean"}
        props["quotienting"] = all(
            C.contains(g.left_quotient(a)) and C.contains(g.right_quotient(a))
            for g in C.generators
            for a in A
        )
    else:
        ms = set(C.members)
        lattice = Dfa.empty(A) in ms and Dfa.universal(A) in ms
        if lattice:
            mem = list(C.members)
            for i, x in enumerate(mem):
                for y in mem[i + 1:]:
                    if (x | y) not in ms or (x & y) not in ms:
                        lattice = False
                        break
                if not lattice:
                    break
        boolean = lattice and all(~x in ms for x in C.members)
        quot = all(
            x.left_quotient(a) in ms and x.right_quotient(a) in ms
            for x in C.members
            for a in A
        )
        props = {"lattice": lattice, "boolean": boolean, "quotienting": quot}
    if not exhaustive:
        C._props = dict(props)
    return props


def _require(C, lattice=False, quotienting=False):
    props = check_properties(C)
    if lattice and not props["lattice"]:
        raise NotLattice(f"{C.name} is not a lattice")
    if quotienting and not props["quotienting"]:
        raise NotQuotienting(f"{C.name} is not closed under quotients")


def leq_C(C, w1, w2):
    """Canonical preorder: every member containing w1 contains w2."""
    return C.leq(w1, w2)


def upper_set(C, w):
    """The least member of the class containing ``w`` (a finite lattice)."""
    _require(C, lattice=True)
    v = C.vector(w)
    delta, vectors = C.product()
    acc = [p for p, x in enumerate(vectors) if C.vleq(v, x)]
    return Dfa(C.alphabet, delta, 0, acc)


def _pair_words(C, L):
    """Shortest word for every reachable (class state, L state) pair."""
    delta, vectors = C.product()
    start = (0, 0)
    words = {start: ()}
    queue = deque([start])
    letters = C.alphabet.letters
    while queue:
        p, q = queue.popleft()
        w = words[(p, q)]
        for c, a in enumerate(letters):
            nxt = (delta[p][c], L.delta[q][c])
            if nxt not in words:
                words[nxt] = w + (a,)
                queue.append(nxt)
    return words


def _best_pair(C, left, right):
    """Least (w, w') with w from ``left``, w' from ``right`` and w <=_C w'."""
    best = None
    for v1, w1 in left:
        for v2, w2 in right:
            if C.vleq(v1, v2):
                key = (len(w1) + len(w2), shortlex_key(w1), shortlex_key(w2))
                if best is None or key < best[0]:
                    best = (key, w1, w2)
    if best is None:
        return None
    return (C.alphabet.join(best[1]), C.alphabet.join(best[2]))


def _shortest_by_vector(C, L, accepted):
    _, vectors = C.product()
    out = {}
    for (p, q), w in _pair_words(C, L).items():
        if (q in L.accepting) == accepted:
            v = vectors[p]
            if v not in out or shortlex_key(w) < shortlex_key(out[v]):
                out[v] = w
    return sorted(out.items())


def non_membership_witness(C, L):
    """``(w, w')`` with w in L, w' not in L and w <=_C w', or None.

    For a finite lattice the language belongs to the class exactly when no
    such pair exists.  The pair minimises total length, then shortlex.
    """
    if L.alphabet != C.alphabet:
        raise AlphabetMismatch("language and class alphabets differ")
    if C.closure is None:
        _require(C, lattice=True)
    return _best_pair(C, _shortest_by_vector(C, L, True), _shortest_by_vector(C, L, False))


def non_separability_witness(C, L1, L2):
    """``(w, w')`` with w in L1, w' in L2 and w <=_C w', or None."""
    for L in (L1, L2):
        if L.alphabet != C.alphabet:
            raise AlphabetMismatch("language and class alphabets differ")
    if C.closure is None:
        _require(C, lattice=True)
    return _best_pair(C, _shortest_by_vector(C, L1, True), _shortest_by_vector(C, L2, True))


def in_class(C, L):
    """Whether L belongs to the class (upper-set criterion)."""
    return non_membership_witness(C, L) is None


# ---------------------------------------------------------------------------
# Class monoid


class ClassMonoid:
    """Transition monoid of the joint automaton of a quotienting class.

    Elements are integers; element 0 is the identity.  ``leq`` is the
    canonical preorder read on any representative word.
    """

    def __init__(self, C, budget=100_000):
        _require(C, quotienting=True)
        self.C = C
        delta, vectors = C.product()
        n = len(delta)
        k = len(C.alphabet)
        ident = tuple(range(n))
        gens = [tuple(delta[p][c] for p in range(n)) for c in range(k)]
        index = {ident: 0}
        elems = [ident]
        reps = [()]
        right = []
        i = 0
        while i < len(elems):
            e = elems[i]
            row = []
            for c, g in enumerate(gens):
                f = tuple(g[e[p]] for p in range(n))
                j = index.get(f)
                if j is None:
                    j = index[f] = len(elems)
                    if j >= budget:
                        raise BudgetExceeded("class monoid", j + 1, budget)
                    elems.append(f)
                    reps.append(reps[i] + (C.alphabet.letters[c],))
                row.append(j)
            right.append(tuple(row))
            i += 1
        self.elements = elems
        self.index = index
        self.right = right  # right[x][c] = x . letter_c
        self.reps = [C.alphabet.join(r) for r in reps]
        self.vectors = [vectors[e[0]] for e in elems]
        self._mul = {}
        m = len(elems)
        self.size = m
        for x in range(m):
            for y in range(m):
                if x != y and self.leq(x, y) and self.leq(y, x):
                    raise NotQuotienting("canonical preorder is not antisymmetric on the monoid")

    def __len__(self):
        return self.size

    unit = 0

    def letter(self, a):
        return self.right[0][self.C.alphabet.index[a]]

    def mul(self, x, y):
        key = (x, y)
        r = self._mul.get(key)
        if r is None:
            ex, ey = self.elements[x], self.elements[y]
            r = self.index[tuple(ey[p] for p in ex)]
            self._mul[key] = r
        return r

    def eval(self, word):
        x = 0
        right = self.right
        for c in self.C.alphabet.codes(word):
            x = right[x][c]
        return x

    def leq(self, x, y):
        return self.C.vleq(self.vectors[x], self.vectors[y])

    def power(self, x, p):
        r = 0
        for _ in range(p):
            r = self.mul(r, x)
        return r

    def period(self):
        """Least p >= 1 with s^p = s^{2p} for every element s."""
        need_index = 1
        step = 1
        for x in range(self.size):
            seen = {}
            y = x
            e = 1
            while y not in seen:
                seen[y] = e
                y = self.mul(y, x)
                e += 1
            first = seen[y]
            need_index = max(need_index, first)
            step = lcm(step, e - first)
        p = step
        while p < need_index:
            p += step
        return p


def class_monoid(C, budget=100_000):
    if C._monoid is None:
        C._monoid = ClassMonoid(C, budget)
    return C._monoid


def period(C):
    return class_monoid(C).period()
