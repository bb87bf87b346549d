"""Canonical deterministic automata and the regular-language toolkit.

Every :class:`Dfa` is stored complete, minimal, and with its states numbered
in breadth-first order from the initial state (letters in alphabet order).
Two automata over the same alphabet are therefore equal as Python objects
exactly when they recognise the same language.

Words are plain strings when every letter is a one-character string, and
tuples of letters otherwise (the extended alphabets used by the logic module
have tuple letters).
"""

from collections import deque
from itertools import product as _cartesian

import numpy as np

from .errors import AlphabetMismatch, RegexSyntaxError, UnknownLetter

__all__ = [
    "Alphabet",
    "Dfa",
    "Nfa",
    "parse_regex",
    "concat",
    "marked_concat",
    "star",
    "union_all",
    "shortest_common_word",
    "letter_splits",
    "intersection_all",
]


class Alphabet:
    """A finite, ordered, non-empty set of letters."""

    __slots__ = ("letters", "index", "chars")

    def __init__(self, letters):
        if isinstance(letters, Alphabet):
            letters = letters.letters
        letters = tuple(letters)
        if not letters:
            raise ValueError("alphabet must be non-empty")
        index = {}
        for i, a in enumerate(letters):
            if a in index:
                raise ValueError(f"duplicate letter {a!r}")
            index[a] = i
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "index", index)
        object.__setattr__(
            self, "chars", all(isinstance(a, str) and len(a) == 1 for a in letters)
        )

    def __setattr__(self, name, value):
        raise AttributeError("Alphabet is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, a):
        return a in self.index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self):
        return hash(("Alphabet", self.letters))

    def __repr__(self):
        if self.chars:
            return f"Alphabet({''.join(self.letters)!r})"
        return f"Alphabet({list(self.letters)!r})"

    def codes(self, word):
        """Letter indices of ``word``; raises UnknownLetter on foreign letters."""
        try:
            return [self.index[a] for a in word]
        except KeyError as exc:
            raise UnknownLetter(f"letter {exc.args[0]!r} not in {self!r}") from None

    def join(self, letters):
        """Build a word value from a sequence of letters."""
        if self.chars:
            return "".join(letters)
        return tuple(letters)

    def empty_word(self):
        return "" if self.chars else ()

    def words(self, maxlen, minlen=0):
        """All words of length in [minlen, maxlen], in length-lexicographic order."""
        for n in range(minlen, maxlen + 1):
            for t in _cartesian(self.letters, repeat=n):
                yield self.join(t)


def _as_alphabet(alphabet):
    return alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)


def shortlex_key(word):
    return (len(word), tuple(word))


# ---------------------------------------------------------------------------
# Canonicalisation


_NUMPY_THRESHOLD = 150


def _refine(local, acc):
    n = len(local)
    block = [1 if a else 0 for a in acc]
    nblocks = len(set(block))
    while True:
        sigs = {}
        new = [0] * n
        for s in range(n):
            sig = (block[s],) + tuple(block[t] for t in local[s])
            b = sigs.get(sig)
            if b is None:
                b = sigs[sig] = len(sigs)
            new[s] = b
        block = new
        if len(sigs) == nblocks:
            return block
        nblocks = len(sigs)


def _refine_numpy(local, acc):
    table = np.asarray(local, dtype=np.int64).reshape(len(local), -1)
    block = np.asarray(acc, dtype=np.int64)
    _, block = np.unique(block, return_inverse=True)
    nblocks = int(block.max()) + 1
    n = len(local)
    while True:
        code = block
        for c in range(table.shape[1]):
            code = code * n + block[table[:, c]]
            _, code = np.unique(code, return_inverse=True)
        count = int(code.max()) + 1
        block = code
        if count == nblocks:
            return block.tolist()
        nblocks = count


def _canonical(alphabet, delta, initial, accepting):
    """Minimise and renumber a complete transition table.

    ``delta`` is a sequence of per-state sequences indexed by letter code.
    Returns ``(delta, accepting)`` of the canonical automaton; its initial
    state is always 0.
    """
    k = len(alphabet)
    # reachable part, BFS order
    order = [initial]
    seen = {initial: 0}
    i = 0
    while i < len(order):
        s = order[i]
        i += 1
        for t in delta[s]:
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
    n = len(order)
    local = [[seen[t] for t in delta[s]] for s in order]
    acc = [s in accepting for s in order]

    # Moore partition refinement
    if n > _NUMPY_THRESHOLD:
        block = _refine_numpy(local, acc)
    else:
        block = _refine(local, acc)

    # renumber blocks in BFS order from the initial block
    rep = {}
    for s in range(n):
        rep.setdefault(block[s], s)
    start = block[0]
    number = {start: 0}
    queue = [start]
    j = 0
    while j < len(queue):
        b = queue[j]
        j += 1
        for t in local[rep[b]]:
            c = block[t]
            if c not in number:
                number[c] = len(queue)
                queue.append(c)
    out = tuple(
        tuple(number[block[t]] for t in local[rep[b]]) for b in queue
    )
    out_acc = frozenset(number[b] for b in queue if acc[rep[b]])
    assert all(len(row) == k for row in out)
    return out, out_acc


class Dfa:
    """A canonical complete deterministic automaton.

    Construct with a transition table (``delta[state][letter_code]``), an
    initial state and an iterable of accepting states; the table is minimised
    on construction.
    """

    __slots__ = ("alphabet", "delta", "accepting", "_hash", "_cache")

    def __init__(self, alphabet, delta, initial=0, accepting=()):
        alphabet = _as_alphabet(alphabet)
        k = len(alphabet)
        delta = [tuple(row) for row in delta]
        for row in delta:
            if len(row) != k:
                raise ValueError("transition table row has wrong width")
            for t in row:
                if not 0 <= t < len(delta):
                    raise ValueError(f"transition target {t} out of range")
        if not 0 <= initial < len(delta):
            raise ValueError("initial state out of range")
        table, acc = _canonical(alphabet, delta, initial, frozenset(accepting))
        self.alphabet = alphabet
        self.delta = table
        self.accepting = acc
        self._hash = hash((alphabet, table, acc))
        self._cache = {}

    @classmethod
    def _raw(cls, alphabet, delta, accepting):
        """Wrap an already canonical table without re-minimising."""
        self = object.__new__(cls)
        self.alphabet = alphabet
        self.delta = delta
        self.accepting = accepting
        self._hash = hash((alphabet, delta, accepting))
        self._cache = {}
        return self

    # -- basic constructors -------------------------------------------------

    @classmethod
    def empty(cls, alphabet):
        alphabet = _as_alphabet(alphabet)
        return cls(alphabet, [[0] * len(alphabet)], 0, ())

    @classmethod
    def universal(cls, alphabet):
        alphabet = _as_alphabet(alphabet)
        return cls(alphabet, [[0] * len(alphabet)], 0, (0,))

    @classmethod
    def epsilon(cls, alphabet):
        alphabet = _as_alphabet(alphabet)
        k = len(alphabet)
        return cls(alphabet, [[1] * k, [1] * k], 0, (0,))

    @classmethod
    def nonempty(cls, alphabet):
        """A^+ : every non-empty word."""
        return cls.epsilon(alphabet).complement()

    @classmethod
    def word(cls, alphabet, w):
        """The singleton language {w}."""
        alphabet = _as_alphabet(alphabet)
        codes = alphabet.codes(w)
        n = len(codes)
        sink = n + 1
        delta = []
        for i in range(n + 1):
            row = [sink] * len(alphabet)
            if i < n:
                row[codes[i]] = i + 1
            delta.append(row)
        delta.append([sink] * len(alphabet))
        return cls(alphabet, delta, 0, (n,))

    @classmethod
    def letters(cls, alphabet, letters):
        """Words of length one whose letter lies in ``letters``."""
        alphabet = _as_alphabet(alphabet)
        codes = set(alphabet.codes(letters))
        k = len(alphabet)
        delta = [[1 if c in codes else 2 for c in range(k)], [2] * k, [2] * k]
        return cls(alphabet, delta, 0, (1,))

    @classmethod
    def from_regex(cls, pattern, alphabet):
        return parse_regex(pattern, alphabet).determinize()

    @classmethod
    def from_predicate(cls, alphabet, maxlen, predicate):
        """Finite language {w : |w| <= maxlen and predicate(w)} (testing aid)."""
        alphabet = _as_alphabet(alphabet)
        nfa = Nfa(alphabet)
        for w in alphabet.words(maxlen):
            if predicate(w):
                nfa.add_word(w)
        return nfa.determinize()

    # -- protocol -----------------------------------------------------------

    @property
    def n_states(self):
        return len(self.delta)

    @property
    def initial(self):
        return 0

    def __eq__(self, other):
        if not isinstance(other, Dfa):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.alphabet == other.alphabet
            and self.delta == other.delta
            and self.accepting == other.accepting
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return (
            f"<Dfa {self.n_states} states over {self.alphabet!r}, "
            f"accepting {sorted(self.accepting)}>"
        )

    def __contains__(self, word):
        return self.accepts(word)

    def _check_same(self, other):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch(f"{self.alphabet!r} vs {other.alphabet!r}")

    # -- running ------------------------------------------------------------

    def run(self, word, state=0):
        delta = self.delta
        for c in self.alphabet.codes(word):
            state = delta[state][c]
        return state

    def accepts(self, word):
        return self.run(word) in self.accepting

    def step(self, state, letter):
        return self.delta[state][self.alphabet.index[letter]]

    # -- structural queries -------------------------------------------------

    def is_empty(self):
        return not self.accepting

    def is_universal(self):
        return len(self.accepting) == self.n_states

    def contains_epsilon(self):
        return 0 in self.accepting

    def live_states(self):
        """States from which some accepting state is reachable."""
        if "live" not in self._cache:
            rev = [[] for _ in self.delta]
            for s, row in enumerate(self.delta):
                for t in row:
                    rev[t].append(s)
            live = set(self.accepting)
            stack = list(live)
            while stack:
                t = stack.pop()
                for s in rev[t]:
                    if s not in live:
                        live.add(s)
                        stack.append(s)
            self._cache["live"] = frozenset(live)
        return self._cache["live"]

    def is_finite(self):
        live = self.live_states()
        # a cycle through live states means infinitely many words
        color = {}
        for root in live:
            if root in color:
                continue
            stack = [(root, iter(self.delta[root]))]
            color[root] = 1
            while stack:
                s, it = stack[-1]
                for t in it:
                    if t not in live:
                        continue
                    if color.get(t) == 1:
                        return False
                    if t not in color:
                        color[t] = 1
                        stack.append((t, iter(self.delta[t])))
                        break
                else:
                    color[s] = 2
                    stack.pop()
        return True

    def shortest_word(self, state=0):
        """Length-lexicographically least accepted word from ``state``, or None."""
        if state in self.accepting:
            return self.alphabet.empty_word()
        parent = {state: None}
        queue = deque([state])
        while queue:
            s = queue.popleft()
            for c, t in enumerate(self.delta[s]):
                if t not in parent:
                    parent[t] = (s, c)
                    if t in self.accepting:
                        return self._trace(parent, t)
                    queue.append(t)
        return None

    def _trace(self, parent, t):
        out = []
        while parent[t] is not None:
            s, c = parent[t]
            out.append(self.alphabet.letters[c])
            t = s
        return self.alphabet.join(reversed(out))

    def access_words(self):
        """Shortlex-least word reaching each state (index = state)."""
        if "access" not in self._cache:
            words = [None] * self.n_states
            words[0] = ()
            queue = deque([0])
            while queue:
                s = queue.popleft()
                for c, t in enumerate(self.delta[s]):
                    if words[t] is None:
                        words[t] = words[s] + (self.alphabet.letters[c],)
                        queue.append(t)
            self._cache["access"] = tuple(self.alphabet.join(w) for w in words)
        return self._cache["access"]

    def enumerate(self, maxlen):
        """Accepted words of length <= maxlen, length-lexicographically ordered."""
        live = self.live_states()
        if 0 not in live:
            return []
        out = []
        layer = [((), 0)]
        letters = self.alphabet.letters
        for n in range(maxlen + 1):
            for w, s in layer:
                if s in self.accepting:
                    out.append(self.alphabet.join(w))
            if n == maxlen:
                break
            nxt = []
            for w, s in layer:
                for c, t in enumerate(self.delta[s]):
                    if t in live:
                        nxt.append((w + (letters[c],), t))
            layer = nxt
        return out

    def count_words(self, length):
        counts = [0] * self.n_states
        counts[0] = 1
        for _ in range(length):
            nxt = [0] * self.n_states
            for s, c in enumerate(counts):
                if c:
                    for t in self.delta[s]:
                        nxt[t] += c
            counts = nxt
        return sum(counts[s] for s in self.accepting)

    # -- boolean operations -------------------------------------------------

    def complement(self):
        acc = frozenset(range(self.n_states)) - self.accepting
        # flipping acceptance of a canonical automaton keeps it canonical
        return Dfa._raw(self.alphabet, self.delta, acc)

    def _product(self, others, combine):
        for o in others:
            self._check_same(o)
        dfas = (self,) + tuple(others)
        k = len(self.alphabet)
        start = (0,) * len(dfas)
        index = {start: 0}
        states = [start]
        delta = []
        i = 0
        while i < len(states):
            tup = states[i]
            i += 1
            row = []
            for c in range(k):
                t = tuple(d.delta[s][c] for d, s in zip(dfas, tup))
                j = index.get(t)
                if j is None:
                    j = index[t] = len(states)
                    states.append(t)
                row.append(j)
            delta.append(row)
        acc = [
            j
            for j, tup in enumerate(states)
            if combine([s in d.accepting for d, s in zip(dfas, tup)])
        ]
        return Dfa(self.alphabet, delta, 0, acc)

    def intersection(self, *others):
        return self._product(others, all)

    def union(self, *others):
        return self._product(others, any)

    def difference(self, other):
        return self._product((other,), lambda bits: bits[0] and not bits[1])

    def symmetric_difference(self, other):
        return self._product((other,), lambda bits: bits[0] != bits[1])

    __and__ = intersection
    __or__ = union
    __sub__ = difference
    __xor__ = symmetric_difference

    def __invert__(self):
        return self.complement()

    def issubset(self, other):
        self._check_same(other)
        return self.difference(other).is_empty()

    __le__ = issubset

    def counterexample(self, other):
        """Shortest word in the symmetric difference, or None if equal."""
        return self.symmetric_difference(other).shortest_word()

    # -- quotients ----------------------------------------------------------

    def from_state(self, state):
        """The language accepted when starting from ``state``."""
        return Dfa(self.alphabet, self.delta, state, self.accepting)

    def left_quotient(self, word):
        """u^{-1} L = {v : uv in L}."""
        return self.from_state(self.run(word))

    def right_quotient(self, word):
        """L u^{-1} = {v : vu in L}."""
        acc = [s for s in range(self.n_states) if self.run(word, s) in self.accepting]
        return Dfa(self.alphabet, self.delta, 0, acc)

    def left_residuals(self):
        """All distinct left quotients u^{-1}L; one per state."""
        return [self.from_state(s) for s in range(self.n_states)]

    def right_residuals(self):
        """All distinct right quotients L u^{-1}, in discovery order."""
        start = frozenset(self.accepting)
        seen = {start}
        order = [start]
        i = 0
        while i < len(order):
            fset = order[i]
            i += 1
            for c in range(len(self.alphabet)):
                pre = frozenset(
                    s for s in range(self.n_states) if self.delta[s][c] in fset
                )
                if pre not in seen:
                    seen.add(pre)
                    order.append(pre)
        out = []
        for fset in order:
            d = Dfa(self.alphabet, self.delta, 0, fset)
            if d not in out:
                out.append(d)
        return out

    def state_inclusion(self):
        """Matrix ``inc[p][q]``: language from p is a subset of language from q."""
        if "incl" not in self._cache:
            n = self.n_states
            acc = self.accepting
            inc = [[not (p in acc and q not in acc) for q in range(n)] for p in range(n)]
            changed = True
            while changed:
                changed = False
                for p in range(n):
                    rp = self.delta[p]
                    row = inc[p]
                    for q in range(n):
                        if row[q]:
                            rq = self.delta[q]
                            for c in range(len(rp)):
                                if not inc[rp[c]][rq[c]]:
                                    row[q] = False
                                    changed = True
                                    break
            self._cache["incl"] = tuple(tuple(r) for r in inc)
        return self._cache["incl"]

    def with_accepting(self, states):
        return Dfa(self.alphabet, self.delta, 0, states)

    # -- morphisms ----------------------------------------------------------

    def inverse_image(self, alphabet, mapping):
        """h^{-1}(L) for the letter-to-letter morphism ``mapping``.

        ``alphabet`` is the source alphabet of h; ``mapping(b)`` must be a
        letter of this automaton's alphabet.
        """
        alphabet = _as_alphabet(alphabet)
        codes = [self.alphabet.index[mapping(b)] for b in alphabet.letters]
        delta = [[row[c] for c in codes] for row in self.delta]
        return Dfa(alphabet, delta, 0, self.accepting)

    def image(self, alphabet, mapping):
        """h(L) for the letter-to-letter morphism ``mapping`` into ``alphabet``."""
        alphabet = _as_alphabet(alphabet)
        nfa = Nfa(alphabet)
        nfa.add_states(self.n_states)
        for s, row in enumerate(self.delta):
            for c, t in enumerate(row):
                nfa.add_edge(s, mapping(self.alphabet.letters[c]), t)
        nfa.initial = {0}
        nfa.accepting = set(self.accepting)
        return nfa.determinize()

    def reverse(self):
        nfa = Nfa(self.alphabet)
        nfa.add_states(self.n_states)
        for s, row in enumerate(self.delta):
            for c, t in enumerate(row):
                nfa.add_edge(t, self.alphabet.letters[c], s)
        nfa.initial = set(self.accepting)
        nfa.accepting = {0}
        return nfa.determinize()

    # -- serialisation ------------------------------------------------------

    def to_json(self):
        letters = list(self.alphabet.letters)
        return {
            "alphabet": [list(a) if isinstance(a, tuple) else a for a in letters],
            "states": self.n_states,
            "transitions": [
                [s, _json_letter(letters[c]), t]
                for s, row in enumerate(self.delta)
                for c, t in enumerate(row)
            ],
            "initial": 0,
            "accepting": sorted(self.accepting),
        }

    @classmethod
    def from_json(cls, data):
        letters = [_unjson_letter(a) for a in data["alphabet"]]
        alphabet = Alphabet(letters)
        n = int(data["states"])
        k = len(alphabet)
        sink = n
        delta = [[sink] * k for _ in range(n + 1)]
        for s, a, t in data["transitions"]:
            a = _unjson_letter(a)
            if a not in alphabet:
                raise UnknownLetter(f"letter {a!r} not in alphabet")
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError("transition state out of range")
            delta[s][alphabet.index[a]] = t
        accepting = [int(q) for q in data.get("accepting", [])]
        if any(not 0 <= q < n for q in accepting):
            raise ValueError("accepting state out of range")
        return cls(alphabet, delta, int(data.get("initial", 0)), accepting)


def _json_letter(a):
    return list(_json_letter(x) for x in a) if isinstance(a, tuple) else a


def _unjson_letter(a):
    return tuple(_unjson_letter(x) for x in a) if isinstance(a, list) else a


# ---------------------------------------------------------------------------
# Nondeterministic automata (internal workhorse for concatenation etc.)


class Nfa:
    """Mutable NFA with epsilon moves, determinised on demand."""

    def __init__(self, alphabet):
        self.alphabet = _as_alphabet(alphabet)
        self.edges = []  # state -> {letter_code: set}
        self.eps = []
        self.initial = set()
        self.accepting = set()

    def add_states(self, n):
        first = len(self.edges)
        for _ in range(n):
            self.edges.append({})
            self.eps.append(set())
        return first

    def add_state(self):
        return self.add_states(1)

    def add_edge(self, s, letter, t):
        c = self.alphabet.index[letter]
        self.edges[s].setdefault(c, set()).add(t)

    def add_code_edge(self, s, c, t):
        self.edges[s].setdefault(c, set()).add(t)

    def add_eps(self, s, t):
        self.eps[s].add(t)

    def add_word(self, word):
        if not self.initial:
            self.initial.add(self.add_state())
        s = next(iter(self.initial))
        for a in word:
            t = self.add_state()
            self.add_edge(s, a, t)
            s = t
        self.accepting.add(s)

    def embed(self, dfa):
        """Copy a Dfa in; returns (initial, accepting set) in local numbering."""
        off = self.add_states(dfa.n_states)
        for s, row in enumerate(dfa.delta):
            for c, t in enumerate(row):
                self.add_code_edge(off + s, c, off + t)
        return off, {off + q for q in dfa.accepting}

    def _closure(self, states):
        stack = list(states)
        out = set(states)
        while stack:
            s = stack.pop()
            for t in self.eps[s]:
                if t not in out:
                    out.add(t)
                    stack.append(t)
        return frozenset(out)

    def determinize(self):
        k = len(self.alphabet)
        start = self._closure(self.initial)
        index = {start: 0}
        order = [start]
        delta = []
        i = 0
        while i < len(order):
            cur = order[i]
            i += 1
            row = []
            for c in range(k):
                nxt = set()
                for s in cur:
                    nxt.update(self.edges[s].get(c, ()))
                tgt = self._closure(nxt)
                j = index.get(tgt)
                if j is None:
                    j = index[tgt] = len(order)
                    order.append(tgt)
                row.append(j)
            delta.append(row)
        acc = [j for j, st in enumerate(order) if st & self.accepting]
        return Dfa(self.alphabet, delta, 0, acc)


# ---------------------------------------------------------------------------
# Concatenation and star


def concat(*dfas):
    """Concatenation L1 L2 ... Ln (n >= 1)."""
    if not dfas:
        raise ValueError("concat needs at least one language")
    alphabet = dfas[0].alphabet
    for d in dfas[1:]:
        dfas[0]._check_same(d)
    if len(dfas) == 1:
        return dfas[0]
    nfa = Nfa(alphabet)
    prev_acc = None
    for d in dfas:
        init, acc = nfa.embed(d)
        if prev_acc is None:
            nfa.initial = {init}
        else:
            for q in prev_acc:
                nfa.add_eps(q, init)
        prev_acc = acc
    nfa.accepting = prev_acc
    return nfa.determinize()


def marked_concat(left, letter, right):
    """left . letter . right"""
    return concat(left, Dfa.word(left.alphabet, [letter]), right)


def star(dfa):
    nfa = Nfa(dfa.alphabet)
    hub = nfa.add_state()
    init, acc = nfa.embed(dfa)
    nfa.add_eps(hub, init)
    for q in acc:
        nfa.add_eps(q, hub)
    nfa.initial = {hub}
    nfa.accepting = {hub}
    return nfa.determinize()


def shortest_common_word(dfas):
    """Shortlex-least word accepted by every automaton, or None.

    Explores the product on the fly; nothing is minimised.
    """
    dfas = list(dfas)
    alphabet = dfas[0].alphabet
    for d in dfas[1:]:
        dfas[0]._check_same(d)
    lives = [d.live_states() for d in dfas]
    start = (0,) * len(dfas)
    if any(0 not in lv for lv in lives):
        return None
    accs = [d.accepting for d in dfas]
    deltas = [d.delta for d in dfas]
    parent = {start: None}
    queue = deque([start])
    k = len(alphabet)
    while queue:
        tup = queue.popleft()
        if all(q in a for q, a in zip(tup, accs)):
            out = []
            while parent[tup] is not None:
                tup, c = parent[tup]
                out.append(alphabet.letters[c])
            return alphabet.join(reversed(out))
        for c in range(k):
            nxt = tuple(dl[q][c] for dl, q in zip(deltas, tup))
            if nxt in parent:
                continue
            if any(q not in lv for q, lv in zip(nxt, lives)):
                continue
            parent[nxt] = (tup, c)
            queue.append(nxt)
    return None


def letter_splits(L, b):
    """Pairs (P, S) with L ∩ A*bA* equal to the union of the languages P b S.

    There is one pair per state q reached after reading some ``u b``: S is
    the language from q (the quotient (ub)^{-1}L) and P the set of words u'
    with u' b S contained in L, i.e. the intersection over x in S of the
    right quotients L (bx)^{-1}.  Pairs with an empty side are dropped.
    """
    inc = L.state_inclusion()
    c = L.alphabet.index[b]
    out = []
    for q in sorted({L.delta[p][c] for p in range(L.n_states)}):
        S = L.from_state(q)
        P = L.with_accepting([p for p in range(L.n_states) if inc[q][L.delta[p][c]]])
        if not S.is_empty() and not P.is_empty() and (P, S) not in out:
            out.append((P, S))
    return out


def union_all(dfas, alphabet):
    dfas = list(dfas)
    if not dfas:
        return Dfa.empty(alphabet)
    return dfas[0].union(*dfas[1:]) if len(dfas) > 1 else dfas[0]


def intersection_all(dfas, alphabet):
    dfas = list(dfas)
    if not dfas:
        return Dfa.universal(alphabet)
    return dfas[0].intersection(*dfas[1:]) if len(dfas) > 1 else dfas[0]


# ---------------------------------------------------------------------------
# Regular expressions
#
#   expr   := term ('|' term)*
#   term   := factor factor*
#   factor := atom ('*' | '+')*
#   atom   := letter | '_' | '.' | '(' expr ')'
#
# '_' is the empty word and '.' any single letter. Whitespace is ignored.

_RESERVED = set("|*+()_. \t\n")


class _RegexParser:
    def __init__(self, text, alphabet):
        self.text = text
        self.pos = 0
        self.alphabet = alphabet
        self.nfa = Nfa(alphabet)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self):
        if self.peek() is None:
            raise RegexSyntaxError("empty expression", self.pos)
        frag = self.expr()
        if self.peek() is not None:
            raise RegexSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        self.nfa.initial = {frag[0]}
        self.nfa.accepting = {frag[1]}
        return self.nfa

    # fragments are (entry, exit) pairs of NFA states

    def expr(self):
        frag = self.term()
        while self.peek() == "|":
            self.pos += 1
            other = self.term()
            s = self.nfa.add_state()
            t = self.nfa.add_state()
            for f in (frag, other):
                self.nfa.add_eps(s, f[0])
                self.nfa.add_eps(f[1], t)
            frag = (s, t)
        return frag

    def term(self):
        c = self.peek()
        if c is None or c in "|)":
            raise RegexSyntaxError("missing operand", self.pos)
        frag = self.factor()
        while self.peek() is not None and self.peek() not in "|)":
            nxt = self.factor()
            self.nfa.add_eps(frag[1], nxt[0])
            frag = (frag[0], nxt[1])
        return frag

    def factor(self):
        frag = self.atom()
        while self.peek() in ("*", "+"):
            op = self.text[self.pos]
            self.pos += 1
            s = self.nfa.add_state()
            t = self.nfa.add_state()
            self.nfa.add_eps(s, frag[0])
            self.nfa.add_eps(frag[1], t)
            self.nfa.add_eps(frag[1], frag[0])
            if op == "*":
                self.nfa.add_eps(s, t)
            frag = (s, t)
        return frag

    def atom(self):
        c = self.peek()
        start = self.pos
        if c is None:
            raise RegexSyntaxError("unexpected end of expression", self.pos)
        if c == "(":
            self.pos += 1
            frag = self.expr()
            if self.peek() != ")":
                raise RegexSyntaxError("unbalanced parenthesis", start)
            self.pos += 1
            return frag
        if c in "*+":
            raise RegexSyntaxError(f"dangling {c!r}", self.pos)
        self.pos += 1
        s = self.nfa.add_state()
        t = self.nfa.add_state()
        if c == "_":
            self.nfa.add_eps(s, t)
        elif c == ".":
            for code in range(len(self.alphabet)):
                self.nfa.add_code_edge(s, code, t)
        elif c in self.alphabet:
            self.nfa.add_edge(s, c, t)
        else:
            raise UnknownLetter(f"letter {c!r} at position {start} not in {self.alphabet!r}")
        return (s, t)


def parse_regex(pattern, alphabet):
    """Parse ``pattern`` into an :class:`Nfa` over ``alphabet``."""
    alphabet = _as_alphabet(alphabet)
    if not alphabet.chars:
        raise ValueError("regular expressions need single-character letters")
    return _RegexParser(pattern, alphabet).parse()
