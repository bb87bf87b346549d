"""Membership, separation and pumping for the polynomial strata of a class.

Three independent views of the preorders ``<=_k`` are provided:

* :func:`word_leq_recursive` unfolds the defining recursion on words
  (``w <=_k w'`` iff ``w <=_C w'`` and every letter position of ``w`` is
  matched by a position of ``w'`` carrying the same letter whose left and
  right factors compare at level ``k - 1``);
* :class:`StratumAlgebra` computes finite "types" per level whose order is
  exactly ``<=_k``; membership and separation run on these;
* :func:`bounded_stratum` enumerates the stratum restricted to short words,
  straight from the closure definition, and serves as a test oracle.
"""

from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field

from .classes import class_monoid, period
from .errors import BudgetExceeded, PreconditionViolated
from .regular import Dfa, concat, shortest_common_word, shortlex_key, union_all

__all__ = [
    "Verdict",
    "StratumAlgebra",
    "TypeMonoid",
    "build_type_monoid",
    "word_leq_recursive",
    "word_leq_k",
    "pol_stratum_member",
    "bpol_stratum_member",
    "pol_stratum_separable",
    "bpol_stratum_separable",
    "pol_separability_search",
    "bounded_word_search",
    "enumerate_stratum",
    "bounded_stratum",
    "verify_pumping_1",
    "verify_pumping_2",
    "pumping_bound",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 50_000


@dataclass
class Verdict:
    """Outcome of a membership or separation query.

    ``status`` is one of Member, NotMember, Separable, NotSeparable,
    Inconclusive.  ``witness`` is a pair of words, ``separator`` a Dfa.
    """

    status: str
    k: int
    witness: tuple = None
    separator: Dfa = None
    budget: dict = field(default_factory=dict)
    reason: str = None

    @property
    def definite(self):
        return self.status != "Inconclusive"

    def to_json(self):
        out = {"status": self.status, "k": self.k, "budget": dict(self.budget)}
        out["witness"] = list(self.witness) if self.witness is not None else None
        if self.separator is not None:
            out["separator"] = self.separator.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


# ---------------------------------------------------------------------------
# Word recursion


def _word_cache(C):
    return C.__dict__.setdefault("_word_leq_cache", {})


def word_leq_recursive(C, k, w1, w2):
    """``w1 <=_k w2`` by direct memoised recursion on factors."""
    if k < 0:
        raise ValueError("k must be non-negative")
    M = class_monoid(C)
    cache = _word_cache(C)
    elem = {}

    def ev(x):
        e = elem.get(x)
        if e is None:
            e = elem[x] = M.eval(x)
        return e

    def rec(j, x, y):
        key = (j, x, y)
        r = cache.get(key)
        if r is not None:
            return r
        r = M.leq(ev(x), ev(y))
        if r and j > 0:
            # cheap necessary condition: letters of x occur in y
            if not set(x) <= set(y):
                r = False
            else:
                for i, a in enumerate(x):
                    u, v = x[:i], x[i + 1:]
                    ok = False
                    for i2, b in enumerate(y):
                        if b == a and rec(j - 1, u, y[:i2]) and rec(j - 1, v, y[i2 + 1:]):
                            ok = True
                            break
                    if not ok:
                        r = False
                        break
        cache[key] = r
        return r

    return rec(k, w1, w2)


# ---------------------------------------------------------------------------
# Type algebra


class StratumAlgebra:
    """Finite monoids of types whose orders are the preorders ``<=_j``.

    Level 0 is the class monoid.  A level-``j`` type of a word ``w`` is the
    pair (level ``j-1`` type of ``w``, maximal triples ``(s, a, t)`` over the
    decompositions ``w = u a v`` with ``s``, ``t`` the level ``j-1`` types of
    ``u`` and ``v``).  Types are interned to integers, distinct integers are
    distinct equivalence classes.
    """

    def __init__(self, C, budget=None):
        self.C = C
        self.M = class_monoid(C)
        self.k_letters = len(C.alphabet)
        self._levels = []
        self._count = 0
        self._limit = None if budget is None else budget

    @contextmanager
    def limited(self, budget):
        """Allow at most ``budget`` new types inside the block."""
        saved = self._limit
        self._limit = None if budget is None else self._count + budget
        try:
            yield self
        finally:
            self._limit = saved

    # level bookkeeping

    def _level(self, j):
        while len(self._levels) < j:
            i = len(self._levels) + 1
            lv = {"forms": [], "index": {}, "mul": {}, "leq": {}}
            self._levels.append(lv)
            try:
                lv["unit"] = self._intern(i, (self.unit(i - 1), frozenset()))
                lv["letters"] = [
                    self._intern(
                        i,
                        (self.letter(i - 1, c),
                         frozenset({(self.unit(i - 1), c, self.unit(i - 1))})),
                    )
                    for c in range(self.k_letters)
                ]
            except BudgetExceeded:
                # a half-built level would poison later queries
                self._levels.pop()
                raise
        return self._levels[j - 1]

    def _intern(self, j, form):
        lv = self._levels[j - 1]
        x = lv["index"].get(form)
        if x is None:
            x = len(lv["forms"])
            if self._limit is not None and self._count >= self._limit:
                raise BudgetExceeded(f"new types (level {j})", self._count + 1, self._limit)
            self._count += 1
            lv["index"][form] = x
            lv["forms"].append(form)
        return x

    def size(self, j):
        if j == 0:
            return len(self.M)
        return len(self._level(j)["forms"])

    def unit(self, j):
        return 0 if j == 0 else self._level(j)["unit"]

    def letter(self, j, c):
        if j == 0:
            return self.M.right[0][c]
        return self._level(j)["letters"][c]

    def form(self, j, x):
        return self._level(j)["forms"][x]

    # algebra

    def mul(self, j, x, y):
        if j == 0:
            return self.M.mul(x, y)
        lv = self._level(j)
        key = (x, y)
        r = lv["mul"].get(key)
        if r is not None:
            return r
        px, tx = lv["forms"][x]
        py, ty = lv["forms"][y]
        prev = self.mul(j - 1, px, py)
        triples = {(s, c, self.mul(j - 1, t, py)) for s, c, t in tx}
        triples.update((self.mul(j - 1, px, s), c, t) for s, c, t in ty)
        r = self._intern(j, (prev, self._maxima(j - 1, triples)))
        lv["mul"][key] = r
        return r

    def _maxima(self, j, triples):
        out = []
        items = sorted(triples)
        for tr in items:
            s, c, t = tr
            dominated = False
            for other in items:
                if other != tr and other[1] == c:
                    s2, _, t2 = other
                    if self.leq(j, s, s2) and self.leq(j, t, t2):
                        dominated = True
                        break
            if not dominated:
                out.append(tr)
        return frozenset(out)

    def leq(self, j, x, y):
        if j == 0:
            return self.M.leq(x, y)
        if x == y:
            return True
        lv = self._level(j)
        key = (x, y)
        r = lv["leq"].get(key)
        if r is not None:
            return r
        px, tx = lv["forms"][x]
        py, ty = lv["forms"][y]
        r = self.leq(j - 1, px, py) and all(
            any(
                c2 == c and self.leq(j - 1, s, s2) and self.leq(j - 1, t, t2)
                for s2, c2, t2 in ty
            )
            for s, c, t in tx
        )
        lv["leq"][key] = r
        return r

    def eval(self, j, word):
        codes = self.C.alphabet.codes(word)
        if j == 0:
            return self.M.eval(word)
        x = self.unit(j)
        for c in codes:
            x = self.mul(j, x, self.letter(j, c))
        return x

    def word_leq(self, j, w1, w2):
        return self.leq(j, self.eval(j, w1), self.eval(j, w2))

    # languages attached to a type

    def _memo(self, name):
        return self.__dict__.setdefault(name, {})

    def up_parts(self, j, x):
        """Automata whose intersection is the up-language of ``x`` (j >= 1)."""
        prev, triples = self.form(j, x)
        memo = self._memo("_m_marked_up")
        parts = [self.up_language(j - 1, prev)]
        for s, c, t in sorted(triples):
            d = memo.get((j - 1, s, c, t))
            if d is None:
                A = self.C.alphabet
                d = memo[(j - 1, s, c, t)] = concat(
                    self.up_language(j - 1, s),
                    Dfa.word(A, [A.letters[c]]),
                    self.up_language(j - 1, t),
                )
            parts.append(d)
        return parts

    def up_language(self, j, x):
        """Dfa of all words whose level-``j`` type is above ``x``."""
        memo = self._memo("_m_up")
        d = memo.get((j, x))
        if d is None:
            if j == 0:
                d = self._level0_language(lambda v: self.C.vleq(self.M.vectors[x], v))
            else:
                parts = self.up_parts(j, x)
                d = parts[0].intersection(*parts[1:]) if len(parts) > 1 else parts[0]
            memo[(j, x)] = d
        return d

    def down_parts(self, j, x):
        """Automata whose intersection is the down-language of ``x`` (j >= 1)."""
        prev, triples = self.form(j, x)
        A = self.C.alphabet
        memo = self._memo("_m_unmatched")
        parts = [self.down_language(j - 1, prev)]
        for c, a in enumerate(A.letters):
            mine = tuple((s, t) for s, c2, t in sorted(triples) if c2 == c)
            d = memo.get((j - 1, a, mine))
            if d is None:
                d = memo[(j - 1, a, mine)] = ~self._unmatched(j - 1, a, mine)
            parts.append(d)
        return parts

    def down_language(self, j, x):
        """Dfa of all words whose level-``j`` type is below ``x``."""
        memo = self._memo("_m_down")
        d = memo.get((j, x))
        if d is None:
            if j == 0:
                d = self._level0_language(lambda v: self.C.vleq(v, self.M.vectors[x]))
            else:
                parts = self.down_parts(j, x)
                d = parts[0].intersection(*parts[1:])
            memo[(j, x)] = d
        return d

    def region_parts(self, j, x, region):
        """Conjuncts for ``region`` in up / down / class around type ``x``."""
        if j == 0:
            if region == "up":
                return [self.up_language(0, x)]
            if region == "down":
                return [self.down_language(0, x)]
            return [self.up_language(0, x), self.down_language(0, x)]
        if region == "up":
            return self.up_parts(j, x)
        if region == "down":
            return self.down_parts(j, x)
        return self.up_parts(j, x) + self.down_parts(j, x)

    def _unmatched(self, j, a, pairs):
        """Words u a v such that no (s, t) in ``pairs`` has u below s and v below t."""
        A = self.C.alphabet
        mark = Dfa.word(A, [a])
        if not pairs:
            return concat(Dfa.universal(A), mark, Dfa.universal(A))
        lefts = [self.down_language(j, s) for s, _ in pairs]
        rights = [self.down_language(j, t) for _, t in pairs]
        # split prefixes by which left languages contain them
        k = len(A)
        start = (0,) * len(lefts)
        index = {start: 0}
        states = [start]
        delta = []
        i = 0
        while i < len(states):
            tup = states[i]
            i += 1
            row = []
            for c in range(k):
                nxt = tuple(d.delta[q][c] for d, q in zip(lefts, tup))
                if nxt not in index:
                    index[nxt] = len(states)
                    states.append(nxt)
                row.append(index[nxt])
            delta.append(row)
        groups = {}
        for p, tup in enumerate(states):
            key = frozenset(i for i, (d, q) in enumerate(zip(lefts, tup)) if q in d.accepting)
            groups.setdefault(key, []).append(p)
        parts = []
        for key, acc in sorted(groups.items(), key=lambda kv: sorted(kv[0])):
            prefix = Dfa(A, delta, 0, acc)
            suffix = ~union_all([rights[i] for i in sorted(key)], A)
            parts.append(concat(prefix, mark, suffix))
        return union_all(parts, A)

    def class_language(self, j, x):
        """Dfa of all words of level-``j`` type exactly ``x``."""
        memo = self._memo("_m_class")
        d = memo.get((j, x))
        if d is None:
            d = memo[(j, x)] = self.up_language(j, x) & self.down_language(j, x)
        return d

    def _level0_language(self, keep):
        delta, vectors = self.C.product()
        return Dfa(self.C.alphabet, delta, 0, [p for p, v in enumerate(vectors) if keep(v)])


def _algebra(C):
    """The algebra shared by every query on class C."""
    alg = C.__dict__.get("_stratum_algebra")
    if alg is None:
        alg = C.__dict__["_stratum_algebra"] = StratumAlgebra(C)
    return alg


class TypeMonoid:
    """The level-``k`` types reachable from the unit, with their Cayley graph."""

    def __init__(self, algebra, k, budget=None):
        self.algebra = algebra
        self.k = k
        A = algebra.C.alphabet
        unit = algebra.unit(k)
        order = [unit]
        reps = {unit: ()}
        right = {}
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            row = []
            for c, a in enumerate(A.letters):
                y = algebra.mul(k, x, algebra.letter(k, c))
                if y not in reps:
                    reps[y] = reps[x] + (a,)
                    order.append(y)
                    if budget is not None and len(order) > budget:
                        raise BudgetExceeded(f"level {k} type monoid", len(order), budget)
                row.append(y)
            right[x] = tuple(row)
        self.elements = order
        self.unit = unit
        self.right = right
        self.reps = {x: A.join(w) for x, w in reps.items()}

    def __len__(self):
        return len(self.elements)

    def mul(self, x, y):
        return self.algebra.mul(self.k, x, y)

    def leq(self, x, y):
        return self.algebra.leq(self.k, x, y)

    def eval(self, word):
        return self.algebra.eval(self.k, word)

    def eval_letter(self, a):
        return self.algebra.letter(self.k, self.algebra.C.alphabet.index[a])

    def automaton(self, accepting):
        """Dfa reading words into types, accepting the given type set."""
        pos = {x: i for i, x in enumerate(self.elements)}
        delta = [[pos[y] for y in self.right[x]] for x in self.elements]
        acc = [pos[x] for x in accepting]
        return Dfa(self.algebra.C.alphabet, delta, 0, acc)


def build_type_monoid(C, k, budget=DEFAULT_BUDGET):
    """Level-``k`` type monoid; raises BudgetExceeded past ``budget`` elements."""
    alg = _algebra(C)
    with alg.limited(budget):
        return TypeMonoid(alg, k, budget)


def word_leq_k(C, k, w1, w2, method="auto", budget=DEFAULT_BUDGET):
    """``w1 <=_k w2``.

    ``method`` is ``"recursion"``, ``"types"`` or ``"auto"`` (types for long
    words, falling back to recursion if the type budget runs out).
    """
    if method == "recursion":
        return word_leq_recursive(C, k, w1, w2)
    if method == "types" or len(w1) + len(w2) > 16:
        alg = _algebra(C)
        try:
            with alg.limited(budget):
                return alg.word_leq(k, w1, w2)
        except BudgetExceeded:
            if method == "types":
                raise
    return word_leq_recursive(C, k, w1, w2)


# ---------------------------------------------------------------------------
# Membership and separation
#
# Two exact engines.  "monoid" explores every reachable type and compares
# the types met inside and outside the language.  "local" only computes the
# types of words of one side (a language and its prefixes) and, per type,
# the regular language of words above / below / equal to it; it stays cheap
# when the side it works on is thin, even if the full type monoid is huge.


def _side_types(alg, k, dfa, targets, limit):
    """Shortest word per level-``k`` type among words reaching ``targets``.

    Only prefixes that can still reach ``targets`` are explored.
    """
    A = alg.C.alphabet
    live = _live(dfa, targets)
    if 0 not in live:
        return {}
    start = (alg.unit(k), 0)
    words = {start: ()}
    queue = deque([start])
    letters = [alg.letter(k, c) for c in range(len(A))]
    while queue:
        x, q = queue.popleft()
        w = words[(x, q)]
        row = dfa.delta[q]
        for c, a in enumerate(A.letters):
            q2 = row[c]
            if q2 not in live:
                continue
            nxt = (alg.mul(k, x, letters[c]), q2)
            if nxt not in words:
                if len(words) >= limit:
                    raise BudgetExceeded("type/state pairs", len(words) + 1, limit)
                words[nxt] = w + (a,)
                queue.append(nxt)
    out = {}
    for (x, q), w in words.items():
        if q in targets and (x not in out or shortlex_key(w) < shortlex_key(out[x])):
            out[x] = w
    return out


def _live(dfa, targets):
    rev = [[] for _ in dfa.delta]
    for s, row in enumerate(dfa.delta):
        for t in row:
            rev[t].append(s)
    live = set(targets)
    stack = list(live)
    while stack:
        t = stack.pop()
        for s in rev[t]:
            if s not in live:
                live.add(s)
                stack.append(s)
    return live


def _all_types(alg, k, dfa, limit):
    """(accepted, rejected) maps type -> shortest word, over all words."""
    rej = frozenset(range(dfa.n_states)) - dfa.accepting
    acc = _side_types(alg, k, dfa, dfa.accepting, limit)
    return acc, _side_types(alg, k, dfa, rej, limit)


def _key(w1, w2):
    return (len(w1) + len(w2), shortlex_key(w1), shortlex_key(w2))


def _least(cands):
    best = None
    for w1, w2 in cands:
        if best is None or _key(w1, w2) < _key(*best):
            best = (w1, w2)
    return best


def _monoid_pair(alg, k, left, right, relation):
    join = alg.C.alphabet.join
    return _least(
        (join(w1), join(w2))
        for x, w1 in left.items()
        for y, w2 in right.items()
        if relation(x, y)
    )


class _Query:
    """Shared driver: find the least pair (w, w') with w in X, w' in Y and
    w R w', where R is "type below" (strict=False) or "same type"."""

    def __init__(self, C, k, X, Y, same_type, budget, maxlen, engine):
        self.C, self.k, self.X, self.Y = C, k, X, Y
        self.same = same_type
        self.budget = budget
        self.maxlen = maxlen
        self.engine = engine
        self.alg = _algebra(C)
        self.info = {"limit": budget, "engine": engine}

    def run(self):
        engines = ["local", "monoid"] if self.engine == "auto" else [self.engine]
        last = None
        for eng in engines:
            try:
                if eng == "monoid":
                    with self.alg.limited(self.budget):
                        pair = self._monoid()
                else:
                    pair = self._local()
                self.info["engine"] = eng
                self.info["types_at_level"] = self.alg.size(self.k)
                return True, pair
            except BudgetExceeded as exc:
                last = exc
        self.info["exceeded"] = str(last)
        return False, None

    def _monoid(self):
        alg, k = self.alg, self.k
        tx = _side_types(alg, k, self.X, self.X.accepting, self.budget)
        ty = _side_types(alg, k, self.Y, self.Y.accepting, self.budget)
        if self.same:
            rel = lambda x, y: x == y  # noqa: E731
        else:
            rel = lambda x, y: alg.leq(k, x, y)  # noqa: E731
        self.types_x = tx
        return _monoid_pair(alg, k, tx, ty, rel)

    def _local(self):
        alg, k = self.alg, self.k
        join = self.C.alphabet.join
        errors = []
        for side in ("x", "y"):
            try:
                self.alg._limit = self.alg._count + self.budget
                if side == "x":
                    tx = _side_types(alg, k, self.X, self.X.accepting, self.budget)
                    self.types_x = tx
                    cands = []
                    for x, w in tx.items():
                        parts = alg.region_parts(k, x, "class" if self.same else "up")
                        w2 = shortest_common_word(parts + [self.Y])
                        if w2 is not None:
                            cands.append((join(w), w2))
                else:
                    ty = _side_types(alg, k, self.Y, self.Y.accepting, self.budget)
                    cands = []
                    for y, w in ty.items():
                        parts = alg.region_parts(k, y, "class" if self.same else "down")
                        w1 = shortest_common_word(parts + [self.X])
                        if w1 is not None:
                            cands.append((w1, join(w)))
                self.info["side"] = "left" if side == "x" else "right"
                return _least(cands)
            except BudgetExceeded as exc:
                errors.append(exc)
            finally:
                self.alg._limit = None
        raise errors[-1]

    def separator(self):
        """Least stratum language containing X (requires a clean run)."""
        alg, k = self.alg, self.k
        tx = getattr(self, "types_x", None)
        if tx is None:
            with alg.limited(self.budget):
                tx = _side_types(alg, k, self.X, self.X.accepting, self.budget)
        parts = [
            alg.class_language(k, x) if self.same else alg.up_language(k, x) for x in tx
        ]
        return union_all(parts, self.C.alphabet)

    def fallback(self, negative):
        pair = bounded_word_search(
            self.C, self.k, self.X, self.Y, self.maxlen,
            "equiv" if self.same else "leq",
        )
        self.info["search_maxlen"] = self.maxlen
        if pair is not None:
            return Verdict(negative, self.k, witness=pair, budget=self.info)
        return Verdict(
            "Inconclusive", self.k, budget=self.info,
            reason=f"budget exhausted; no witness up to length {self.maxlen}",
        )


def _member(L, C, k, same, budget, maxlen, engine):
    q = _Query(C, k, L, ~L, same, budget, maxlen, engine)
    ok, pair = q.run()
    if not ok:
        return q.fallback("NotMember")
    if pair is None:
        return Verdict("Member", k, budget=q.info)
    return Verdict("NotMember", k, witness=pair, budget=q.info)


def _separable(L1, L2, C, k, same, budget, maxlen, engine, want_separator):
    q = _Query(C, k, L1, L2, same, budget, maxlen, engine)
    ok, pair = q.run()
    if not ok:
        return q.fallback("NotSeparable")
    if pair is not None:
        return Verdict("NotSeparable", k, witness=pair, budget=q.info)
    sep = None
    if want_separator:
        try:
            sep = q.separator()
        except BudgetExceeded as exc:
            q.info["separator"] = f"not built: {exc}"
    return Verdict("Separable", k, separator=sep, budget=q.info)


def pol_stratum_member(L, C, k, budget=DEFAULT_BUDGET, maxlen=6, engine="auto"):
    """Decide whether L belongs to the level-``k`` polynomial stratum of C.

    NotMember verdicts carry the least pair (w in L, w' not in L) with
    w <=_k w' (by total length, then shortlex).
    """
    return _member(L, C, k, False, budget, maxlen, engine)


def bpol_stratum_member(L, C, k, budget=DEFAULT_BUDGET, maxlen=6, engine="auto"):
    """Decide whether L belongs to the Boolean closure of the level-``k`` stratum."""
    return _member(L, C, k, True, budget, maxlen, engine)


def pol_stratum_separable(L1, L2, C, k, budget=DEFAULT_BUDGET, maxlen=6, engine="auto",
                          separator=True):
    """Separate L1 from L2 by a language of the level-``k`` stratum.

    On success the separator is the least stratum language containing L1.
    """
    return _separable(L1, L2, C, k, False, budget, maxlen, engine, separator)


def bpol_stratum_separable(L1, L2, C, k, budget=DEFAULT_BUDGET, maxlen=6, engine="auto",
                           separator=True):
    return _separable(L1, L2, C, k, True, budget, maxlen, engine, separator)


def pol_separability_search(L1, L2, C, kmax, budget=DEFAULT_BUDGET, maxlen=6, engine="auto"):
    """Verdicts for k = 0, 1, ... up to the first Separable one (or kmax).

    Stops early at an Inconclusive verdict, which is returned last.
    """
    out = []
    for k in range(kmax + 1):
        v = pol_stratum_separable(L1, L2, C, k, budget, maxlen, engine)
        out.append(v)
        if v.status in ("Separable", "Inconclusive"):
            break
    return out


def bounded_word_search(C, k, left, right, maxlen, relation="leq"):
    """Least (w, w') with w in ``left``, w' in ``right``, |w|,|w'| <= maxlen.

    ``relation`` is ``"leq"`` (w <=_k w') or ``"equiv"`` (both directions).
    Uses the word recursion only.
    """
    lw = left.enumerate(maxlen)
    rw = right.enumerate(maxlen)
    cands = sorted(((x, y) for x in lw for y in rw), key=lambda p: _key(*p))
    for x, y in cands:
        if word_leq_recursive(C, k, x, y) and (
            relation == "leq" or word_leq_recursive(C, k, y, x)
        ):
            return (x, y)
    return None


# ---------------------------------------------------------------------------
# Enumeration and the bounded oracle


def _lattice_closure(seed, cap, what):
    members = []
    seen = set()
    work = []
    for d in seed:
        if d not in seen:
            seen.add(d)
            work.append(d)
    while work:
        d = work.pop(0)
        new = []
        for e in members:
            for f in (d | e, d & e):
                if f not in seen:
                    seen.add(f)
                    new.append(f)
        members.append(d)
        if len(seen) > cap:
            raise BudgetExceeded(what, len(seen), cap)
        work.extend(new)
    return members


def enumerate_stratum(C, k, budget=2_000):
    """Every language of the level-``k`` stratum, as canonical Dfas.

    Builds the closure under union and intersection of the previous level
    and its marked products; raises BudgetExceeded beyond ``budget`` members.
    """
    A = C.alphabet
    level = _lattice_closure(list(C.members), budget, f"stratum 0 of {C.name}")
    for j in range(1, k + 1):
        seed = list(level)
        for x in level:
            for a in A:
                left = Dfa.word(A, [a])
                xa = concat(x, left)
                for y in level:
                    seed.append(concat(xa, y))
                    if len(seed) > budget * 4:
                        raise BudgetExceeded(f"stratum {j} products", len(seed), budget)
        level = _lattice_closure(seed, budget, f"stratum {j} of {C.name}")
    return level


class bounded_stratum:
    """The level-``k`` stratum of C restricted to words of length <= maxlen.

    Each level is generated from the previous one by principal up-sets and
    their marked products, computed as bit sets over the finite word list.
    ``leq(w, w')`` is the restricted preorder, exact for these lengths.
    """

    def __init__(self, C, k, maxlen):
        self.C = C
        self.k = k
        self.maxlen = maxlen
        A = C.alphabet
        self.words = list(A.words(maxlen))
        self.index = {w: i for i, w in enumerate(self.words)}
        n = len(self.words)
        vecs = [C.vector(w) for w in self.words]
        up = []
        for i in range(n):
            m = 0
            for j in range(n):
                if C.vleq(vecs[i], vecs[j]):
                    m |= 1 << j
            up.append(m)
        self.levels = [up]
        for _ in range(k):
            up = self._next(up)
            self.levels.append(up)

    def _members(self, mask):
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return out

    def _next(self, up):
        A = self.C.alphabet
        words = self.words
        n = len(words)
        gens = set(up)
        distinct = sorted(set(up))
        short = self.maxlen - 1
        lists = [
            [words[i] for i in self._members(m) if len(words[i]) <= short] for m in distinct
        ]
        for I in lists:
            for J in lists:
                for a in A.letters:
                    m = 0
                    for x in I:
                        room = self.maxlen - 1 - len(x)
                        xa = x + a if A.chars else x + (a,)
                        for y in J:
                            if len(y) <= room:
                                m |= 1 << self.index[xa + y]
                    gens.add(m)
        new = []
        full = (1 << n) - 1
        for i in range(n):
            m = full
            bit = 1 << i
            for g in gens:
                if g & bit:
                    m &= g
            new.append(m)
        return new

    def leq(self, w1, w2, level=None):
        level = self.k if level is None else level
        return bool(self.levels[level][self.index[w1]] >> self.index[w2] & 1)

    def up(self, w, level=None):
        level = self.k if level is None else level
        return [self.words[i] for i in self._members(self.levels[level][self.index[w]])]


# ---------------------------------------------------------------------------
# Pumping


def pumping_bound(k):
    return max(1, 2 ** (k + 1) - 1)


def verify_pumping_1(C, k, u, m, m2, method="auto"):
    """Check u^{pm} <=_k u^{pm2} for m, m2 at least 2^{k+1} - 1."""
    b = pumping_bound(k)
    if m < b or m2 < b:
        raise PreconditionViolated(f"exponents must be >= {b} at level {k}")
    p = period(C)
    return word_leq_k(C, k, u * (p * m), u * (p * m2), method=method)


def verify_pumping_2(C, k, u, v, m, m1, m2, method="auto"):
    """Check u^{pm} <=_k u^{pm1} v u^{pm2} when u^p <=_C v."""
    b = pumping_bound(k)
    if min(m, m1, m2) < b:
        raise PreconditionViolated(f"exponents must be >= {b} at level {k}")
    p = period(C)
    if not C.leq(u * p, v):
        raise PreconditionViolated("u^p <=_C v does not hold")
    return word_leq_k(C, k, u * (p * m), u * (p * m1) + v + u * (p * m2), method=method)
