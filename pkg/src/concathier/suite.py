"""Reproducible verification suite: one check per acceptance criterion.

Each check returns a :class:`CheckResult`; ``status`` is ``pass``,
``fail`` or ``inconclusive`` (a budget ran out before a definite answer).
"""

import random
import time
from dataclasses import dataclass, field
from itertools import product

from .classes import builtin_basis, period
from .errors import BudgetExceeded
from .hierarchy import (
    Monomial,
    classic_expressions,
    eval_level,
    piece_complement,
    pol_intersect_rewrite,
    strictness_witnesses,
)
from .logic import (
    SENTENCE_CATALOG,
    classify,
    compile_sentence,
    evaluate,
    marked_concat_sentence,
    parse_formula,
)
from .regular import Alphabet, Dfa, marked_concat
from .strata import (
    DEFAULT_BUDGET,
    StratumAlgebra,
    bounded_stratum,
    bpol_stratum_member,
    enumerate_stratum,
    pol_stratum_member,
    verify_pumping_1,
    verify_pumping_2,
    word_leq_k,
    word_leq_recursive,
)

__all__ = ["SuiteConfig", "CheckResult", "CRITERIA", "run_check", "verify_suite", "format_line"]


@dataclass
class SuiteConfig:
    budget: int = DEFAULT_BUDGET
    seed: int = 20240607
    only: tuple = ()


@dataclass
class CheckResult:
    number: int
    title: str
    status: str
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "pass"

    def to_json(self):
        return {
            "criterion": self.number,
            "title": self.title,
            "status": self.status,
            "seconds": round(self.seconds, 3),
            "detail": self.detail,
        }


class _Inconclusive(Exception):
    pass


def _definite(verdict):
    if verdict.status == "Inconclusive":
        raise _Inconclusive(verdict.reason or "budget exhausted")
    return verdict


AB = Alphabet("ab")


# ---------------------------------------------------------------------------
# The checks.  Each returns (ok, detail).


def check_astar_bstar(cfg):
    C = builtin_basis("dd0", AB)
    L = Dfa.from_regex("a*b*", AB)
    rows = []
    ok = True
    for k in range(4):
        v = _definite(pol_stratum_member(L, C, k, cfg.budget))
        n = 2 ** (k + 1)
        u = "a" * n + "b"
        w = "a" * n + "b" * n + "a" * n + "b"
        row = {
            "k": k,
            "status": v.status,
            "engine_witness": list(v.witness) if v.witness else None,
            "u_in_L": u in L,
            "v_in_L": w in L,
            "u_leq_v": word_leq_k(C, k, u, w, method="types", budget=cfg.budget),
        }
        row_ok = (
            v.status == "NotMember"
            and row["u_in_L"]
            and not row["v_in_L"]
            and row["u_leq_v"]
            and _witness_valid(C, k, L, v.witness, cfg)
        )
        ok &= row_ok
        rows.append(row)
    return ok, {"rows": rows}


def _witness_valid(C, k, L, pair, cfg):
    if pair is None:
        return False
    w1, w2 = pair
    return w1 in L and w2 not in L and word_leq_k(C, k, w1, w2, budget=cfg.budget)


def check_bpol_nested(cfg):
    C = builtin_basis("dd0", AB)
    K = Dfa.from_regex("(a(ab)*b)*", AB)
    rows = []
    ok = True
    for k in range(3):
        v = _definite(bpol_stratum_member(K, C, k, cfg.budget))
        w = "ab" * 2 ** (k + 1)
        x = ("a" + w + "b" + w) * 2 ** (k + 1)
        y = ("a" + w + "a" + w + "b" + w) * 2 ** (k + 1)
        fwd = word_leq_k(C, k, x, y, method="types", budget=cfg.budget)
        back = word_leq_k(C, k, y, x, method="types", budget=cfg.budget)
        row = {
            "k": k,
            "status": v.status,
            "x_in_K": x in K,
            "y_in_K": y in K,
            "x_leq_y": fwd,
            "y_leq_x": back,
            "lengths": [len(x), len(y)],
        }
        ok &= v.status == "NotMember" and row["x_in_K"] and not row["y_in_K"] and fwd and back
        rows.append(row)
    return ok, {"rows": rows}


def check_classic(cfg):
    out = {}
    for name, (expr, target) in classic_expressions(AB).items():
        out[name] = eval_level(expr) == target
    return all(out.values()), out


def check_piece_complement(cfg):
    bad = []
    count = 0
    full = Dfa.universal(AB)
    for n in range(5):
        for seq in product(AB.letters, repeat=n):
            piece = Monomial((full,) * (n + 1), seq).language()
            count += 1
            if piece_complement(seq, AB).language() != ~piece:
                bad.append("".join(seq))
    return not bad, {"sequences": count, "mismatches": bad}


def check_intersection(cfg):
    rng = random.Random(cfg.seed)
    plus = Dfa.nonempty(AB)
    detail = {}
    ok = True
    for kind in ("st0", "at"):
        C = builtin_basis(kind, AB)
        factors = [m for m in C.members if m != plus]

        def monomial():
            d = rng.randint(0, 2)
            return Monomial(
                tuple(rng.choice(factors) for _ in range(d + 1)),
                tuple(rng.choice(AB.letters) for _ in range(d)),
            )

        bad = 0
        for _ in range(100):
            K, L = monomial(), monomial()
            P = pol_intersect_rewrite(K, L, C)
            if P.language() != (K.language() & L.language()):
                bad += 1
            elif P.degree > K.degree + L.degree:
                bad += 1
        detail[kind] = {"instances": 100, "mismatches": bad}
        ok &= bad == 0
    return ok, detail


def check_oracle_gate(cfg, maxlen=5):
    detail = {}
    ok = True
    for kind in ("st0", "dd0"):
        C = builtin_basis(kind, AB)
        alg = StratumAlgebra(C)
        for k in range(3):
            B = bounded_stratum(C, k, maxlen)
            bad = 0
            for w1 in B.words:
                for w2 in B.words:
                    oracle = B.leq(w1, w2)
                    if not (oracle == word_leq_recursive(C, k, w1, w2) == alg.word_leq(k, w1, w2)):
                        bad += 1
            detail[f"{kind} k={k}"] = {"pairs": len(B.words) ** 2, "mismatches": bad}
            ok &= bad == 0
    # the full (unrestricted) stratum, where it is small enough to list
    for kind, k in (("st0", 0), ("st0", 1), ("dd0", 0)):
        C = builtin_basis(kind, AB)
        members = enumerate_stratum(C, k)
        words = list(AB.words(4))
        bad = 0
        for w1 in words:
            for w2 in words:
                implied = all(w2 in m for m in members if w1 in m)
                if implied != word_leq_recursive(C, k, w1, w2):
                    bad += 1
        detail[f"{kind} k={k} full lattice"] = {"members": len(members), "mismatches": bad}
        ok &= bad == 0
    return ok, detail


def check_pumping(cfg):
    words = ("a", "b", "ab")
    detail = {}
    ok = True
    for kind in ("dd0", "st0"):
        C = builtin_basis(kind, AB)
        fails = []
        count = 0
        for k in range(3):
            lo = 2 ** (k + 1) - 1
            exps = (lo, lo + 2)
            for u in words:
                for m, m2 in product(exps, repeat=2):
                    count += 1
                    if not verify_pumping_1(C, k, u, m, m2):
                        fails.append(("1", k, u, m, m2))
                for v in words:
                    for m, m1, m2 in product(exps, repeat=3):
                        count += 1
                        if not verify_pumping_2(C, k, u, v, m, m1, m2):
                            fails.append(("2", k, u, v, m, m1, m2))
        detail[kind] = {"period": period(C), "cases": count, "failures": fails}
        ok &= not fails and period(C) == 1
    return ok, detail


def threshold_period(d, letters=2):
    """Least p with s^p = s^2p in the monoid of letter counts capped at d."""
    elements = list(product(range(d + 1), repeat=letters))

    def power(s, n):
        return tuple(min(c * n, d) for c in s)

    p = 1
    while not all(power(s, p) == power(s, 2 * p) for s in elements):
        p += 1
    return p


def check_periods(cfg):
    got = {
        "dd0": period(builtin_basis("dd0", AB)),
        "st0": period(builtin_basis("st0", AB)),
    }
    want = {"dd0": 1, "st0": 1}
    for d in range(1, 5):
        got[f"att:{d}"] = period(builtin_basis(f"att:{d}", AB))
        want[f"att:{d}"] = threshold_period(d)
    return got == want, {"computed": got, "expected": want}


def check_strictness(cfg):
    t = time.perf_counter()
    try:
        bundle = strictness_witnesses(builtin_basis("dd0", AB), 3, cfg.budget)
    except BudgetExceeded as exc:
        raise _Inconclusive(str(exc)) from None
    elapsed = time.perf_counter() - t
    rows = [
        {"k": r.k, "len_u": len(r.u), "len_v": len(r.v), "ok": r.ok} for r in bundle.rows
    ]
    return bundle.ok and elapsed < 120, {"rows": rows, "period": bundle.period,
                                         "seconds": round(elapsed, 2)}


MARKED_PAIRS = [
    ("exists x. a(x)", "exists x. b(x)", "st0"),
    ("N{Astar}", "N{Astar}", "st0"),
    ("epsilon", "exists x. a(x)", "dd0"),
    ("exists x. exists y. x < y & b(x) & a(y)", "exists x. a(x)", "st0"),
    ("exists x. max(x) & a(x)", "epsilon", "dd0"),
    ("exists x. min(x) & b(x)", "exists x. exists y. +1(x, y) & a(x) & a(y)", "dd0"),
]


def check_logic(cfg, maxlen=8):
    bases = {b: builtin_basis(b, AB) for b in ("st0", "dd0")}
    words = list(AB.words(maxlen))
    catalog = []
    ok = True
    for text, b in SENTENCE_CATALOG:
        f = parse_formula(text, bases[b])
        dfa, claim = compile_sentence(f, bases[b], budget=cfg.budget)
        bad = sum(evaluate(f, w) != dfa.accepts(w) for w in words)
        catalog.append({"sentence": text, "basis": b, "class": str(classify(f)),
                        "claim": str(claim), "mismatches": bad})
        ok &= bad == 0
    pairs = []
    for t1, t2, b in MARKED_PAIRS:
        C = bases[b]
        f1, f2 = parse_formula(t1, C), parse_formula(t2, C)
        d1, _ = compile_sentence(f1, C)
        d2, _ = compile_sentence(f2, C)
        for a in AB.letters:
            psi = marked_concat_sentence(f1, a, f2, C)
            target = marked_concat(d1, a, d2)
            bad = sum(evaluate(psi, w) != target.accepts(w) for w in words)
            same_level = classify(psi).n == max(1, classify(f1).n, classify(f2).n)
            pairs.append({"left": t1, "letter": a, "right": t2, "mismatches": bad,
                          "class": str(classify(psi))})
            ok &= bad == 0 and same_level
    ok &= len(catalog) >= 10 and len(pairs) >= 5
    return ok, {"catalog": catalog, "marked_concat": pairs}


def check_copol(cfg):
    C = builtin_basis("st0", AB)
    eps = Dfa.epsilon(AB)
    rows = {}
    for k in range(4):
        rows[f"eps k={k}"] = _definite(pol_stratum_member(eps, C, k, cfg.budget)).status
    rows["Aplus k=1"] = _definite(pol_stratum_member(Dfa.nonempty(AB), C, 1, cfg.budget)).status
    ok = all(rows[f"eps k={k}"] == "NotMember" for k in range(4)) and rows["Aplus k=1"] == "Member"
    return ok, rows


CRITERIA = [
    (1, "a*b* is outside every polynomial stratum of dd0 (k <= 3)", check_astar_bstar),
    (2, "(a(ab)*b)* is outside the Boolean strata of dd0 (k <= 2)", check_bpol_nested),
    (3, "classic level expressions equal their targets", check_classic),
    (4, "piece complements for all sequences up to length 4", check_piece_complement),
    (5, "intersection rewriting on 100 random monomial pairs per basis", check_intersection),
    (6, "oracle gate: types, word recursion and enumerated strata agree", check_oracle_gate),
    (7, "pumping properties on the parameter grid", check_pumping),
    (8, "periods of dd0, st0 and att:d", check_periods),
    (9, "strictness witnesses over dd0 up to k = 3", check_strictness),
    (10, "sentence compilation and marked concatenation round trips", check_logic),
    (11, "{eps} outside Pol_k(st0) for k <= 3, A+ inside Pol_1(st0)", check_copol),
]

LIMITS = {1: 60.0, 9: 120.0}


def run_check(number, cfg=None):
    cfg = cfg or SuiteConfig()
    _, title, fn = next(c for c in CRITERIA if c[0] == number)
    t = time.perf_counter()
    try:
        ok, detail = fn(cfg)
        status = "pass" if ok else "fail"
    except (_Inconclusive, BudgetExceeded) as exc:
        status, detail = "inconclusive", {"reason": str(exc)}
    seconds = time.perf_counter() - t
    limit = LIMITS.get(number)
    if limit is not None:
        detail = dict(detail, time_limit=limit)
        if status == "pass" and seconds >= limit:
            status = "fail"
    return CheckResult(number, title, status, seconds, detail)


def format_line(r):
    return f"[{r.status.upper():12s}] criterion {r.number:2d}: {r.title} ({r.seconds:.2f}s)"


def verify_suite(cfg=None, echo=None):
    """Run every criterion in order; ``echo`` receives each result as it finishes."""
    cfg = cfg or SuiteConfig()
    results = []
    for number, _, _ in CRITERIA:
        if cfg.only and number not in cfg.only:
            continue
        r = run_check(number, cfg)
        if echo:
            echo(r)
        results.append(r)
    return results
