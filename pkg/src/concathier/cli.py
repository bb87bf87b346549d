"""Command-line front end.

Exit codes: 0 for a definite answer, 2 when a budget ran out before one
was reached, 1 on errors (bad flags included).
"""

import argparse
import json
import sys

from .classes import (
    check_properties,
    non_membership_witness,
    period,
    resolve_basis,
    upper_set,
)
from .errors import ConcatHierError
from .hierarchy import classic_expressions, eval_level, piece_complement, strictness_witnesses
from .logic import (
    compile_sentence,
    evaluate,
    classify,
    parse_formula,
    round_trip_check,
    to_text,
)
from .regular import Alphabet, Dfa
from .strata import (
    DEFAULT_BUDGET,
    bpol_stratum_member,
    bpol_stratum_separable,
    pol_stratum_member,
    pol_stratum_separable,
    word_leq_k,
)
from .suite import SuiteConfig, format_line, verify_suite

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _natural(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {n}")
    return n


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--basis", default="dd0",
                        help="st0, dd0, at, wat, att:d or a class JSON file")
    common.add_argument("--alphabet", default="ab", help="letters, one character each")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                        help="cap on the number of types built per query")
    common.add_argument("--max-len", type=_natural, default=6, dest="max_len",
                        help="word length for bounded searches and checks")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=20240607)

    p = _Parser(prog="concathier", description="Concatenation hierarchies of regular languages.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    c = sub.add_parser("class", parents=[common], help="describe a basis class")
    c.add_argument("--word", help="also print the least member containing this word")
    c.add_argument("--regex", help="decide membership of this language in the class")

    c = sub.add_parser("leq", parents=[common], help="compare two words")
    c.add_argument("--w", required=True)
    c.add_argument("--w2", required=True)
    c.add_argument("--k", type=_natural, help="stratum; omitted means the class preorder")

    sub.add_parser("period", parents=[common], help="period of the class monoid")

    c = sub.add_parser("stratum", parents=[common], help="stratum membership")
    c.add_argument("mode", choices=["member", "bpol-member"])
    c.add_argument("--regex", required=True)
    c.add_argument("--k", type=_natural)
    c.add_argument("--kmax", type=_natural)
    c.add_argument("--engine", choices=["auto", "local", "monoid"], default="auto")

    c = sub.add_parser("separate", parents=[common], help="stratum separation")
    c.add_argument("--regex", required=True)
    c.add_argument("--regex2", required=True)
    c.add_argument("--k", type=_natural, required=True)
    c.add_argument("--bool", action="store_true", help="use the Boolean closure")
    c.add_argument("--engine", choices=["auto", "local", "monoid"], default="auto")

    c = sub.add_parser("witness", parents=[common], help="witness words")
    c.add_argument("kind", choices=["strictness", "nonmember"])
    c.add_argument("--kmax", type=_natural, default=2)
    c.add_argument("--regex")

    c = sub.add_parser("compile-formula", parents=[common], help="sentence to automaton")
    c.add_argument("--formula", required=True)
    c.add_argument("--check-maxlen", type=_natural, dest="check_maxlen")

    c = sub.add_parser("eval-formula", parents=[common], help="truth of a sentence on a word")
    c.add_argument("--formula", required=True)
    c.add_argument("--word", required=True)

    c = sub.add_parser("piece-complement", parents=[common],
                       help="complement of A*a1A*...anA* as a polynomial")
    c.add_argument("--letters", required=True)

    sub.add_parser("classic", parents=[common], aliases=["classic-expressions"],
                   help="the classic level expressions")

    c = sub.add_parser("verify-suite", parents=[common], help="run the acceptance checks")
    c.add_argument("--only", help="comma-separated criterion numbers")
    return p


# ---------------------------------------------------------------------------


def _setup(args):
    A = Alphabet(args.alphabet)
    C = resolve_basis(args.basis, A)
    return A, C


def _regex(text, A, flag="--regex"):
    try:
        return Dfa.from_regex(text, A)
    except ConcatHierError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _word(text, A, flag):
    bad = [c for c in text if c not in A]
    if bad:
        raise UsageError(f"{flag}: letter {bad[0]!r} not in the alphabet")
    return text


class Output:
    def __init__(self, as_json, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def emit(self, payload, text):
        if self.as_json:
            self.stream.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
        else:
            self.stream.write(text.rstrip("\n") + "\n")


def _check_witness(C, k, pair, left, right, symmetric, budget):
    """Re-verify a witness pair before printing it."""
    w1, w2 = pair
    ok = w1 in left and w2 in right and word_leq_k(C, k, w1, w2, budget=budget)
    if symmetric:
        ok = ok and word_leq_k(C, k, w2, w1, budget=budget)
    if not ok:
        raise ConcatHierError(f"internal check failed for witness {pair!r}")


def cmd_class(args, out):
    A, C = _setup(args)
    props = check_properties(C)
    payload = {"name": C.name, "alphabet": list(A.letters), "properties": props}
    lines = [f"class {C.name} over {''.join(A.letters)}",
             "properties: " + ", ".join(k for k, v in sorted(props.items()) if v)]
    try:
        payload["members"] = len(C.members)
        lines.append(f"members: {len(C.members)}")
    except ConcatHierError as exc:
        payload["members"] = None
        lines.append(f"members: not listed ({exc})")
    if props["quotienting"]:
        payload["period"] = period(C)
        lines.append(f"period: {payload['period']}")
    if args.word is not None:
        w = _word(args.word, A, "--word")
        up = upper_set(C, w)
        payload["upper_set"] = up.to_json()
        lines.append(f"least member containing {w!r}: {up.n_states} states, "
                     f"shortest word {up.shortest_word()!r}")
    if args.regex is not None:
        L = _regex(args.regex, A)
        pair = non_membership_witness(C, L)
        payload["member"] = pair is None
        payload["witness"] = list(pair) if pair else None
        lines.append("member" if pair is None else f"not a member; witness {pair}")
    out.emit(payload, "\n".join(lines))
    return EXIT_OK


def cmd_leq(args, out):
    A, C = _setup(args)
    w1, w2 = _word(args.w, A, "--w"), _word(args.w2, A, "--w2")
    if args.k is None:
        res = C.leq(w1, w2)
        rel = f"<=_{C.name}"
    else:
        res = word_leq_k(C, args.k, w1, w2, budget=args.budget)
        rel = f"<=_{args.k}"
    out.emit({"w": w1, "w2": w2, "k": args.k, "leq": res},
             f"{w1!r} {rel} {w2!r}: {str(res).lower()}")
    return EXIT_OK


def cmd_period(args, out):
    A, C = _setup(args)
    p = period(C)
    out.emit({"basis": C.name, "period": p}, str(p))
    return EXIT_OK


def _levels(args):
    if args.k is not None and args.kmax is not None:
        raise UsageError("--k and --kmax are exclusive")
    if args.k is None and args.kmax is None:
        raise UsageError("--k or --kmax is required")
    return [args.k] if args.k is not None else list(range(args.kmax + 1))


def _verdict_line(v):
    line = f"k={v.k}: {v.status}"
    if v.witness is not None:
        line += f"  witness {v.witness[0]!r} -> {v.witness[1]!r}"
    if v.reason:
        line += f"  ({v.reason})"
    return line


def cmd_stratum(args, out):
    A, C = _setup(args)
    L = _regex(args.regex, A)
    boolean = args.mode == "bpol-member"
    fn = bpol_stratum_member if boolean else pol_stratum_member
    verdicts = []
    for k in _levels(args):
        v = fn(L, C, k, args.budget, args.max_len, args.engine)
        if v.witness is not None:
            _check_witness(C, k, v.witness, L, ~L, boolean, args.budget)
        verdicts.append(v)
        # strata grow with k, so a sweep can stop at the first decisive answer
        if args.kmax is not None and v.status in ("Member", "Inconclusive"):
            break
    payload = verdicts[0].to_json() if len(verdicts) == 1 else [v.to_json() for v in verdicts]
    out.emit(payload, "\n".join(_verdict_line(v) for v in verdicts))
    return EXIT_INCONCLUSIVE if any(not v.definite for v in verdicts) else EXIT_OK


def cmd_separate(args, out):
    A, C = _setup(args)
    L1 = _regex(args.regex, A)
    L2 = _regex(args.regex2, A, "--regex2")
    fn = bpol_stratum_separable if args.bool else pol_stratum_separable
    v = fn(L1, L2, C, args.k, args.budget, args.max_len, args.engine)
    if v.witness is not None:
        _check_witness(C, args.k, v.witness, L1, L2, args.bool, args.budget)
    if v.separator is not None:
        if not (L1.issubset(v.separator) and (v.separator & L2).is_empty()):
            raise ConcatHierError("internal check failed for the separator")
    text = _verdict_line(v)
    if v.separator is not None:
        text += f"\nseparator: {v.separator.n_states} states"
    out.emit(v.to_json(), text)
    return EXIT_OK if v.definite else EXIT_INCONCLUSIVE


def cmd_witness(args, out):
    A, C = _setup(args)
    if args.kind == "nonmember":
        if args.regex is None:
            raise UsageError("--regex is required for nonmember witnesses")
        L = _regex(args.regex, A)
        pair = non_membership_witness(C, L)
        if pair is not None and not (pair[0] in L and pair[1] not in L and C.leq(*pair)):
            raise ConcatHierError("internal check failed for the witness")
        out.emit({"member": pair is None, "witness": list(pair) if pair else None},
                 "member" if pair is None else f"witness {pair[0]!r} -> {pair[1]!r}")
        return EXIT_OK
    bundle = strictness_witnesses(C, args.kmax, args.budget)
    rows = [
        {"k": r.k, "u": r.u, "v": r.v, "u_in_L": r.u_in_L, "v_in_L": r.v_in_L,
         "in_V_plus": r.u_in_Vplus and r.v_in_Vplus, "leq": r.leq, "ok": r.ok}
        for r in bundle.rows
    ]
    lines = [f"basis {bundle.basis}{' plus {eps}' if bundle.augmented else ''}, "
             f"period {bundle.period}"]
    lines += [f"k={r['k']}: |u|={len(r['u'])} |v|={len(r['v'])} ok={r['ok']}" for r in rows]
    out.emit({"basis": bundle.basis, "augmented": bundle.augmented,
              "period": bundle.period, "rows": rows, "ok": bundle.ok}, "\n".join(lines))
    return EXIT_OK if bundle.ok else EXIT_ERROR


def cmd_compile(args, out):
    A, C = _setup(args)
    f = parse_formula(args.formula, C)
    dfa, claim = compile_sentence(f, C, budget=args.budget)
    cls = classify(f)
    payload = {"formula": to_text(f), "class": str(cls), "claim": str(claim),
               "dfa": dfa.to_json()}
    lines = [f"formula: {to_text(f)}", f"class: {cls}", f"level claim: {claim}",
             f"automaton: {dfa.n_states} states"]
    if args.check_maxlen is not None:
        report = round_trip_check(f, C, maxlen=args.check_maxlen, budget=args.budget)
        payload["check"] = {key: report[key] for key in ("agree", "mismatches", "strata")}
        lines.append(f"agrees on words up to length {args.check_maxlen}: {report['agree']}")
        if report["strata"]:
            lines.append("stratum checks: " + ", ".join(
                f"k={k} {s}" for k, s in sorted(report["strata"].items())))
        if not report["agree"]:
            out.emit(payload, "\n".join(lines))
            return EXIT_ERROR
    out.emit(payload, "\n".join(lines))
    return EXIT_OK


def cmd_eval(args, out):
    A, C = _setup(args)
    f = parse_formula(args.formula, C)
    w = _word(args.word, A, "--word")
    res = evaluate(f, w)
    out.emit({"formula": to_text(f), "word": w, "value": res}, str(res).lower())
    return EXIT_OK


def cmd_piece(args, out):
    A = Alphabet(args.alphabet)
    letters = _word(args.letters, A, "--letters")
    poly = piece_complement(list(letters), A)
    out.emit({"letters": letters, "monomials": len(poly), "degree": poly.degree,
              "expression": poly.describe()}, poly.describe())
    return EXIT_OK


def cmd_classic(args, out):
    A = Alphabet(args.alphabet)
    rows = {}
    for name, (expr, target) in classic_expressions(A).items():
        rows[name] = {"level": str(expr.level), "equal": eval_level(expr) == target}
    out.emit(rows, "\n".join(f"{n}: level {r['level']}, equal to target: {r['equal']}"
                             for n, r in rows.items()))
    return EXIT_OK if all(r["equal"] for r in rows.values()) else EXIT_ERROR


def cmd_suite(args, out):
    only = ()
    if args.only:
        try:
            only = tuple(int(x) for x in args.only.split(","))
        except ValueError:
            raise UsageError(f"--only: bad list {args.only!r}") from None
    cfg = SuiteConfig(budget=args.budget, seed=args.seed, only=only)
    echo = None if args.json else (lambda r: out.emit(None, format_line(r)))
    results = verify_suite(cfg, echo=echo)
    if args.json:
        out.emit([r.to_json() for r in results], "")
    statuses = {r.status for r in results}
    if "fail" in statuses:
        return EXIT_ERROR
    return EXIT_INCONCLUSIVE if "inconclusive" in statuses else EXIT_OK


COMMANDS = {
    "class": cmd_class,
    "leq": cmd_leq,
    "period": cmd_period,
    "stratum": cmd_stratum,
    "separate": cmd_separate,
    "witness": cmd_witness,
    "compile-formula": cmd_compile,
    "eval-formula": cmd_eval,
    "piece-complement": cmd_piece,
    "classic": cmd_classic,
    "classic-expressions": cmd_classic,
    "verify-suite": cmd_suite,
}


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return exc.code or 0
    out = Output(args.json, stdout)
    try:
        return COMMANDS[args.verb](args, out)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
    except (ConcatHierError, KeyError, ValueError, OSError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
