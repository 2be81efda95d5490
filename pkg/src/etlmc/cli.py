"""Command-line interface: ``etlmc check|sat|translate|classify|certify|validate``.

The first line on stdout is always the verdict (or the requested artefact's
headline); exit codes are 0 holds/SAT/ok, 1 violated/UNSAT, 2 unknown or a
usage, format or validation error, 3 an undecidable fragment.
"""
from __future__ import annotations

import argparse
import json
import sys

from .automata import vpa_validate
from .errors import EtlmcError, UndecidableFragmentError, UnknownAtBoundError
from .logic import classify_fragment, has_quantifier, params, to_nnf, SIGMA, STAR
from .modelcheck import (HOLDS, UNKNOWN, VIOLATED, complexity_of, formula_alphabet,
                         mc_branching, mc_linear, system_kind)
from .omega import all_letters
from .satcheck import SAT, UNSAT, lasso_to_kts, sat_linear
from .systems import KTS, validate_system
from .textio import (dump_alt, dump_config_nfa, dump_kts, load_automata, load_formula,
                     load_system)
from .translation import ltl_reg_to_aba, ltl_vpl_to_aja, size_report

__all__ = ["main", "run_cli", "verdict_json", "JSON_FIELDS"]

EXIT = {HOLDS: 0, VIOLATED: 1, UNKNOWN: 2, SAT: 0, UNSAT: 1}

# schema of the --json document printed after the verdict line
JSON_FIELDS = {
    "verdict": str,          # HOLDS | VIOLATED | UNKNOWN | SAT | UNSAT
    "fragment": str,         # e.g. "CTL*[VPA]"
    "system": (str, type(None)),   # KTS | VPS | PDS, null for sat
    "complexity": str,       # complexity class of the instance
    "lasso": (dict, type(None)),   # {"stem": [[props, action], ...], "loop": [...]}
    "stats": dict,
}


def _lasso_json(w):
    if w is None:
        return None
    enc = lambda xs: [[sorted(p), a] for p, a in xs]
    return {"stem": enc(w.stem), "loop": enc(w.loop)}


def verdict_json(verdict, fragment, system, complexity, lasso, stats):
    return {"verdict": verdict, "fragment": fragment, "system": system,
            "complexity": complexity, "lasso": _lasso_json(lasso), "stats": stats}


def _show_lasso(w):
    def one(letter):
        return f"({{{','.join(sorted(letter[0]))}}},{letter[1]})"
    return ("stem: " + " ".join(one(x) for x in w.stem),
            "loop: " + " ".join(one(x) for x in w.loop))


def _validated(library, system=None):
    problems = []
    for name, a in sorted(library.items()):
        problems += [f"automaton {name}: {p}" for p in vpa_validate(a)
                     if not p.startswith("kind ")]
    if system is not None:
        problems += validate_system(system)
    return problems


def _oracle_line(system, f):
    from .oracle import oracle_branching_eval, oracle_kts_linear, oracle_pds_linear
    if isinstance(system, KTS):
        if has_quantifier(f):
            v = oracle_branching_eval(f, system)
        else:
            v, _ = oracle_kts_linear(system, f)
    else:
        if has_quantifier(f):
            return "oracle: n/a (branching formula on a pushdown system)"
        v, _ = oracle_pds_linear(system, f)
    text = {True: HOLDS, False: VIOLATED, None: UNKNOWN}[v]
    return f"oracle: {text}"


def cmd_check(args):
    library = load_automata(args.automata)
    system = load_system(args.system)
    f = load_formula(args.formula, library)
    problems = _validated(library, system)
    if problems:
        raise EtlmcError("validation failed: " + "; ".join(problems))
    frag = classify_fragment(f)
    kind = system_kind(system)
    try:
        if has_quantifier(f):
            v = mc_branching(system, f, budget=args.budget, jobs=args.jobs)
        else:
            v = mc_linear(system, f, inclusive=args.inclusive, budget=args.budget)
        status, cex, stats = v.status, v.counterexample, v.stats
    except UnknownAtBoundError as e:
        status, cex, stats = UNKNOWN, None, {"reason": str(e)}
    print(status)
    complexity = complexity_of(frag, kind)
    if args.json:
        print(json.dumps(verdict_json(status, str(frag), kind, complexity,
                                      cex.trace if cex else None, stats), indent=2))
    else:
        if args.report:
            print(f"class: {frag} vs {kind}: {complexity}")
            for k, val in stats.items():
                print(f"{k}: {val}")
        if cex is not None:
            print("counterexample:")
            for line in _show_lasso(cex.trace):
                print("  " + line)
            if args.report and cex.path:
                print(cex.describe())
    if args.debug_oracle:
        print(_oracle_line(system, f))
    return EXIT[status]


def cmd_sat(args):
    library = load_automata(args.automata)
    f = load_formula(args.formula, library, purpose="sat")
    problems = _validated(library)
    if problems:
        raise EtlmcError("validation failed: " + "; ".join(problems))
    try:
        r = sat_linear(f, inclusive=args.inclusive, budget=args.budget)
    except UnknownAtBoundError as e:
        print(UNKNOWN)
        print(f"reason: {e}")
        return 2
    print(r.status)
    if args.json:
        print(json.dumps(verdict_json(r.status, r.fragment, None, r.complexity,
                                      r.witness, r.stats), indent=2))
    else:
        if args.report:
            print(f"class: {r.fragment}: {r.complexity}")
        if r.witness is not None:
            print("witness:")
            for line in _show_lasso(r.witness):
                print("  " + line)
        elif r.status == SAT:
            print("witness: accepted initial head (see certificate)")
    if args.debug_oracle and r.witness is not None:
        from .oracle import oracle_lasso_eval
        print(f"oracle: {oracle_lasso_eval(f, r.witness)}")
    if args.emit_model and r.witness is not None:
        with open(args.emit_model, "w", encoding="utf-8") as fh:
            fh.write(dump_kts(lasso_to_kts(r.witness, r.alphabet)))
    return EXIT[r.status]


def _formula_context(f, args):
    if args.system:
        system = load_system(args.system)
        alphabet = formula_alphabet(system, f)
        props = set(system.props) if isinstance(system, KTS) else set()
    else:
        from .satcheck import _alphabet_of
        alphabet, props = _alphabet_of(f, None), set()
    return alphabet, props


def cmd_translate(args):
    library = load_automata(args.automata)
    f = load_formula(args.formula, library)
    if has_quantifier(f):
        raise EtlmcError("translate expects a formula without path quantifiers")
    alphabet, props = _formula_context(f, args)
    user = [p for p in params(f) if p is not STAR and p is not SIGMA]
    regular = all(p.kind in ("DFA", "NFA") for p in user)
    if regular and not args.aja:
        aut = ltl_reg_to_aba(to_nnf(f), props, alphabet, inclusive=args.inclusive)
        bound = "linear"
    else:
        aut = ltl_vpl_to_aja(f, props, alphabet)
        bound = "quadratic"
    letters = all_letters(aut.props, aut.alphabet)
    print(size_report(aut, f, bound))
    print(dump_alt(aut, letters), end="")
    return 0


def cmd_classify(args):
    library = load_automata(args.automata)
    f = load_formula(args.formula, library)
    frag = classify_fragment(f)
    print(frag)
    print(f"parameters: {frag.languages}")
    for kind in ("KTS", "VPS", "PDS"):
        print(f"{frag} vs {kind}: {complexity_of(frag, kind)}")
    return 0


def cmd_certify(args):
    library = load_automata(args.automata)
    system = load_system(args.system)
    f = load_formula(args.formula, library)
    if has_quantifier(f):
        raise EtlmcError("certify expects a formula without path quantifiers")
    v = mc_linear(system, f, certificate=True, budget=args.budget)
    print(v.status)
    text = dump_config_nfa(v.certificate, name="violating")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT[v.status]


def cmd_validate(args):
    library = load_automata(args.automata)
    system = load_system(args.system) if args.system else None
    problems = _validated(library, system)
    for name, a in sorted(library.items()):
        problems += [f"automaton {name}: {p}" for p in vpa_validate(a) if p.startswith("kind ")]
    if problems:
        print("INVALID")
        for p in problems:
            print(f"  {p}")
        return 2
    print("OK")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="etlmc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, system=False, system_required=False):
        p.add_argument("--automata", nargs="*", default=[], help="automaton files")
        if system:
            p.add_argument("--system", required=system_required, help="KTS or PDS file")
        p.add_argument("--formula", required=True, help=".etl file or formula text")
        p.add_argument("--budget", type=int, default=200_000,
                       help="max heads explored when dealternating (default 200000)")
        p.add_argument("--inclusive", action="store_true",
                       help="parameters also read the action at the witness position")

    p = sub.add_parser("check", help="model check a system against a formula")
    common(p, system=True, system_required=True)
    p.add_argument("--report", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--debug-oracle", action="store_true")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("sat", help="satisfiability of a linear formula")
    common(p)
    p.add_argument("--emit-model", metavar="OUT.kts")
    p.add_argument("--report", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--debug-oracle", action="store_true")
    p.set_defaults(run=cmd_sat)

    p = sub.add_parser("translate", help="dump the ABA/AJA of a formula")
    common(p, system=True)
    p.add_argument("--aja", action="store_true", help="force the AJA construction")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("classify", help="fragment and complexity of a formula")
    p.add_argument("--automata", nargs="*", default=[])
    p.add_argument("--formula", required=True)
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("certify", help="dump the saturation certificate")
    common(p, system=True, system_required=True)
    p.add_argument("--out")
    p.set_defaults(run=cmd_certify)

    p = sub.add_parser("validate", help="check automaton and system files")
    p.add_argument("--automata", nargs="*", default=[])
    p.add_argument("--system")
    p.set_defaults(run=cmd_validate)
    return ap


def run_cli(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.run(args)
    except UndecidableFragmentError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (EtlmcError, ValueError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
