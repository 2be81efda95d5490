"""End-to-end run of the request/grant server and its mutant.

Checks ``work U{rngn} complete`` on both fixture systems, prints the verdicts,
the complexity class and, for the mutant, the size of the violation
certificate.
"""
from pathlib import Path

from etlmc.logic import classify_fragment
from etlmc.modelcheck import complexity_of, mc_linear, system_kind
from etlmc.textio import load_automata, load_formula, load_system

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    library = load_automata([str(FIXTURES / "rngn.aut")])
    f = load_formula(str(FIXTURES / "reqgrant.etl"), library)
    frag = classify_fragment(f)
    for name in ("reqgrant.pds", "reqgrant_mutant.pds"):
        sys = load_system(str(FIXTURES / name))
        v = mc_linear(sys, f, certificate=True)
        kind = system_kind(sys)
        print(f"{name}: {v.status}  ({frag} vs {kind}: {complexity_of(frag, kind)})")
        print(f"  stats: {v.stats}")
        if v.counterexample is not None:
            print("  counterexample:")
            for line in v.counterexample.describe().splitlines():
                print("    " + line)


if __name__ == "__main__":
    main()
