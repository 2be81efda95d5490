"""Cross-validate the model checker against the exhaustive-lasso oracles.

Linear mode compares mc_linear on random KTS with the lasso oracle and
re-validates every counterexample; branching mode compares mc_branching with
the branching oracle.  Prints one summary line per mode.

    python scripts/cross_validate.py --n 500 --seed 1 --mode both
"""
import argparse
import random
import time

from etlmc.automata import Alphabet
from etlmc.generators import random_formula, random_kts, random_nfa, random_state_formula
from etlmc.logic import to_str
from etlmc.modelcheck import HOLDS, VIOLATED, mc_branching, mc_linear
from etlmc.oracle import oracle_branching_eval, oracle_kts_linear, oracle_lasso_eval

ALPHABET = Alphabet.plain({"a", "b"})
PROPS = ["p", "q", "r"]


def linear(rng, n, verbose):
    definite = bad = 0
    for i in range(n):
        lib = {f"A{j}": random_nfa(rng, ALPHABET, 3, f"A{j}") for j in range(2)}
        f = random_formula(rng, PROPS, lib, 3)
        k = random_kts(rng, ALPHABET, PROPS, 5)
        v = mc_linear(k, f)
        o, _ = oracle_kts_linear(k, f)
        wrong = o is False and v.status != VIOLATED
        if v.status == VIOLATED and oracle_lasso_eval(f, v.counterexample.trace) is not False:
            wrong = True
        definite += o is not None
        bad += wrong
        if wrong and verbose:
            print(f"  instance {i}: {to_str(f)} checker={v.status} oracle={o}")
    return definite, bad


def branching(rng, n, verbose):
    definite = bad = 0
    for i in range(n):
        lib = {"A": random_nfa(rng, ALPHABET, 3, "A")}
        f = random_state_formula(rng, PROPS[:2], lib, 2)
        k = random_kts(rng, ALPHABET, PROPS[:2], 4)
        v = mc_branching(k, f)
        o = oracle_branching_eval(f, k)
        if o is None:
            continue
        definite += 1
        if o != (v.status == HOLDS):
            bad += 1
            if verbose:
                print(f"  instance {i}: {to_str(f)} checker={v.status} oracle={o}")
    return definite, bad


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--mode", choices=["linear", "branching", "both"], default="both")
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    modes = ["linear", "branching"] if args.mode == "both" else [args.mode]
    failed = False
    for mode in modes:
        t = time.time()
        definite, bad = (linear if mode == "linear" else branching)(rng, args.n, args.verbose)
        print(f"{mode}: {args.n} instances, {definite} definite, {bad} disagreements, "
              f"{time.time() - t:.1f}s")
        failed |= bad > 0
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
