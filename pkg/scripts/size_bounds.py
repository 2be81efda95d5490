"""Tabulate alternating-automaton sizes against formula size.

For a chain family of growing formulas prints |phi|, the ABA size and the AJA
size with the ratios |ABA|/|phi| and |AJA|/|phi|^2.

    python scripts/size_bounds.py --max-k 30
"""
import argparse
import random

from etlmc.automata import Alphabet
from etlmc.generators import random_nfa, random_vpa
from etlmc.logic import SIGMA, STAR, Atom, Not, Or, Release, Until, formula_size, to_nnf
from etlmc.translation import ltl_reg_to_aba, ltl_vpl_to_aja

ALPHABET = Alphabet.visibly({"c"}, {"i"}, {"r"})
PROPS = {"p", "q"}


def chain(k, params):
    f = Atom("p")
    for i in range(k):
        p1, p2 = params[i % len(params)], params[(i + 1) % len(params)]
        f = Until(p1, Or(Atom("p"), Atom("q")), Release(p2, Not(Atom("q")), f))
    return f


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-k", type=int, default=20)
    ap.add_argument("--seed", type=int, default=104)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    nfa = random_nfa(rng, ALPHABET, 3, "N")
    vpa = random_vpa(rng, ALPHABET, 3, 2, "V")
    print(f"{'k':>3} {'|phi|':>6} {'|ABA|':>6} {'ABA/n':>6} {'|phi|':>6} {'|AJA|':>6} {'AJA/n^2':>8}")
    for k in range(1, args.max_k + 1):
        f = chain(k, [STAR, nfa, SIGMA])
        g = chain(k, [vpa, nfa, STAR, SIGMA])
        n, m = formula_size(f), formula_size(g)
        aba = ltl_reg_to_aba(to_nnf(f), PROPS, ALPHABET)
        aja = ltl_vpl_to_aja(g, PROPS, ALPHABET)
        print(f"{k:>3} {n:>6} {aba.size:>6} {aba.size / n:>6.2f} {m:>6} {aja.size:>6} "
              f"{aja.size / (m * m):>8.3f}")


if __name__ == "__main__":
    main()
