"""Acceptance suite: one test per criterion, each printing a single
PASS/FAIL line with its measured figures."""
import random
import time

import pytest

from conftest import PLAIN, VISIBLY, fixture
from etlmc.automata import append_symbol, fa_product, is_empty
from etlmc.cli import run_cli
from etlmc.errors import UnknownAtBoundError
from etlmc.generators import (random_bvps, random_dfa, random_formula, random_kts,
                              random_lasso, random_nfa, random_pds, random_state_formula,
                              random_vpa)
from etlmc.logic import (SIGMA, STAR, And, Atom, Exists, Finally, Not, Or, Release, TRUE,
                         Until, formula_size, to_nnf)
from etlmc.modelcheck import HOLDS, VIOLATED, mc_branching, mc_linear
from etlmc.omega import aba_to_ba, aja_dualize, aja_to_bvps, lasso_membership
from etlmc.oracle import (bounded_backward, oracle_bounded_pds, oracle_branching_eval,
                          oracle_kts_linear, oracle_lasso_eval)
from etlmc.satcheck import SAT, UNSAT, sat_linear
from etlmc.saturation import (bpds_accepting_configs, bpds_accepts_lasso,
                              configs_automaton, prestar)
from etlmc.systems import universal_generator
from etlmc.textio import load_automata, load_formula, load_system
from etlmc.translation import (LINEAR_CONSTANT, QUADRATIC_CONSTANT, ltl_reg_to_aba,
                               ltl_vpl_to_aja)

PROPS = ["p", "q", "r"]


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[{tag}] {'PASS' if ok else 'FAIL'} {detail}")
        return ok
    return emit


def cex_is_valid(f, verdict):
    """A stackless counterexample must violate ``f`` under the oracle."""
    cex = verdict.counterexample
    return cex is None or oracle_lasso_eval(f, cex.trace) is False


def test_c1_linear_oracle_equivalence(report):
    rng = random.Random(101)
    start = time.time()
    disagree = bad_cex = definite = 0
    for i in range(500):
        lib = {f"A{j}": random_nfa(rng, PLAIN, 3, f"A{j}") for j in range(2)}
        f = random_formula(rng, PROPS, lib, 3)
        k = random_kts(rng, PLAIN, PROPS, 5)
        v = mc_linear(k, f)
        o, _ = oracle_kts_linear(k, f)
        if o is not None:
            definite += 1
            disagree += (v.status == HOLDS) != o
        if v.status == VIOLATED and not cex_is_valid(f, v):
            bad_cex += 1
    elapsed = time.time() - start
    ok = disagree == 0 and bad_cex == 0 and elapsed < 60
    report("C1", ok, f"500 LTL[NFA]/KTS instances, {definite} definite, "
                     f"{disagree} disagreements, {bad_cex} invalid counterexamples, "
                     f"{elapsed:.1f}s")
    assert ok


def test_c2_dualisation_complements(report):
    rng = random.Random(102)
    start = time.time()
    failures = pairs = 0
    for i in range(100):
        lib = {"V": random_vpa(rng, VISIBLY, 2, 2, "V"), "N": random_nfa(rng, VISIBLY, 2, "N")}
        f = random_formula(rng, PROPS[:2], lib, 3)
        a = ltl_vpl_to_aja(f, set(PROPS[:2]), VISIBLY)
        d = aja_dualize(a)
        for _ in range(10):
            w = random_lasso(rng, PROPS[:2], VISIBLY, 3, 3)
            pairs += 1
            failures += lasso_membership(a, w) == lasso_membership(d, w)
    elapsed = time.time() - start
    ok = failures == 0 and elapsed < 60
    report("C2", ok, f"{pairs} (AJA, lasso) pairs, {failures} failures, {elapsed:.1f}s")
    assert ok


def test_c3_dealternation_preserves_language(report):
    rng = random.Random(103)
    start = time.time()
    dis_ba = dis_bvps = skipped = 0
    for i in range(100):
        lib = {"A": random_nfa(rng, PLAIN, 3, "A")}
        f = random_formula(rng, PROPS[:2], lib, 3)
        a = ltl_reg_to_aba(to_nnf(f), set(PROPS[:2]), PLAIN)
        ba = aba_to_ba(a)
        w = random_lasso(rng, PROPS[:2], PLAIN, 3, 3)
        dis_ba += lasso_membership(a, w) != lasso_membership(ba, w)
    done = 0
    while done < 100:
        lib = {"V": random_vpa(rng, VISIBLY, 2, 2, "V")}
        f = random_formula(rng, PROPS[:2], lib, 2)
        a = ltl_vpl_to_aja(f, set(PROPS[:2]), VISIBLY)
        try:
            bp = aja_to_bvps(a, max_heads=20000)
        except UnknownAtBoundError:
            skipped += 1
            continue
        w = random_lasso(rng, PROPS[:2], VISIBLY, 3, 3)
        dis_bvps += lasso_membership(a, w) != bpds_accepts_lasso(bp, w)
        done += 1
    elapsed = time.time() - start
    ok = dis_ba == 0 and dis_bvps == 0 and elapsed < 120
    report("C3", ok, f"100 ABA->BA pairs ({dis_ba} disagreements), 100 AJA->BVPS pairs "
                     f"({dis_bvps} disagreements, {skipped} over budget redrawn), "
                     f"{elapsed:.1f}s")
    assert ok


def _chain(k, params):
    """(p | q) U{P1} (!q R{P2} (... p)): size grows linearly in ``k``."""
    f = Atom("p")
    for i in range(k):
        p1, p2 = params[i % len(params)], params[(i + 1) % len(params)]
        f = Until(p1, Or(Atom("p"), Atom("q")), Release(p2, Not(Atom("q")), f))
    return f


def test_c4_size_bounds(report):
    rng = random.Random(104)
    nfa = random_nfa(rng, VISIBLY, 3, "N")
    vpa = random_vpa(rng, VISIBLY, 3, 2, "V")
    reg_family, vpl_family = [], []
    for k in range(1, 40):
        reg_family.append(_chain(k, [STAR, nfa, SIGMA]))
        vpl_family.append(_chain(k, [vpa, nfa, STAR, SIGMA]))
    for _ in range(60):
        reg_family.append(random_formula(rng, PROPS, {"N": nfa}, 6, 7))
        vpl_family.append(random_formula(rng, PROPS, {"V": vpa, "N": nfa}, 6, 7))
    worst_lin = worst_quad = 0.0
    checked = 0
    violations = []
    for f in reg_family:
        n = formula_size(f)
        if not 5 <= n <= 100:
            continue
        a = ltl_reg_to_aba(to_nnf(f), set(PROPS), VISIBLY)
        checked += 1
        worst_lin = max(worst_lin, a.size / n)
        if a.size > LINEAR_CONSTANT * n:
            violations.append(("ABA", n, a.size))
    for f in vpl_family:
        n = formula_size(f)
        if not 5 <= n <= 100:
            continue
        a = ltl_vpl_to_aja(f, set(PROPS), VISIBLY)
        checked += 1
        worst_quad = max(worst_quad, a.size / (n * n))
        if a.size > QUADRATIC_CONSTANT * n * n:
            violations.append(("AJA", n, a.size))
    ok = not violations and checked >= 100
    report("C4", ok, f"{checked} formulas of size 5..100, max |ABA|/|f| = {worst_lin:.2f}, "
                     f"max |AJA|/|f|^2 = {worst_quad:.3f}, {len(violations)} violations")
    assert ok, violations[:5]


def test_c5_reqgrant_end_to_end(report):
    start = time.time()
    lib = load_automata([fixture("rngn.aut")])
    f = load_formula(fixture("reqgrant.etl"), lib)
    good = mc_linear(load_system(fixture("reqgrant.pds")), f)
    bad = mc_linear(load_system(fixture("reqgrant_mutant.pds")), f)
    elapsed = time.time() - start
    ok = (good.status == HOLDS and bad.status == VIOLATED and cex_is_valid(f, bad)
          and elapsed < 5)
    report("C5", ok, f"req/grant {good.status} (expected HOLDS), mutant {bad.status} "
                     f"(expected VIOLATED), {elapsed:.2f}s")
    assert ok


def test_c6_dfa_intersection_fixture(report):
    rng = random.Random(106)
    kts = universal_generator(PLAIN)
    start = time.time()
    disagree = nonempty = 0
    for i in range(50):
        dfas = [random_dfa(rng, PLAIN, 4, f"A{j}") for j in range(3)]
        hats = [append_symbol(a, "t^") for a in dfas]
        f = Exists(And(And(Finally(TRUE, hats[0]), Finally(TRUE, hats[1])),
                       Finally(TRUE, hats[2])))
        holds = mc_branching(kts, f).status == HOLDS
        expected = not is_empty(fa_product(fa_product(dfas[0], dfas[1]), dfas[2]))
        nonempty += expected
        disagree += holds != expected
    elapsed = time.time() - start
    ok = disagree == 0 and elapsed < 30
    report("C6", ok, f"50 DFA triples ({nonempty} with non-empty intersection), "
                     f"{disagree} disagreements, {elapsed:.1f}s")
    assert ok


def test_c7_saturation_soundness(report):
    rng = random.Random(107)
    start = time.time()
    violations = checked = 0
    for i in range(200):
        if i % 2:
            bp = random_bvps(rng, VISIBLY, 3, 2)
            acc = bpds_accepting_configs(bp)
            seen = oracle_bounded_pds(bp, 4, 60)
            starts = sorted(seen.reachable, key=repr)[:20]
            for c in oracle_bounded_pds(bp, 4, 60, starts=starts).accepting:
                checked += 1
                violations += not acc.accepts(c)
        else:
            p = random_pds(rng, PLAIN, (), 3, 2, max_rules=8)
            reach = sorted(oracle_bounded_pds(p, 4, 30).reachable, key=repr)
            targets = rng.sample(reach, min(2, len(reach)))
            pre = prestar(p, configs_automaton(p, targets))
            for c in bounded_backward(p, targets, 3):
                checked += 1
                violations += not pre.accepts(c)
    elapsed = time.time() - start
    ok = violations == 0 and elapsed < 60
    report("C7", ok, f"200 PDS/BVPS, {checked} oracle-proven configurations, "
                     f"{violations} not accepted, {elapsed:.1f}s")
    assert ok


def test_c8_nnf_preserves_semantics(report):
    rng = random.Random(108)
    disagree = definite = 0
    for i in range(200):
        if i % 2:
            al, lib = VISIBLY, {"V": random_vpa(rng, VISIBLY, 2, 2, "V")}
        else:
            al, lib = PLAIN, {"A": random_nfa(rng, PLAIN, 3, "A")}
        f = random_formula(rng, PROPS, lib, 3)
        w = random_lasso(rng, PROPS, al, 3, 3)
        x, y = oracle_lasso_eval(f, w), oracle_lasso_eval(to_nnf(f), w)
        if x is not None and y is not None:
            definite += 1
            disagree += x != y
    ok = disagree == 0
    report("C8", ok, f"200 (formula, lasso) pairs, {definite} definite, "
                     f"{disagree} disagreements")
    assert ok


def test_c9_branching_oracle_agreement(report):
    rng = random.Random(109)
    start = time.time()
    disagree = definite = 0
    for i in range(100):
        lib = {"A": random_nfa(rng, PLAIN, 3, "A"), "D": random_dfa(rng, PLAIN, 3, "D")}
        f = random_state_formula(rng, PROPS[:2], lib, 2)
        k = random_kts(rng, PLAIN, PROPS[:2], 4)
        v = mc_branching(k, f)
        o = oracle_branching_eval(f, k)
        if o is not None:
            definite += 1
            disagree += o != (v.status == HOLDS)
    elapsed = time.time() - start
    ok = disagree == 0 and elapsed < 120
    report("C9", ok, f"100 CTL*[REG]/KTS instances, {definite} definite, "
                     f"{disagree} disagreements, {elapsed:.1f}s")
    assert ok


GUARDS = [
    ["check", "--system", fixture("two_cycle.kts"), "--formula", fixture("dpda_future.etl"),
     "--automata", fixture("dpda.aut")],
    ["check", "--system", fixture("reqgrant.pds"), "--formula", fixture("dpda_future.etl"),
     "--automata", fixture("dpda.aut")],
    ["sat", "--formula", fixture("dpda_future.etl"), "--automata", fixture("dpda.aut")],
    ["check", "--system", fixture("two_cycle.kts"), "--formula", fixture("pda_exists.etl"),
     "--automata", fixture("pda.aut")],
    ["check", "--system", fixture("counter.pds"), "--formula", fixture("reqgrant.etl"),
     "--automata", fixture("rngn.aut")],
    ["check", "--system", fixture("counter.pds"), "--formula",
     fixture("reqgrant_branching.etl"), "--automata", fixture("rngn.aut")],
]


def test_c10_undecidability_guards(report, capsys):
    results = []
    for argv in GUARDS:
        code = run_cli(argv)
        err = capsys.readouterr().err
        results.append(code == 3 and "undecidable" in err)
    ok = all(results)
    report("C10", ok, f"{sum(results)}/{len(GUARDS)} guard fixtures exit 3 with a "
                      f"citing diagnostic")
    assert ok


def test_c11_witness_validity(report):
    rng = random.Random(111)
    witnesses = counterexamples = invalid = 0
    for i in range(150):
        if i % 2:
            al, lib = VISIBLY, {"V": random_vpa(rng, VISIBLY, 2, 2, "V")}
        else:
            al, lib = PLAIN, {"A": random_nfa(rng, PLAIN, 3, "A")}
        f = random_formula(rng, PROPS[:2], lib, 2)
        try:
            r = sat_linear(f, al, budget=20000)
        except UnknownAtBoundError:
            continue
        if r.status == SAT and r.witness is not None:
            witnesses += 1
            invalid += oracle_lasso_eval(f, r.witness) is not True
        if r.status == UNSAT:
            # the negation then holds on every system
            k = random_kts(rng, al, PROPS[:2], 3)
            invalid += mc_linear(k, Not(f), budget=20000).status != HOLDS
    for i in range(150):
        if i % 3 == 0:
            lib = {"A": random_nfa(rng, PLAIN, 3, "A")}
            sys_ = random_kts(rng, PLAIN, PROPS[:2], 4)
        else:
            lib = {"V": random_vpa(rng, VISIBLY, 2, 2, "V"), "N": random_nfa(rng, VISIBLY, 2, "N")}
            sys_ = random_pds(rng, VISIBLY, PROPS[:2], 3, 2, visibly=True, max_rules=8)
        f = random_formula(rng, PROPS[:2], lib, 2)
        try:
            v = mc_linear(sys_, f, budget=20000)
        except UnknownAtBoundError:
            continue
        if v.status == VIOLATED and v.counterexample is not None:
            counterexamples += 1
            invalid += not cex_is_valid(f, v)
    ok = invalid == 0 and witnesses > 0 and counterexamples > 0
    report("C11", ok, f"{witnesses} SAT witnesses and {counterexamples} counterexamples "
                      f"re-validated, {invalid} invalid")
    assert ok

