"""Satisfiability of LTL[REG] and LTL[VPL]."""
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import PLAIN, VISIBLY, make_anbn, make_even
from etlmc.automata import FiniteAutomaton, Rule
from etlmc.errors import PreconditionError, UndecidableFragmentError, UnknownAtBoundError
from etlmc.generators import random_formula, random_kts, random_nfa, random_vpa
from etlmc.logic import Not, parse_formula, to_nnf
from etlmc.modelcheck import HOLDS, mc_linear
from etlmc.oracle import oracle_lasso_eval
from etlmc.satcheck import SAT, UNSAT, lasso_to_kts, sat_linear
from etlmc.textio import load_automata
from conftest import fixture

seeds = st.integers(0, 10**6)
PROPS = ["p", "q"]


def ab_exactly():
    rules = [Rule("0", "a", "1"), Rule("1", "b", "2")]
    return FiniteAutomaton("ab", "DFA", PLAIN, frozenset({"0", "1", "2"}), "0",
                           frozenset({"2"}), tuple(rules))


def test_contradiction_is_unsat():
    assert sat_linear(parse_formula("p & !p")).status == UNSAT
    assert sat_linear(parse_formula("G p & F !p")).status == UNSAT


def test_exact_word_parameter():
    f = parse_formula("F{ab} true", {"ab": ab_exactly()})
    r = sat_linear(f)
    assert r.status == SAT
    assert [a for _, a in (r.witness[0], r.witness[1])] == ["a", "b"]
    assert oracle_lasso_eval(f, r.witness) is True


def test_even_positions_witness():
    f = parse_formula("G{even} p", {"even": make_even()})
    r = sat_linear(f)
    assert r.status == SAT
    assert oracle_lasso_eval(f, r.witness) is True
    assert all("p" in r.witness[i][0] for i in range(0, 20, 2))


@given(seeds)
def test_regular_witnesses_are_genuine(seed):
    rng = random.Random(seed)
    f = random_formula(rng, PROPS, {"A": random_nfa(rng, PLAIN, 3, "A")}, 3)
    r = sat_linear(f)
    if r.status == SAT:
        assert oracle_lasso_eval(f, r.witness) is True


@settings(max_examples=100)
@given(seeds)
def test_negation_normal_form_preserves_satisfiability(seed):
    rng = random.Random(seed)
    f = random_formula(rng, PROPS, {"A": random_nfa(rng, PLAIN, 3, "A")}, 3)
    assert sat_linear(f).status == sat_linear(to_nnf(f)).status


@given(seeds)
def test_unsat_means_negation_is_valid(seed):
    rng = random.Random(seed)
    f = random_formula(rng, PROPS, {"A": random_nfa(rng, PLAIN, 2, "A")}, 2)
    if sat_linear(f, alphabet=PLAIN).status != UNSAT:
        return
    for _ in range(10):
        k = random_kts(rng, PLAIN, PROPS, 3)
        assert mc_linear(k, Not(f)).status == HOLDS


@given(seeds)
def test_visibly_witnesses_are_genuine(seed):
    rng = random.Random(seed)
    f = random_formula(rng, ["p"], {"V": random_vpa(rng, VISIBLY, 2, 2, "V")}, 2)
    try:
        r = sat_linear(f, budget=20000)
    except UnknownAtBoundError:
        return
    if r.witness is not None:
        assert oracle_lasso_eval(f, r.witness) is not False
    if r.status == UNSAT:
        assert r.witness is None


def test_visibly_parameter_examples():
    lib = {"anbn": make_anbn()}
    assert sat_linear(parse_formula("F{anbn} p", lib)).status == SAT
    assert sat_linear(parse_formula("F{anbn} p & G !p", lib)).status == UNSAT
    with pytest.raises(PreconditionError):
        sat_linear(parse_formula("F{anbn} p", lib), inclusive=True)


def test_undecidable_parameters_rejected():
    lib = load_automata([fixture("dpda.aut")])
    with pytest.raises(UndecidableFragmentError):
        sat_linear(parse_formula("F{anbn} p", lib))
    with pytest.raises(PreconditionError):
        sat_linear(parse_formula("E F p"))


def test_witness_as_model():
    f = parse_formula("G{even} p", {"even": make_even()})
    r = sat_linear(f)
    k = lasso_to_kts(r.witness, r.alphabet)
    assert len(k.states) == len(r.witness)
    assert mc_linear(k, f).status == HOLDS
