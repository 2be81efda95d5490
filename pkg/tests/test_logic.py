"""Formula syntax, printing, negation normal form and fragment classification."""
import random

import pytest
from hypothesis import given, strategies as st

from conftest import PLAIN, VISIBLY, fixture, make_even, make_rngn
from etlmc.errors import FormulaSyntaxError, UndecidableFragmentError, UnresolvedAutomatonError
from etlmc.generators import random_formula, random_nfa, random_state_formula, random_vpa
from etlmc.logic import (SIGMA, STAR, TRUE, And, Atom, Exists, Not, Or, Release, Until,
                         atoms_of, classify_fragment, formula_size, has_quantifier, is_nnf,
                         parse_formula, params, to_nnf, to_str)
from etlmc.textio import load_automata

seeds = st.integers(0, 10**6)


def library(seed):
    rng = random.Random(seed)
    return {"N": random_nfa(rng, VISIBLY, 2, "N"), "V": random_vpa(rng, VISIBLY, 2, 2, "V")}


@given(seeds)
def test_print_parse_roundtrip(seed):
    lib = library(seed)
    f = random_formula(random.Random(seed), ["p", "q"], lib, 4, 5)
    assert parse_formula(to_str(f), lib) == f


@given(seeds)
def test_state_formula_roundtrip(seed):
    lib = library(seed)
    f = random_state_formula(random.Random(seed), ["p", "q"], lib, 2)
    assert parse_formula(to_str(f), lib) == f


@given(seeds)
def test_nnf_shape_and_idempotence(seed):
    lib = library(seed)
    f = random_state_formula(random.Random(seed), ["p", "q"], lib, 2)
    g = to_nnf(f)
    assert is_nnf(g)
    assert to_nnf(g) == g
    assert atoms_of(g) <= atoms_of(f)
    assert {id(p) for p in params(g)} <= {id(p) for p in params(f)}


def test_derived_operators():
    even = make_even()
    f = parse_formula("G{even} p", {"even": even})
    assert f == Release(even, parse_formula("false"), Atom("p"))
    assert parse_formula("X p") == Until(SIGMA, TRUE, Atom("p"))
    assert parse_formula("F p") == Until(STAR, TRUE, Atom("p"))
    assert parse_formula("p -> q") == Or(Not(Atom("p")), Atom("q"))
    assert parse_formula("A p") == Not(Exists(Not(Atom("p"))))
    assert parse_formula("p U q U r") == Until(STAR, Atom("p"), Until(STAR, Atom("q"), Atom("r")))
    assert parse_formula("p & q | r") == Or(And(Atom("p"), Atom("q")), Atom("r"))
    assert parse_formula("p U{.} q").param is SIGMA


def test_nnf_dualities():
    assert to_nnf(parse_formula("!(p U q)")) == Release(STAR, Not(Atom("p")), Not(Atom("q")))
    assert to_nnf(parse_formula("!X p")) == Until(SIGMA, TRUE, Not(Atom("p")))
    assert to_nnf(parse_formula("!!p")) == Atom("p")
    assert to_nnf(parse_formula("!E(p)")) == Not(Exists(Atom("p")))


def test_syntax_errors():
    for text in ["p U", "(p", "p q", "p U{", "p & & q", "U p", "__sub0"]:
        with pytest.raises(FormulaSyntaxError):
            parse_formula(text)
    with pytest.raises(UnresolvedAutomatonError):
        parse_formula("p U{missing} q")


def test_pushdown_parameters_are_rejected():
    lib = load_automata([fixture("dpda.aut"), fixture("pda.aut")])
    with pytest.raises(UndecidableFragmentError, match="undecidable"):
        parse_formula("F{anbn} p", lib)
    with pytest.raises(UndecidableFragmentError, match="satisfiability"):
        parse_formula("F{pal} p", lib, purpose="sat")


def test_classification():
    odd = load_automata([fixture("odd.aut")])
    assert str(classify_fragment(parse_formula("E (F{odd} q & G !r)", odd))) == "CTL+[NFA]"
    rg = {"rngn": make_rngn(), "even": make_even()}
    f = classify_fragment(parse_formula("work U{rngn} complete", rg))
    assert str(f) == "LTL[VPA]" and f.languages == "VPL"
    assert str(classify_fragment(parse_formula("G{even} p", rg))) == "LTL[DFA]"
    assert classify_fragment(parse_formula("E(p U q) & A(p R{even} q)", rg)).logic == "CTL"
    assert classify_fragment(parse_formula("E(F E(G p) & p)")).logic == "CTL+"
    assert classify_fragment(parse_formula("E(F G p)")).logic == "CTL*"
    assert not has_quantifier(parse_formula("p U q"))


def test_formula_size_counts_nodes_and_automata():
    even = make_even()
    assert formula_size(parse_formula("p")) == 1
    assert formula_size(parse_formula("p U q")) == 3 + 1
    assert formula_size(parse_formula("G{even} p", {"even": even})) == 3 + even.size


def test_plain_alphabet_fixture_parses():
    lib = load_automata([fixture("even.aut")])
    assert lib["even"].alphabet == PLAIN.__class__.plain({"a"})
