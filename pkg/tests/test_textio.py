"""Text formats: parsing, dumping and located diagnostics."""
import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from conftest import PLAIN, VISIBLY, fixture, make_rngn
from etlmc.errors import FormatError
from etlmc.generators import random_kts, random_nfa, random_pds, random_vpa
from etlmc.logic import to_str
from etlmc.pushdown import BOTTOM
from etlmc.textio import (dump_automaton, dump_config_nfa, dump_kts, dump_pds,
                          load_automata, load_formula, load_system, parse_automata,
                          parse_kts, parse_pds)

seeds = st.integers(0, 10**6)


def same(x, y):
    return all(getattr(x, f.name) == getattr(y, f.name) for f in dataclasses.fields(x))


@given(seeds)
def test_automaton_round_trip(seed):
    rng = random.Random(seed)
    for a in (random_nfa(rng, PLAIN, 3, "A"), random_vpa(rng, VISIBLY, 3, 2, "V")):
        b = parse_automata(dump_automaton(a))[a.name]
        assert same(a, b)


@given(seeds)
def test_system_round_trip(seed):
    rng = random.Random(seed)
    k = random_kts(rng, PLAIN, ["p", "q"], 4)
    assert same(k, parse_kts(dump_kts(k)))
    p = random_pds(rng, VISIBLY, ["p"], 3, 2, visibly=True, max_rules=8)
    assert dump_pds(parse_pds(dump_pds(p))) == dump_pds(p)


def test_fixture_files_load():
    rngn = load_automata([fixture("rngn.aut")])["rngn"]
    assert rngn.kind == "VPA" and rngn.finals == make_rngn().finals
    assert set(rngn.rules) == set(make_rngn().rules)
    sys = load_system(fixture("reqgrant.pds"))
    assert BOTTOM in sys.stack and sys.visibly
    assert list(sys.initial) == [("p0", (BOTTOM,))]
    f = load_formula(fixture("reqgrant.etl"), {"rngn": rngn})
    assert to_str(f) == "(work U{rngn} complete)"
    assert load_formula("G p", {}) is not None


@pytest.mark.parametrize("parse,text,line", [
    (parse_automata, "automaton A kind=DFA\nalphabet int={a}\nstates {0}\ninitial 0\n0 -a=> 0\n", 5),
    (parse_automata, "automaton A kind=XYZ\n", 1),
    (parse_automata, "states {0}\n", 1),
    (parse_kts, "kts K\nprops {p}\nstate s0 {p}\ninit s0\ns0 --> \n", 5),
    (parse_pds, "pds P\nalphabet int={a}\nlocations {p}\nstack {_|_}\ninit (p, _|_)\n(p,_|_) -a-> p\n", 6),
])
def test_errors_carry_line_numbers(parse, text, line):
    with pytest.raises(FormatError) as e:
        parse(text, "in.txt")
    assert e.value.line == line
    assert str(e.value).startswith(f"in.txt:{line}:")


def test_formula_errors_are_located(tmp_path):
    p = tmp_path / "bad.etl"
    p.write_text("# comment\n\nG (p &\n")
    with pytest.raises(FormatError) as e:
        load_formula(str(p), {})
    assert e.value.source == str(p) and e.value.line == 3
    q = tmp_path / "unknown.etl"
    q.write_text("F{nope} p\n")
    with pytest.raises(FormatError):
        load_formula(str(q), {})


def test_bottom_alias():
    text = ("pds P\nalphabet int={a}\nlocations {p}\nstack {_|_}\n"
            "init (p, _|_)\n(p,_|_) -a-> (p, _|_)\n")
    p = parse_pds(text)
    assert set(p.stack) == {BOTTOM}
    assert dump_pds(parse_pds(dump_pds(p))) == dump_pds(p)


def test_config_dump_names_blocks_by_location():
    from etlmc.modelcheck import mc_linear
    from etlmc.logic import parse_formula
    sys = load_system(fixture("reqgrant_mutant.pds"))
    v = mc_linear(sys, parse_formula("work U{rngn} complete", {"rngn": make_rngn()}),
                  certificate=True)
    text = dump_config_nfa(v.certificate, name="violating")
    assert text.count("automaton violating_l") == len(v.certificate.start)
    assert "_|_" in text and BOTTOM not in text
    parsed = parse_automata(text)
    assert sorted(parsed) == sorted(f"violating_l{i}" for i in range(len(v.certificate.start)))
