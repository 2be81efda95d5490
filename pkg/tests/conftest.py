import os
import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from etlmc.automata import Alphabet, FiniteAutomaton, Rule

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PLAIN = Alphabet.plain({"a", "b"})
VISIBLY = Alphabet.visibly({"c"}, {"i"}, {"r"})
REQGRANT = Alphabet.visibly({"req"}, {"i"}, {"grant"})


def fixture(name):
    return str(FIXTURES / name)


@pytest.fixture
def rng():
    return random.Random(0)


def make_rngn():
    """req^n grant^n for n >= 1."""
    rules = [Rule("s0", "req", "s1", "push", "Z"), Rule("s1", "req", "s1", "push", "A"),
             Rule("s1", "grant", "s2", "pop", "A"), Rule("s1", "grant", "s3", "pop", "Z"),
             Rule("s2", "grant", "s2", "pop", "A"), Rule("s2", "grant", "s3", "pop", "Z")]
    return FiniteAutomaton("rngn", "VPA", REQGRANT, frozenset({"s0", "s1", "s2", "s3"}),
                           "s0", frozenset({"s3"}), tuple(rules), frozenset({"Z", "A"}))


def make_anbn():
    """a^n b^n for n >= 1 over calls {a}, returns {b}, internal {end}."""
    al = Alphabet.visibly({"a"}, {"end"}, {"b"})
    rules = [Rule("q0", "a", "q1", "push", "Z"), Rule("q1", "a", "q1", "push", "A"),
             Rule("q1", "b", "q2", "pop", "A"), Rule("q1", "b", "q3", "pop", "Z"),
             Rule("q2", "b", "q2", "pop", "A"), Rule("q2", "b", "q3", "pop", "Z")]
    return FiniteAutomaton("anbn", "DVPA", al, frozenset({"q0", "q1", "q2", "q3"}), "q0",
                           frozenset({"q3"}), tuple(rules), frozenset({"Z", "A"}))


def make_even():
    rules = [Rule("e", "a", "o"), Rule("o", "a", "e")]
    return FiniteAutomaton("even", "DFA", Alphabet.plain({"a"}), frozenset({"e", "o"}),
                           "e", frozenset({"e"}), tuple(rules))
