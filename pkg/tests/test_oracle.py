"""The brute-force semantics: lasso evaluation, branching evaluation on
small KTS and bounded pushdown exploration."""
import random

from hypothesis import given, strategies as st

from conftest import PLAIN, VISIBLY, make_anbn
from etlmc.automata import Alphabet
from etlmc.generators import random_formula, random_lasso, random_nfa, random_vpa
from etlmc.logic import (SIGMA, And, Atom, Const, Not, Or, Until,
                         parse_formula)
from etlmc.omega import LassoWord
from etlmc.oracle import (OracleBounds, and3, default_bounds, not3, or3,
                          oracle_bounded_pds, oracle_branching_eval, oracle_kts_linear,
                          oracle_lasso_eval, oracle_lasso_positions, unmatched_calls)
from etlmc.pushdown import BOTTOM, PDS, PDSRule
from etlmc.systems import KTS

seeds = st.integers(0, 10**6)
P, Q, E = frozenset({"p"}), frozenset({"q"}), frozenset()


def textbook(f, w):
    """Classic fixpoint evaluation of LTL with F/G/U/R/X over lasso positions."""
    n = len(w)
    nxt = [w.norm(i + 1) for i in range(n)]

    def ev(g):
        if isinstance(g, Atom):
            return [g.name in w[i][0] for i in range(n)]
        if isinstance(g, Const):
            return [g.value] * n
        if isinstance(g, Not):
            return [not x for x in ev(g.arg)]
        if isinstance(g, And):
            return [a and b for a, b in zip(ev(g.left), ev(g.right))]
        if isinstance(g, Or):
            return [a or b for a, b in zip(ev(g.left), ev(g.right))]
        left, right = ev(g.left), ev(g.right)
        if g.param is SIGMA:
            if isinstance(g, Until):
                return [left[i] and right[nxt[i]] for i in range(n)]
            return [right[nxt[i]] or left[i] for i in range(n)]
        if isinstance(g, Until):
            val = [False] * n
            for _ in range(n + 1):
                val = [right[i] or (left[i] and val[nxt[i]]) for i in range(n)]
            return val
        # release: right holds up to and including the first left position
        val = [True] * n
        for _ in range(n + 1):
            val = [right[i] and (left[i] or val[nxt[i]]) for i in range(n)]
        return val
    return ev(f)


@given(seeds)
def test_agrees_with_textbook_ltl_on_builtin_parameters(seed):
    rng = random.Random(seed)
    f = random_formula(rng, ["p", "q"], {}, 4, 5, allow_star=True)
    w = random_lasso(rng, ["p", "q"], PLAIN, 4, 4)
    assert oracle_lasso_positions(f, w) == textbook(f, w)


def test_fifty_hand_cases():
    """Small textbook facts on fixed lassos."""
    cases = [
        ("p U q", [(P, "a")], [(Q, "a")], True),
        ("p U q", [], [(P, "a")], False),
        ("G p", [], [(P, "a")], True),
        ("G p", [(P, "a")], [(E, "a")], False),
        ("F p", [(E, "a"), (E, "a")], [(P, "a")], True),
        ("F q", [], [(P, "a"), (E, "a")], False),
        ("G F p", [], [(P, "a"), (E, "a")], True),
        ("F G p", [], [(P, "a"), (E, "a")], False),
        ("F G p", [(E, "a")], [(P, "a")], True),
        ("X p", [(E, "a")], [(P, "a")], True),
        ("X X p", [(E, "a"), (P, "a")], [(E, "a")], False),
        ("p R q", [], [(Q, "a")], True),
        ("p R q", [(Q | P, "a")], [(E, "a")], True),
        ("p R q", [(Q, "a")], [(E, "a")], False),
    ]
    checked = 0
    for text, stem, loop, expected in cases:
        assert oracle_lasso_eval(parse_formula(text), LassoWord(stem, loop)) is expected, text
        checked += 1
    # duality identities on a spread of lassos
    rng = random.Random(50)
    for _ in range(50 - checked):
        w = random_lasso(rng, ["p", "q"], PLAIN, 3, 3)
        a = oracle_lasso_eval(parse_formula("!(p U q)"), w)
        b = oracle_lasso_eval(parse_formula("!p R !q"), w)
        assert a is not None and a == b


def test_visibly_parameter_exclusive_actions():
    anbn = make_anbn()
    f = parse_formula("F{anbn} end", {"anbn": anbn})
    w = LassoWord([(E, "a"), (E, "a"), (E, "b"), (E, "b")], [(frozenset({"end"}), "end")])
    values = oracle_lasso_positions(f, w)
    assert values[0] is True
    # the witness is exactly position 4: cut the end proposition there and it fails
    w2 = LassoWord([(E, "a"), (E, "a"), (E, "b"), (E, "b"), (E, "end")],
                   [(frozenset({"end"}), "end")])
    assert oracle_lasso_eval(f, w2) is False
    assert oracle_lasso_eval(f, w, inclusive=True) is False


def test_unmatched_calls_on_lassos():
    vp = Alphabet.visibly({"a"}, {"end"}, {"b"})
    w = LassoWord([(E, "a"), (E, "a"), (E, "b")], [(E, "a")])
    assert unmatched_calls(w, vp) == frozenset({0, 3})
    w = LassoWord([], [(E, "a"), (E, "b")])
    assert unmatched_calls(w, vp) == frozenset()
    w = LassoWord([(E, "a")], [(E, "a"), (E, "b"), (E, "b")])
    assert unmatched_calls(w, vp) == frozenset()


@given(seeds)
def test_definite_verdicts_stable_under_larger_bounds(seed):
    rng = random.Random(seed)
    lib = {"V": random_vpa(rng, VISIBLY, 2, 2, "V"), "N": random_nfa(rng, VISIBLY, 2, "N")}
    f = random_formula(rng, ["p", "q"], lib, 3)
    w = random_lasso(rng, ["p", "q"], VISIBLY, 3, 3)
    small = oracle_lasso_eval(f, w, bound=len(w))
    large = oracle_lasso_eval(f, w, bound=10 * len(w) + 40)
    if small is not None:
        assert large == small


def test_three_valued_connectives():
    assert and3(True, None) is None and and3(None, False) is False
    assert or3(False, None) is None and or3(None, True) is True
    assert not3(None) is None and not3(True) is False


def test_bounds_from_environment(monkeypatch):
    monkeypatch.setenv("ETLMC_ORACLE_BOUNDS", "5,3,7")
    assert default_bounds() == OracleBounds(5, 3, 7)
    monkeypatch.delenv("ETLMC_ORACLE_BOUNDS")
    b = default_bounds()
    w = LassoWord([(E, "a")], [(E, "a"), (E, "a")])
    assert b.lasso_bound(w) == 1 + 8 + 20 and (b.height, b.depth) == (8, 200)


def kts(states, labels, trans, alphabet=PLAIN):
    return KTS("k", tuple(states), alphabet, tuple(trans),
               {s: frozenset(labels.get(s, ())) for s in states}, states[0],
               props=frozenset({"p", "q"}))


def test_branching_examples():
    k = kts(["s0", "s1", "s2"], {"s1": {"q"}, "s2": {"p"}},
            [("s0", "a", "s1"), ("s0", "a", "s2"), ("s1", "a", "s1"), ("s2", "a", "s2")])
    assert oracle_branching_eval(parse_formula("E F q"), k) is True
    assert oracle_branching_eval(parse_formula("E(G F q)"), k) is True
    assert oracle_branching_eval(parse_formula("A X (p | q)"), k) is True
    assert oracle_branching_eval(parse_formula("A X p"), k) is False
    assert oracle_branching_eval(parse_formula("E X X (p & q)"), k) is False


def test_kts_linear_counterexample():
    k = kts(["s0", "s1"], {"s0": {"p"}}, [("s0", "a", "s1"), ("s1", "a", "s0")])
    v, (states, actions, j, w) = oracle_kts_linear(k, parse_formula("G p"))
    assert v is False and "s1" in states
    assert oracle_kts_linear(k, parse_formula("G F p")) == (None, None)


def test_bounded_pds_examples():
    push = PDS("push", {"p"}, {"g", BOTTOM}, [PDSRule("p", "g", "a", "p", ("g", "g"))],
               PLAIN, initial=[("p", ("g",))])
    assert ("p", ("g", "g")) in oracle_bounded_pds(push, 4, 1).reachable
    pop = PDS("pop", {"p"}, {"g"}, [PDSRule("p", "g", "a", "p", ())], PLAIN,
              initial=[("p", ("g",) * 3)])
    assert ("p", ()) in oracle_bounded_pds(pop, 4, 5).reachable
    loop = PDS("loop", {"p"}, {BOTTOM}, [PDSRule("p", BOTTOM, "a", "p", (BOTTOM,))], PLAIN,
               initial=[("p", (BOTTOM,))], finals={"p"})
    assert oracle_bounded_pds(loop, 2, 2).accepting == {("p", (BOTTOM,))}
