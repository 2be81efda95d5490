"""Positive boolean formulas and the parity game solver."""
from itertools import chain, combinations, product

from hypothesis import given, strategies as st

from etlmc import pbf
from etlmc.parity import ParityGame, solve_parity_game

ATOMS = ["x", "y", "z", "w"]


def formulas():
    leaves = st.sampled_from([pbf.atom(a) for a in ATOMS] + [pbf.TRUE, pbf.FALSE])
    return st.recursive(
        leaves,
        lambda kids: st.builds(lambda a, b, op: op(a, b), kids, kids,
                               st.sampled_from([pbf.conj, pbf.disj])),
        max_leaves=8)


def subsets(xs):
    return [frozenset(c) for c in chain.from_iterable(combinations(xs, r) for r in range(len(xs) + 1))]


@given(formulas())
def test_minimal_models_are_exactly_the_minimal_satisfying_sets(f):
    sat = [s for s in subsets(ATOMS) if pbf.evaluate(f, s)]
    minimal = {s for s in sat if not any(t < s for t in sat)}
    assert set(pbf.minimal_models(f)) == minimal


@given(formulas())
def test_dual_is_the_complement_on_complemented_choice(f):
    for s in subsets(ATOMS):
        rest = frozenset(ATOMS) - s
        assert pbf.evaluate(pbf.dual(f), s) == (not pbf.evaluate(f, rest))


@given(formulas())
def test_dual_is_an_involution_semantically(f):
    for s in subsets(ATOMS):
        assert pbf.evaluate(pbf.dual(pbf.dual(f)), s) == pbf.evaluate(f, s)


def test_constants_and_flattening():
    x, y = pbf.atom("x"), pbf.atom("y")
    assert pbf.conj(x, pbf.TRUE) == x
    assert pbf.conj(x, pbf.FALSE) == pbf.FALSE
    assert pbf.disj(x, pbf.TRUE) == pbf.TRUE
    assert pbf.conj(pbf.conj(x, y), x) == pbf.conj(x, y)
    assert pbf.minimal_models(pbf.TRUE) == [frozenset()]
    assert pbf.minimal_models(pbf.FALSE) == []


def test_letter_literals_resolve():
    f = pbf.conj(pbf.has("p"), pbf.disj(pbf.act("a"), pbf.atom("q1")))
    assert pbf.at_letter(f, {"p"}, "a") == pbf.TRUE
    assert pbf.at_letter(f, set(), "a") == pbf.FALSE
    assert pbf.at_letter(f, {"p"}, "b") == pbf.atom("q1")
    assert pbf.at_letter(pbf.dual(f), {"p"}, "b") == pbf.dual(pbf.atom("q1"))


# ------------------------------------------------------------- parity games

def brute_force_winner(game):
    """Player 0 wins from v iff some positional strategy of player 0 beats
    every positional counter-strategy (positional determinacy)."""
    verts = sorted(game.owner)
    mine = [v for v in verts if game.owner[v] == 0]
    theirs = [v for v in verts if game.owner[v] == 1]

    def outcome(start, choice):
        seen, v, path = {}, start, []
        while v not in seen:
            seen[v] = len(path)
            path.append(v)
            v = choice[v]
        cycle = path[seen[v]:]
        return min(game.priority[u] for u in cycle) % 2 == 0

    win = set()
    for s0 in product(*[game.succ[v] for v in mine]):
        c0 = dict(zip(mine, s0))
        for v in verts:
            if v in win:
                continue
            if all(outcome(v, {**c0, **dict(zip(theirs, s1))})
                   for s1 in product(*[game.succ[u] for u in theirs])):
                win.add(v)
    return win


@st.composite
def games(draw):
    n = draw(st.integers(1, 5))
    g = ParityGame()
    for v in range(n):
        succ = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=2, unique=True))
        g.add(v, draw(st.integers(0, 1)), draw(st.integers(0, 3)), succ)
    return g


@given(games())
def test_zielonka_matches_brute_force(game):
    w0, w1 = solve_parity_game(game)
    assert set(w0) | set(w1) == set(game.owner)
    assert not set(w0) & set(w1)
    assert set(w0) == brute_force_winner(game)


def test_self_loops():
    g = ParityGame()
    g.add("even", 1, 2, ["even"])
    g.add("odd", 0, 1, ["odd"])
    g.add("choice", 0, 3, ["even", "odd"])
    w0, w1 = solve_parity_game(g)
    assert {"even", "choice"} <= set(w0) and "odd" in w1
