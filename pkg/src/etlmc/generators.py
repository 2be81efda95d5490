"""Random instances for property tests and the acceptance experiments.

Every generator takes a :class:`random.Random` so runs are reproducible.
"""
from __future__ import annotations

import random
from itertools import product as _cartesian

from .automata import FiniteAutomaton, Rule
from .logic import (SIGMA, STAR, And, Atom, Const, Exists, Not, Or, Release,
                    Until)
from .omega import LassoWord, all_letters
from .pushdown import BOTTOM, PDS, PDSRule
from .systems import KTS

__all__ = [
    "random_nfa", "random_dfa", "random_vpa", "random_kts", "random_pds",
    "random_bvps", "random_formula", "random_lasso", "random_kts_lasso",
    "random_state_formula",
]


def _rng(rng):
    return rng if isinstance(rng, random.Random) else random.Random(rng)


def random_nfa(rng, alphabet, max_states=3, name="A", deterministic=False,
               density=0.5):
    """Plain automaton with at most ``max_states`` states and at least one final."""
    rng = _rng(rng)
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    rules = []
    for q in states:
        for a in alphabet.sorted_symbols():
            if deterministic:
                if rng.random() < 0.8:
                    rules.append(Rule(q, a, rng.choice(states)))
            else:
                for d in states:
                    if rng.random() < density / max(1, n - 1) + 0.1:
                        rules.append(Rule(q, a, d))
    finals = frozenset(s for s in states if rng.random() < 0.4) or frozenset([rng.choice(states)])
    return FiniteAutomaton(name, "DFA" if deterministic else "NFA", alphabet,
                           frozenset(states), states[0], finals, tuple(rules))


def random_dfa(rng, alphabet, max_states=3, name="A"):
    return random_nfa(rng, alphabet, max_states, name, deterministic=True)


def random_vpa(rng, alphabet, max_states=3, max_stack=2, name="V",
               deterministic=False):
    """Visibly pushdown automaton over a visibly alphabet."""
    rng = _rng(rng)
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    gammas = [f"g{i}" for i in range(rng.randint(1, max_stack))]
    rules = []
    for q in states:
        for a in sorted(alphabet.internals):
            if rng.random() < 0.7:
                for d in _pick(rng, states, deterministic):
                    rules.append(Rule(q, a, d))
        for a in sorted(alphabet.calls):
            if rng.random() < 0.7:
                for d in _pick(rng, states, deterministic):
                    rules.append(Rule(q, a, d, "push", rng.choice(gammas)))
        for a in sorted(alphabet.returns):
            for g in gammas:
                if rng.random() < 0.6:
                    for d in _pick(rng, states, deterministic):
                        rules.append(Rule(q, a, d, "pop", g))
    finals = frozenset(s for s in states if rng.random() < 0.4) or frozenset([rng.choice(states)])
    return FiniteAutomaton(name, "DVPA" if deterministic else "VPA", alphabet,
                           frozenset(states), states[0], finals, tuple(rules),
                           frozenset(gammas))


def _pick(rng, states, deterministic):
    if deterministic:
        return [rng.choice(states)]
    k = rng.choice([1, 1, 2])
    return rng.sample(states, min(k, len(states)))


def random_kts(rng, alphabet, props, max_states=5, name="K"):
    """Total KTS with up to ``max_states`` states."""
    rng = _rng(rng)
    n = rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    symbols = alphabet.sorted_symbols()
    trans = set()
    for s in states:
        k = rng.randint(1, 2)
        for _ in range(k):
            trans.add((s, rng.choice(symbols), rng.choice(states)))
    labels = {s: frozenset(p for p in sorted(props) if rng.random() < 0.5) for s in states}
    return KTS(name, tuple(states), alphabet, tuple(sorted(trans)), labels, states[0],
               props=frozenset(props))


def random_pds(rng, alphabet, props=(), max_locations=3, max_stack=2,
               name="P", visibly=False, buchi=False, max_rules=10):
    """Random pushdown system; with ``visibly`` the rule shapes follow the
    action partition.  With ``buchi`` some locations are final and totality
    is not enforced."""
    rng = _rng(rng)
    locs = [f"p{i}" for i in range(rng.randint(1, max_locations))]
    stack = [f"g{i}" for i in range(rng.randint(1, max_stack))] + [BOTTOM]
    rules = set()
    symbols = alphabet.sorted_symbols()
    for _ in range(rng.randint(1, max_rules)):
        p, g, a, d = rng.choice(locs), rng.choice(stack), rng.choice(symbols), rng.choice(locs)
        body = _random_body(rng, alphabet, a, g, stack, visibly)
        if body is not None:
            rules.add(PDSRule(p, g, a, d, body))
    if not buchi:
        have = {(r.src, r.top) for r in rules}
        for p, g in _cartesian(locs, stack):
            if (p, g) not in have:
                a = rng.choice(symbols)
                for _ in range(10):
                    body = _random_body(rng, alphabet, a, g, stack, visibly)
                    if body is not None and (g != BOTTOM or BOTTOM in body):
                        break
                    a = rng.choice(symbols)
                else:
                    a, body = _internal_symbol(alphabet, symbols), (g,)
                rules.add(PDSRule(p, g, a, rng.choice(locs), body))
    labels = {}
    for p, g in _cartesian(locs, stack):
        lab = frozenset(x for x in sorted(props) if rng.random() < 0.5)
        if lab:
            labels[(p, g)] = lab
    finals = frozenset(p for p in locs if rng.random() < 0.4) if buchi else None
    if buchi and not finals:
        finals = frozenset([locs[0]])
    return PDS(name, frozenset(locs), frozenset(stack), tuple(sorted(rules, key=repr)),
               alphabet, initial=((locs[0], (BOTTOM,)),), labels=labels,
               visibly=visibly, finals=finals)


def _internal_symbol(alphabet, symbols):
    if alphabet.pushdown and alphabet.internals:
        return sorted(alphabet.internals)[0]
    return symbols[0]


def _random_body(rng, alphabet, a, g, stack, visibly):
    pushable = [x for x in stack if x != BOTTOM]
    if visibly and alphabet.pushdown:
        kind = alphabet.kind_of(a)
        if kind == "int":
            return (g,) if g == BOTTOM else (rng.choice(pushable),)
        if kind == "call":
            return (rng.choice(pushable), g)
        return (BOTTOM,) if g == BOTTOM else ()
    shape = rng.choice([0, 1, 1, 2])
    if g == BOTTOM:
        if shape == 2:
            return (rng.choice(pushable), BOTTOM)
        return (BOTTOM,)
    if shape == 0:
        return ()
    if shape == 1:
        return (rng.choice(pushable),)
    return (rng.choice(pushable), rng.choice(pushable))


def random_bvps(rng, alphabet, max_locations=3, max_stack=2, name="B"):
    return random_pds(rng, alphabet, (), max_locations, max_stack, name,
                      visibly=True, buchi=True)


def random_formula(rng, props, library, max_modalities=3, max_depth=4,
                   allow_star=True):
    """Quantifier-free formula over ``props`` whose modalities take parameters
    from ``library`` (plus the builtins when ``allow_star``)."""
    rng = _rng(rng)
    params = list(library.values())
    if allow_star:
        params += [STAR, SIGMA]
    budget = [rng.randint(0, max_modalities)]
    props = sorted(props)

    def gen(depth):
        r = rng.random()
        if depth <= 0 or r < 0.25:
            if rng.random() < 0.1:
                return Const(rng.random() < 0.5)
            return Atom(rng.choice(props))
        if budget[0] > 0 and r < 0.65:
            budget[0] -= 1
            cls = Until if rng.random() < 0.6 else Release
            return cls(rng.choice(params), gen(depth - 1), gen(depth - 1))
        if r < 0.75:
            return Not(gen(depth - 1))
        cls = And if rng.random() < 0.5 else Or
        return cls(gen(depth - 1), gen(depth - 1))

    return gen(max_depth)


def random_state_formula(rng, props, library, max_quantifiers=2, max_modalities=3,
                         max_depth=4):
    """CTL* state formula with at most ``max_quantifiers`` path quantifiers."""
    rng = _rng(rng)
    budget = [rng.randint(1, max_quantifiers)]

    def gen(depth, top):
        if budget[0] > 0 and (top or rng.random() < 0.4):
            budget[0] -= 1
            inner = _path(depth - 1)
            f = Exists(inner)
            return Not(f) if rng.random() < 0.5 else f
        base = random_formula(rng, props, library, 0, 1)
        return base

    def _path(depth):
        if depth <= 0:
            return Atom(rng.choice(sorted(props)))
        r = rng.random()
        params = list(library.values()) + [STAR, SIGMA]
        if r < 0.6:
            cls = Until if rng.random() < 0.6 else Release
            return cls(rng.choice(params), _leaf(depth - 1), _leaf(depth - 1))
        if r < 0.75:
            return Not(_path(depth - 1))
        cls = And if rng.random() < 0.5 else Or
        return cls(_path(depth - 1), _leaf(depth - 1))

    def _leaf(depth):
        if depth > 0 and budget[0] > 0 and rng.random() < 0.4:
            return gen(depth, False)
        if depth > 0 and rng.random() < 0.3:
            return _path(depth - 1)
        return Atom(rng.choice(sorted(props)))

    return gen(max_depth, True)


def random_lasso(rng, props, alphabet, max_stem=3, max_loop=3, letters=None):
    rng = _rng(rng)
    letters = list(letters or all_letters(props, alphabet))
    stem = [rng.choice(letters) for _ in range(rng.randint(0, max_stem))]
    loop = [rng.choice(letters) for _ in range(rng.randint(1, max_loop))]
    return LassoWord(stem, loop)


def random_kts_lasso(rng, kts, max_stem=4, max_loop=4):
    """A lasso path of ``kts`` as ``(states, actions, loop_start)``."""
    rng = _rng(rng)
    for _ in range(100):
        states, actions = [kts.initial], []
        for _ in range(rng.randint(1, max_stem + max_loop)):
            a, t = rng.choice(kts.out[states[-1]])
            actions.append(a)
            states.append(t)
        hits = [j for j in range(len(actions)) if states[j] == states[-1]]
        if hits:
            return tuple(states), tuple(actions), rng.choice(hits)
    return None
