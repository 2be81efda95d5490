"""ω-automata over letters ``(props, action)``: BA, ABA and AJA.

Alternating automata keep one transition formula per state.  The formula is
letter-independent: it mentions the letter only through the literals of
:mod:`etlmc.pbf`, and its atoms are :class:`Move` triples
``(direction, target, fallback)``.  Directions are

* ``down``: read the next position;
* ``downa``: jump to the abstract successor, or to ``fallback`` at the next
  position when there is none;
* ``stay``: an ε-move, eliminated on the fly by :meth:`AltAutomaton.step`.

An ABA is an alternating automaton whose colours are 0 (accepting) and 1 and
that never uses ``downa``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import chain, combinations
from typing import NamedTuple

import networkx as nx

from . import pbf
from .automata import Alphabet
from .errors import NotWeakError, PreconditionError, UnknownAtBoundError
from .parity import ParityGame, solve_parity_game
from .pushdown import BOTTOM, PDS, PDSRule, letter_action

__all__ = [
    "Move", "LassoWord", "AltAutomaton", "BuchiAutomaton", "abstract_successor",
    "lasso_successor_table", "all_letters", "aba_to_ba", "aja_dualize",
    "aja_to_bvps", "lasso_membership", "buchi_emptiness", "accepting_lasso",
    "UNMATCHED",
]

UNMATCHED = "U"


class Move(NamedTuple):
    dir: str
    target: object
    fallback: object = None

    def __str__(self):
        if self.dir == "downa":
            return f"downa:{self.target}/{self.fallback}"
        return f"{self.dir}:{self.target}"


def down(q):
    return pbf.atom(Move("down", q))


def downa(q, fallback):
    return pbf.atom(Move("downa", q, fallback))


def stay(q):
    return pbf.atom(Move("stay", q))


# --------------------------------------------------------------------- words

@dataclass(frozen=True)
class LassoWord:
    """The ω-word ``stem · loop^ω``."""

    stem: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("lasso loop must be non-empty")

    def __len__(self):
        return len(self.stem) + len(self.loop)

    def __getitem__(self, i):
        """0-based letter access on the infinite word."""
        n = len(self.stem)
        if i < n:
            return self.stem[i]
        return self.loop[(i - n) % len(self.loop)]

    def norm(self, i):
        """Canonical representative of position ``i`` (0-based)."""
        n = len(self.stem)
        if i < n:
            return i
        return n + (i - n) % len(self.loop)

    def prefix(self, k):
        return tuple(self[i] for i in range(k))

    def suffix(self, i):
        """The word read from position ``i`` on, again as a lasso."""
        n = len(self.stem)
        if i <= n:
            return LassoWord(self.stem[i:], self.loop)
        j = (i - n) % len(self.loop)
        return LassoWord((), self.loop[j:] + self.loop[:j])

    def actions(self):
        return LassoWord(tuple(map(letter_action, self.stem)),
                         tuple(map(letter_action, self.loop)))


def _scan_limit(w):
    n, L = len(w.stem), len(w.loop)
    return n + L * (n + L + 3) + 1


def _abstract_next(w, i, kind_of):
    """0-based abstract successor of position ``i`` or ``None`` for ⊤."""
    k = kind_of(letter_action(w[i]))
    if k == "ret":
        return None
    if k == "int":
        return i + 1
    height = 0
    limit = i + _scan_limit(w)
    j = i
    while j < limit:
        kj = kind_of(letter_action(w[j]))
        if kj == "call":
            height += 1
        elif kj == "ret":
            height -= 1
        j += 1
        if height == 0:
            return j
    return None


def _kind_fn(alphabet):
    if alphabet is None:
        return lambda a: "int"
    return alphabet.kind_of


def abstract_successor(w, i, alphabet):
    """Abstract successor of 1-based position ``i`` on lasso ``w``; ``None`` is ⊤.

    The scan is exact: within ``len(stem) + len(loop)·(len(stem)+len(loop)+3)``
    letters the call/return height either reaches zero or provably never does.
    """
    if i < 1:
        raise ValueError("positions are 1-based")
    j = _abstract_next(w, i - 1, _kind_fn(alphabet))
    return None if j is None else j + 1


def lasso_successor_table(w, alphabet):
    """For each canonical 0-based position, the canonical abstract successor."""
    kind_of = _kind_fn(alphabet)
    table = {}
    for i in range(len(w)):
        j = _abstract_next(w, i, kind_of)
        table[i] = None if j is None else w.norm(j)
    return table


def all_letters(props, alphabet):
    props = sorted(props)
    subsets = chain.from_iterable(combinations(props, k) for k in range(len(props) + 1))
    subsets = [frozenset(s) for s in subsets]
    return [(s, a) for s in subsets for a in alphabet.sorted_symbols()]


# ---------------------------------------------------------------- automata

@dataclass(frozen=True, eq=False)
class AltAutomaton:
    """Alternating automaton with min-parity colouring (ABA or AJA).

    ``delta`` maps each state to a formula over :class:`Move` atoms and
    letter literals.  Colours default to 1.
    """

    name: str
    kind: str
    states: tuple
    initial: object
    delta: dict
    colour: dict
    props: frozenset
    alphabet: Alphabet
    _memo: dict = field(default_factory=dict, repr=False)

    def __repr__(self):
        return f"{self.kind}({self.name!r}, {len(self.states)} states)"

    def colour_of(self, q):
        return self.colour.get(q, 1)

    @property
    def finals(self):
        return frozenset(q for q in self.states if self.colour_of(q) % 2 == 0)

    @property
    def size(self):
        """Number of states."""
        return len(self.states)

    @property
    def leaves(self):
        """Total number of leaves over all transition formulas."""
        return sum(pbf.size(self.delta[q]) for q in self.states)

    def step(self, q, letter):
        """Transition formula of ``q`` on ``letter`` with ε-moves resolved."""
        key = (q, letter)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        props, action = letter
        busy = set()

        def resolve(state):
            if state in busy:
                raise PreconditionError(f"cyclic ε-moves through state {state!r}")
            busy.add(state)
            f = pbf.at_letter(self.delta[state], props, action)
            f = pbf.substitute(f, lambda m: resolve(m.target) if m.dir == "stay" else None)
            busy.discard(state)
            return f

        out = resolve(q)
        self._memo[key] = out
        return out

    @cached_property
    def graph(self):
        """State graph over all move targets and fallbacks."""
        g = nx.DiGraph()
        g.add_nodes_from(self.states)
        for q in self.states:
            for m in pbf.atoms(self.delta[q]):
                g.add_edge(q, m.target)
                if m.fallback is not None:
                    g.add_edge(q, m.fallback)
        return g

    def is_weak(self):
        for comp in nx.strongly_connected_components(self.graph):
            if len({self.colour_of(q) % 2 for q in comp}) > 1:
                return False
        return True


def aja_dualize(a, name=None):
    """Dual automaton: dual formulas and every colour shifted by one."""
    return AltAutomaton(name or f"dual({a.name})", a.kind, a.states, a.initial,
                        {q: pbf.dual(f) for q, f in a.delta.items()},
                        {q: a.colour_of(q) + 1 for q in a.states}, a.props, a.alphabet)


@dataclass(frozen=True, eq=False)
class BuchiAutomaton:
    """Nondeterministic Büchi automaton with explicit letters."""

    name: str
    states: frozenset
    initial: object
    transitions: dict        # state -> {letter: frozenset(states)}
    finals: frozenset
    letters: tuple = ()

    def __repr__(self):
        return f"BA({self.name!r}, {len(self.states)} states)"

    def post(self, q, letter):
        return self.transitions.get(q, {}).get(letter, frozenset())

    @property
    def size(self):
        return len(self.states) + sum(len(d) for m in self.transitions.values()
                                      for d in m.values())


# ---------------------------------------------------------- Miyano-Hayashi

def _targets(moves):
    return frozenset(m.target for m in moves)


def aba_to_ba(a, letters=None, name=None):
    """Breakpoint construction over the given letters (default: all).

    States are pairs ``(S, O)``; a state is accepting when ``O`` is empty.
    """
    if letters is None:
        letters = all_letters(a.props, a.alphabet)
    letters = tuple(letters)
    finals = a.finals
    start = (frozenset([a.initial]), frozenset())
    trans = {}
    seen = {start}
    todo = [start]
    while todo:
        S, O = todo.pop()
        out = {}
        src = S if not O else O
        for letter in letters:
            fs = pbf.conj(a.step(q, letter) for q in S)
            fo = pbf.conj(a.step(q, letter) for q in src)
            mo = pbf.minimal_models(fo)
            succ = set()
            for T in pbf.minimal_models(fs):
                for TO in mo:
                    if TO <= T:
                        succ.add((_targets(T), _targets(TO) - finals))
            if succ:
                out[letter] = frozenset(succ)
                for s in succ:
                    if s not in seen:
                        seen.add(s)
                        todo.append(s)
        trans[(S, O)] = out
    accepting = frozenset(s for s in seen if not s[1])
    return BuchiAutomaton(name or f"mh({a.name})", frozenset(seen), start, trans,
                          accepting, letters)


# ------------------------------------------------------- emptiness / lassos

def accepting_lasso(initials, post, is_final):
    """Search a reachable cycle through a final node.

    ``post(node)`` yields ``(label, node')``.  Returns ``None`` or a tuple
    ``(stem_nodes, stem_labels, loop_nodes, loop_labels)`` where the loop
    starts and ends in ``loop_nodes[0]``.
    """
    g = nx.DiGraph()
    parent = {}
    todo = deque()
    for v in initials:
        if v not in parent:
            parent[v] = None
            g.add_node(v)
            todo.append(v)
    edge_label = {}
    while todo:
        v = todo.popleft()
        for label, w in post(v):
            if (v, w) not in edge_label:
                edge_label[(v, w)] = label
                g.add_edge(v, w)
            if w not in parent:
                parent[w] = (v, label)
                todo.append(w)
    for comp in nx.strongly_connected_components(g):
        finals = [v for v in comp if is_final(v)]
        if not finals:
            continue
        f = finals[0]
        if len(comp) == 1 and not g.has_edge(f, f):
            continue
        stem_nodes, stem_labels = [f], []
        v = f
        while parent[v] is not None:
            u, lab = parent[v]
            stem_nodes.append(u)
            stem_labels.append(lab)
            v = u
        stem_nodes.reverse()
        stem_labels.reverse()
        # shortest cycle f -> ... -> f inside the component
        back = {f: None}
        q = deque([f])
        found = None
        while q and found is None:
            v = q.popleft()
            for w in g.successors(v):
                if w not in comp:
                    continue
                if w == f:
                    found = v
                    break
                if w not in back:
                    back[w] = v
                    q.append(w)
        loop = [found]
        while loop[-1] != f:
            loop.append(back[loop[-1]])
        loop.reverse()
        loop_nodes = loop
        loop_labels = [edge_label[(loop_nodes[i], loop_nodes[i + 1])]
                       for i in range(len(loop_nodes) - 1)]
        loop_labels.append(edge_label[(loop_nodes[-1], f)])
        return stem_nodes[:-1], stem_labels, loop_nodes, loop_labels
    return None


def buchi_emptiness(ba):
    """``(True, None)`` when L(ba) is empty, else ``(False, witness)``.

    The witness is a :class:`LassoWord`; the run is available as
    ``witness_run`` through :func:`buchi_witness`.
    """
    res = buchi_witness(ba)
    if res is None:
        return True, None
    return False, res[0]


def buchi_witness(ba):
    def post(q):
        for letter, dsts in ba.transitions.get(q, {}).items():
            for d in dsts:
                yield letter, d

    res = accepting_lasso([ba.initial], post, lambda q: q in ba.finals)
    if res is None:
        return None
    stem_nodes, stem_labels, loop_nodes, loop_labels = res
    return LassoWord(stem_labels, loop_labels), (stem_nodes, loop_nodes)


def _ba_lasso_membership(ba, w):
    def post(node):
        q, i = node
        letter = w[i]
        for d in ba.post(q, letter):
            yield letter, (d, w.norm(i + 1))

    res = accepting_lasso([(ba.initial, 0)], post, lambda n: n[0] in ba.finals)
    return res is not None


def _alt_lasso_game(a, w):
    table = lasso_successor_table(w, a.alphabet if a.alphabet.pushdown else None)
    game = ParityGame()
    neutral = max([a.colour_of(q) for q in a.states] + [1])
    WIN, LOSE = ("#win",), ("#lose",)
    game.add(WIN, 0, 0, [WIN])
    game.add(LOSE, 0, 1, [LOSE])
    todo = [(0, a.initial)]
    seen = {("s", 0, a.initial)}

    def target_vertex(pos, move):
        nxt = w.norm(pos + 1)
        if move.dir == "downa":
            j = table[pos]
            if j is None:
                return ("s", nxt, move.fallback)
            return ("s", j, move.target)
        return ("s", nxt, move.target)

    def formula_vertex(pos, f):
        if f is pbf.TRUE or f == pbf.TRUE:
            return WIN
        if f == pbf.FALSE:
            return LOSE
        if f.op == "atom":
            v = target_vertex(pos, f.args[0])
            if v not in seen:
                seen.add(v)
                todo.append((v[1], v[2]))
            return v
        v = ("f", pos, f)
        if v not in game.owner:
            kids = [formula_vertex(pos, g) for g in f.args]
            game.add(v, 0 if f.op == "or" else 1, neutral, kids)
        return v

    while todo:
        pos, q = todo.pop()
        f = a.step(q, w[pos])
        v = formula_vertex(pos, f)
        game.add(("s", pos, q), 0, a.colour_of(q), [v])
    return game


def lasso_membership(a, w):
    """Exact membership of the lasso ``w`` in a BA, ABA or AJA."""
    if isinstance(a, BuchiAutomaton):
        return _ba_lasso_membership(a, w)
    if isinstance(a, AltAutomaton):
        game = _alt_lasso_game(a, w)
        eve, _ = solve_parity_game(game)
        return ("s", 0, a.initial) in eve
    if isinstance(a, PDS):
        from .saturation import bpds_accepts_lasso
        return bpds_accepts_lasso(a, w)
    raise TypeError(f"no lasso membership for {type(a).__name__}")


# --------------------------------------------------------- AJA dealternation

def _resolve(moves, kind, matched):
    """Split a model of moves at one position into (next, pushed) target sets."""
    nxt, pushed = set(), set()
    for m in moves:
        if m.dir == "down":
            nxt.add(m.target)
        elif kind == "int":
            nxt.add(m.target)
        elif kind == "call" and matched:
            pushed.add(m.target)
        else:
            nxt.add(m.fallback)
    return frozenset(nxt), frozenset(pushed)


def aja_to_bvps(a, letters=None, name=None, max_heads=None):
    """Dealternate a weak AJA into a Büchi VPS over ``(props, action)`` letters.

    Control states are ``(S, O, m)``: the states of all copies reading the
    current position, the breakpoint obligations, and whether a call guessed
    to be matched is still open (``m = 1``).  At a call guessed to be matched
    the copies that jump to the matching return are pushed as a record
    ``(T, O_T, m)``; a call guessed to be unmatched pushes :data:`UNMATCHED`,
    which no return may ever pop.  Returns on :data:`BOTTOM` keep it.
    A control state is final when ``O`` is empty and ``m = 0``.
    Exploring more than ``max_heads`` heads raises :class:`UnknownAtBoundError`.
    """
    if not a.is_weak():
        raise NotWeakError(f"automaton {a.name!r} is not weak")
    if letters is None:
        letters = all_letters(a.props, a.alphabet)
    letters = tuple(letters)
    alphabet = a.alphabet
    kinds = {l: (alphabet.kind_of(l[1]) if alphabet.pushdown else "int") for l in letters}
    F = a.finals
    start = (frozenset([a.initial]), frozenset(), 0)

    cache = {}

    def moves_for(S, O, m, letter):
        key = (S, O, m, letter)
        hit = cache.get(key)
        if hit is not None:
            return hit
        src = S if (m == 0 and not O) else O
        fs = pbf.conj(a.step(q, letter) for q in S)
        fo = pbf.conj(a.step(q, letter) for q in src)
        mo = pbf.minimal_models(fo)
        pairs = [(T, TO) for T in pbf.minimal_models(fs) for TO in mo if TO <= T]
        cache[key] = pairs
        return pairs

    rules = set()
    heads = set()
    below = {}        # record -> symbols found under it
    popped = {}       # record -> control states reached by popping it
    todo = []

    def add_head(c, top):
        if (c, top) not in heads:
            if max_heads is not None and len(heads) >= max_heads:
                raise UnknownAtBoundError(
                    f"dealternation of {a.name!r} exceeded {max_heads} heads")
            heads.add((c, top))
            todo.append((c, top))

    add_head(start, BOTTOM)
    while todo:
        c, top = todo.pop()
        S, O, m = c
        for letter in letters:
            kind = kinds[letter]
            for T, TO in moves_for(S, O, m, letter):
                if kind == "int":
                    nS, _ = _resolve(T, kind, False)
                    nO, _ = _resolve(TO, kind, False)
                    c2 = (nS, nO - F, m)
                    rules.add(PDSRule(c, top, letter, c2, (top,)))
                    add_head(c2, top)
                elif kind == "ret":
                    nS, _ = _resolve(T, kind, False)
                    nO, _ = _resolve(TO, kind, False)
                    if m == 0:
                        if top != BOTTOM:
                            continue
                        c2 = (nS, nO - F, 0)
                        rules.add(PDSRule(c, top, letter, c2, (BOTTOM,)))
                        add_head(c2, BOTTOM)
                    else:
                        Ta, Oa, mp = top
                        c2 = (nS | Ta, (nO - F) | Oa, mp)
                        rules.add(PDSRule(c, top, letter, c2, ()))
                        if c2 not in popped.setdefault(top, set()):
                            popped[top].add(c2)
                            for x in below.get(top, ()):
                                add_head(c2, x)
                else:
                    # matched call
                    nS, Ta = _resolve(T, kind, True)
                    nO, Oa = _resolve(TO, kind, True)
                    rec = (Ta, Oa - F, m)
                    c2 = (nS, nO - F, 1)
                    rules.add(PDSRule(c, top, letter, c2, (rec, top)))
                    add_head(c2, rec)
                    if top not in below.setdefault(rec, set()):
                        below[rec].add(top)
                        for c3 in popped.get(rec, ()):
                            add_head(c3, top)
                    # unmatched call
                    if m == 0:
                        nS, _ = _resolve(T, kind, False)
                        nO, _ = _resolve(TO, kind, False)
                        c2 = (nS, nO - F, 0)
                        rules.add(PDSRule(c, top, letter, c2, (UNMATCHED, top)))
                        add_head(c2, UNMATCHED)
                        below.setdefault(UNMATCHED, set()).add(top)
    locations = {h[0] for h in heads} | {r.dst for r in rules}
    stack = {h[1] for h in heads} | {x for r in rules for x in r.push}
    finals = frozenset(c for c in locations if not c[1] and c[2] == 0)
    ordered = sorted(rules, key=repr)
    return PDS(name or f"bvps({a.name})", frozenset(locations), frozenset(stack),
               tuple(ordered), alphabet, initial=((start, (BOTTOM,)),),
               visibly=True, finals=finals)
