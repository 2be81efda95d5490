"""Zielonka's recursive algorithm for finite parity games.

Vertices are arbitrary hashable objects.  Player 0 (Eve) wins a play when the
*smallest* priority seen infinitely often is even.  Internally priorities are
flipped to the max convention, which is what the textbook recursion uses.
Every vertex must have at least one successor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import sys

__all__ = ["ParityGame", "solve_parity_game"]


@dataclass
class ParityGame:
    owner: dict = field(default_factory=dict)      # vertex -> 0 or 1
    priority: dict = field(default_factory=dict)   # vertex -> int (min-parity)
    succ: dict = field(default_factory=dict)       # vertex -> list of vertices

    def add(self, v, owner, priority, successors):
        self.owner[v] = owner
        self.priority[v] = priority
        self.succ[v] = list(successors)

    def check(self):
        for v, out in self.succ.items():
            if not out:
                raise ValueError(f"vertex {v!r} has no successor")
            for w in out:
                if w not in self.owner:
                    raise ValueError(f"edge to unknown vertex {w!r}")


def _attractor(target, player, arena, owner, succ, pred):
    attr = set(target)
    count = {}
    todo = list(target)
    while todo:
        v = todo.pop()
        for u in pred.get(v, ()):
            if u not in arena or u in attr:
                continue
            if owner[u] == player:
                attr.add(u)
                todo.append(u)
            else:
                if u not in count:
                    count[u] = sum(1 for w in succ[u] if w in arena)
                count[u] -= 1
                if count[u] == 0:
                    attr.add(u)
                    todo.append(u)
    return attr


def _zielonka(arena, owner, prio, succ, pred):
    if not arena:
        return set(), set()
    top = max(prio[v] for v in arena)
    player = top % 2
    opponent = 1 - player
    target = {v for v in arena if prio[v] == top}
    a = _attractor(target, player, arena, owner, succ, pred)
    w = _zielonka(arena - a, owner, prio, succ, pred)
    if not w[opponent]:
        won = [set(), set()]
        won[player] = set(arena)
        return won[0], won[1]
    b = _attractor(w[opponent], opponent, arena, owner, succ, pred)
    w2 = _zielonka(arena - b, owner, prio, succ, pred)
    won = [set(w2[0]), set(w2[1])]
    won[opponent] |= b
    return won[0], won[1]


def solve_parity_game(game):
    """Return (eve_wins, adam_wins) as vertex sets."""
    game.check()
    top = max(game.priority.values(), default=0)
    shift = top + (top % 2)
    prio = {v: shift - p for v, p in game.priority.items()}
    pred = {}
    for v, out in game.succ.items():
        for w in out:
            pred.setdefault(w, []).append(v)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10000))
    try:
        return _zielonka(set(game.owner), game.owner, prio, game.succ, pred)
    finally:
        sys.setrecursionlimit(limit)
