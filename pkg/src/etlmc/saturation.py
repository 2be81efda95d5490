"""pre* saturation and Büchi acceptance for pushdown systems.

Regular sets of configurations are :class:`ConfigNFA` (P-automata): an NFA
over stack symbols with one start state per control location; ``(p, w)`` is
accepted when ``w``, read top first, leads from the start state of ``p`` to a
final state.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .pushdown import BOTTOM, PDS, PDSRule

__all__ = [
    "ConfigNFA", "prestar", "pop_summaries", "repeating_heads",
    "bpds_accepting_configs", "bpds_accepts_lasso", "heads_automaton",
    "configs_automaton",
]


@dataclass
class ConfigNFA:
    """``start`` maps control locations to NFA states."""

    start: dict
    transitions: dict = field(default_factory=dict)   # state -> symbol -> set
    finals: set = field(default_factory=set)

    def add(self, s, symbol, t):
        dsts = self.transitions.setdefault(s, {}).setdefault(symbol, set())
        if t in dsts:
            return False
        dsts.add(t)
        return True

    def edges(self):
        for s, m in self.transitions.items():
            for g, dsts in m.items():
                for t in dsts:
                    yield s, g, t

    @property
    def states(self):
        out = set(self.start.values()) | set(self.finals)
        for s, g, t in self.edges():
            out.add(s)
            out.add(t)
        return out

    def post(self, states, symbol):
        out = set()
        for s in states:
            out |= self.transitions.get(s, {}).get(symbol, set())
        return out

    def accepts(self, config):
        p, w = config
        if p not in self.start:
            return False
        cur = {self.start[p]}
        for g in w:
            cur = self.post(cur, g)
            if not cur:
                return False
        return bool(cur & self.finals)

    def is_deterministic(self):
        return all(len(d) <= 1 for m in self.transitions.values() for d in m.values())

    def copy(self):
        t = {s: {g: set(d) for g, d in m.items()} for s, m in self.transitions.items()}
        return ConfigNFA(dict(self.start), t, set(self.finals))

    def dump(self, name="certificate", show=repr):
        """Text form in the automaton file format, one block per location.
        Locations, states and unprintable stack symbols get short names that
        are listed in trailing comments."""
        names, syms = {}, {}

        def nm(s):
            if s not in names:
                names[s] = f"n{len(names)}"
            return names[s]

        def sym(g):
            if g not in syms:
                text = "_|_" if g == BOTTOM else show(g)
                syms[g] = text if _SAFE.match(text) else f"g{len(syms)}"
            return syms[g]

        for s in sorted(self.states, key=repr):
            nm(s)
        symbols = sorted({g for _, g, _ in self.edges()}, key=repr)
        lines = []
        locs = sorted(self.start, key=repr)
        for i, p in enumerate(locs):
            lines.append(f"automaton {name}_l{i} kind=NFA")
            lines.append(f"alphabet int={{{', '.join(sym(g) for g in symbols)}}}")
            lines.append(f"states {{{', '.join(nm(s) for s in sorted(self.states, key=repr))}}}")
            lines.append(f"initial {nm(self.start[p])}")
            lines.append(f"final {{{', '.join(nm(s) for s in sorted(self.finals, key=repr))}}}")
            for s, g, t in sorted(self.edges(), key=repr):
                lines.append(f"{nm(s)} -{sym(g)}-> {nm(t)}")
            lines.append("")
        plain = lambda x: show(x).replace(BOTTOM, "_|_")  # keep the file ASCII-safe
        lines.append("# locations:")
        lines += [f"#   l{i} = {plain(p)}" for i, p in enumerate(locs)]
        lines.append("# states:")
        lines += [f"#   {n} = {plain(s)}" for s, n in names.items()]
        renamed = [(t, g) for g, t in syms.items() if t != ("_|_" if g == BOTTOM else show(g))]
        if renamed:
            lines.append("# stack symbols:")
            lines += [f"#   {t} = {plain(g)}" for t, g in renamed]
        return "\n".join(lines) + "\n"


_SAFE = re.compile(r"^[^\s{},()/#]+$")


def heads_automaton(pds, heads, final_tag="#acc"):
    """ConfigNFA for ``{(p, g w) : (p, g) in heads, w arbitrary}``."""
    nfa = ConfigNFA({p: ("#start", p) for p in pds.locations})
    nfa.finals.add(final_tag)
    for p, g in heads:
        nfa.add(("#start", p), g, final_tag)
    for g in pds.stack:
        nfa.add(final_tag, g, final_tag)
    return nfa


def configs_automaton(pds, configs):
    """ConfigNFA accepting exactly the listed configurations."""
    nfa = ConfigNFA({p: ("#start", p) for p in pds.locations})
    for k, (p, w) in enumerate(configs):
        cur = ("#start", p)
        for i, g in enumerate(w):
            nxt = ("#c", k, i)
            nfa.add(cur, g, nxt)
            cur = nxt
        nfa.finals.add(cur)
    return nfa


def prestar(pds, target):
    """Saturate ``target`` into an automaton for pre*(target).

    Classic worklist saturation: a rule ``(p, g) -> (p2, w)`` adds the edge
    ``start(p) -g-> q`` whenever ``w`` leads from ``start(p2)`` to ``q``.
    """
    nfa = target.copy()
    start = nfa.start
    for p in pds.locations:
        start.setdefault(p, ("#start", p))
    rel = set()
    trans = deque(nfa.edges())
    # reset, edges are re-added as they leave the worklist
    nfa.transitions = {}
    # index rules by the head they produce
    by_dst1 = {}    # (p2, g2) -> rules with |w| = 1
    by_dst2 = {}    # (p2, g1) -> rules with |w| = 2
    for r in pds.rules:
        if len(r.push) == 0:
            trans.append((start[r.src], r.top, start[r.dst]))
        elif len(r.push) == 1:
            by_dst1.setdefault((start[r.dst], r.push[0]), []).append(r)
        elif len(r.push) == 2:
            by_dst2.setdefault((start[r.dst], r.push[0]), []).append(r)
        else:
            raise ValueError(f"rule {r} pushes more than two symbols; normalise first")
    derived = {}    # (q, g2) -> list of src heads waiting for an edge q -g2->
    out_edges = {}  # (q, g) -> set of targets, mirror of rel
    while trans:
        t = trans.popleft()
        if t in rel:
            continue
        rel.add(t)
        q, g, q2 = t
        nfa.add(q, g, q2)
        out_edges.setdefault((q, g), set()).add(q2)
        for r in by_dst1.get((q, g), ()):
            trans.append((start[r.src], r.top, q2))
        for r in by_dst2.get((q, g), ()):
            key = (q2, r.push[1])
            derived.setdefault(key, []).append((start[r.src], r.top))
            for q3 in out_edges.get(key, ()):
                trans.append((start[r.src], r.top, q3))
        for src, top in derived.get((q, g), ()):
            trans.append((src, top, q2))
    return nfa


def pop_summaries(pds):
    """Map ``(p, g, p2) -> flag``: from ``(p, g)`` the top can be fully popped
    reaching ``p2``; the flag says some such run visits a final location
    (the location ``p2`` reached at the end excluded).
    """
    finals = pds.finals or frozenset()
    summ = {}
    by_pop_head = {}   # (p, g) -> summaries from that head, for lookups
    todo = deque()
    waiting1 = {}      # (p1, g1) -> rules (p,g)->(p1,g1)
    waiting2a = {}     # (p1, g1) -> rules (p,g)->(p1,g1 g2)
    waiting2b = {}     # (mid, g2) -> list of (p, g, flag) awaiting second pop

    def offer(p, g, p2, b):
        key = (p, g, p2)
        old = summ.get(key)
        if old is None or (b and not old):
            summ[key] = b
            by_pop_head.setdefault((p, g), {})[p2] = b
            todo.append((p, g, p2, b))

    for r in pds.rules:
        here = r.src in finals
        if len(r.push) == 0:
            offer(r.src, r.top, r.dst, here)
        elif len(r.push) == 1:
            waiting1.setdefault((r.dst, r.push[0]), []).append(r)
        else:
            waiting2a.setdefault((r.dst, r.push[0]), []).append(r)
    while todo:
        p1, g1, p2, b = todo.popleft()
        if summ.get((p1, g1, p2)) != b:
            continue
        for r in waiting1.get((p1, g1), ()):
            offer(r.src, r.top, p2, b or r.src in finals)
        for r in waiting2a.get((p1, g1), ()):
            flag = b or r.src in finals
            entry = (r.src, r.top, flag)
            lst = waiting2b.setdefault((p2, r.push[1]), [])
            if entry not in lst:
                lst.append(entry)
            for p3, b2 in list(by_pop_head.get((p2, r.push[1]), {}).items()):
                offer(r.src, r.top, p3, flag or b2)
        for src, top, flag in list(waiting2b.get((p1, g1), ())):
            offer(src, top, p2, flag or b)
    return summ


def repeating_heads(pds):
    """Heads from which a run can return to themselves through a final location,
    growing the stack by any amount.

    Built on the head graph: an edge ``(p,g) -> (p2,g2)`` for every rule
    rewriting to ``g2`` or pushing ``g2`` on top, and ``(p,g) -> (p3,g3)``
    when a pushed top ``g1`` can be fully popped reaching ``p3`` with ``g3``
    exposed.  Edges carry a flag for visiting a final location.
    """
    finals = pds.finals or frozenset()
    summ = pop_summaries(pds)
    by_head = {}
    for (p, g, p2), b in summ.items():
        by_head.setdefault((p, g), []).append((p2, b))
    g = nx.DiGraph()
    for r in pds.rules:
        h = (r.src, r.top)
        here = r.src in finals
        g.add_node(h)
        if len(r.push) >= 1:
            _flag_edge(g, h, (r.dst, r.push[0]), here)
        if len(r.push) == 2:
            for p3, b in by_head.get((r.dst, r.push[0]), ()):
                _flag_edge(g, h, (p3, r.push[1]), here or b)
    out = set()
    for comp in nx.strongly_connected_components(g):
        sub = g.subgraph(comp)
        for u, v, data in sub.edges(data=True):
            if data["flag"]:
                out |= comp
                break
    return out


def _flag_edge(g, u, v, flag):
    if g.has_edge(u, v):
        g[u][v]["flag"] = g[u][v]["flag"] or flag
    else:
        g.add_edge(u, v, flag=flag)


def bpds_accepting_configs(pds):
    """ConfigNFA of the configurations with an accepting run."""
    heads = repeating_heads(pds)
    return prestar(pds, heads_automaton(pds, heads))


def bpds_accepts_lasso(bp, w):
    """Does the Büchi pushdown acceptor ``bp`` accept the lasso word ``w``?

    The lasso is turned into a one-path system and synchronised with ``bp``;
    acceptance is then decided by saturation.
    """
    rules = []
    n = len(w)
    for (c, top), rs in bp.rules_from.items():
        for r in rs:
            for i in range(n):
                if r.label == w[i]:
                    rules.append(PDSRule((i, r.src), top, r.label, (w.norm(i + 1), r.dst), r.push))
    locs = {(i, c) for i in range(n) for c in bp.locations}
    finals = {(i, c) for i, c in locs if c in bp.finals}
    prod = PDS(f"{bp.name}|lasso", locs, bp.stack, rules, bp.alphabet,
               initial=[((0, p), w0) for p, w0 in bp.initial], visibly=bp.visibly,
               finals=finals)
    acc = bpds_accepting_configs(prod)
    return any(acc.accepts(c) for c in prod.initial)
