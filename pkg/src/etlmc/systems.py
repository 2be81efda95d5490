"""System models: finite KTS and (visibly) pushdown systems.

Traces are sequences of letters ``(props, action)``: the labelling of the
current state (or head) together with the action taken from it.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

from .automata import Alphabet
from .errors import CITE_VPL_PDS, PreconditionError, UndecidableFragmentError
from .omega import BuchiAutomaton, LassoWord
from .pushdown import BOTTOM, PDS, PDSRule, is_bottom

__all__ = [
    "KTS", "PDS", "PDSRule", "validate_system", "pds_normalize",
    "universal_generator", "synchronize_product", "kts_paths", "lasso_trace",
    "KTS_STACK",
]

KTS_STACK = "#"


@dataclass(frozen=True, eq=False)
class KTS:
    """Finite Kripke transition system with an initial state."""

    name: str
    states: tuple
    alphabet: Alphabet
    transitions: tuple          # (s, a, s2)
    labels: dict
    initial: object
    props: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if not self.props:
            ps = set()
            for v in self.labels.values():
                ps |= set(v)
            object.__setattr__(self, "props", frozenset(ps))

    def __repr__(self):
        return f"KTS({self.name!r}, {len(self.states)} states, {len(self.transitions)} transitions)"

    @cached_property
    def out(self):
        idx = {s: [] for s in self.states}
        for s, a, t in self.transitions:
            idx.setdefault(s, []).append((a, t))
        return idx

    def label(self, s):
        return frozenset(self.labels.get(s, ()))

    def with_initial(self, s):
        return replace(self, initial=s)

    def relabel(self, extra):
        """Copy with ``extra[s]`` propositions added to each state's label."""
        labels = {s: self.label(s) | frozenset(extra.get(s, ())) for s in self.states}
        props = self.props | frozenset(p for v in extra.values() for p in v)
        return replace(self, labels=labels, props=props)

    @property
    def letters(self):
        return sorted({(self.label(s), a) for s, a, _ in self.transitions}, key=repr)

    @property
    def size(self):
        return len(self.states) + len(self.transitions)


def validate_system(sys):
    """Totality, arity and visibly violations as strings."""
    out = []
    if isinstance(sys, KTS):
        if sys.initial not in sys.states:
            out.append(f"initial state {sys.initial!r} not declared")
        for s, a, t in sys.transitions:
            if s not in sys.states or t not in sys.states:
                out.append(f"transition {s} -{a}-> {t}: undeclared state")
            if a not in sys.alphabet.symbols:
                out.append(f"transition {s} -{a}-> {t}: action not in alphabet")
        for s in sys.states:
            if not sys.out.get(s):
                out.append(f"state {s!r} has no successor (totality)")
        return out
    for r in sys.rules:
        if len(r.push) > 2:
            out.append(f"rule {r}: pushes {len(r.push)} symbols (at most 2 allowed)")
        if r.src not in sys.locations or r.dst not in sys.locations:
            out.append(f"rule {r}: undeclared control location")
        for g in (r.top,) + tuple(r.push):
            if g not in sys.stack:
                out.append(f"rule {r}: undeclared stack symbol {g!r}")
        action = r.label[1] if isinstance(r.label, tuple) else r.label
        if action not in sys.alphabet.symbols:
            out.append(f"rule {r}: action {action!r} not in alphabet")
        elif sys.visibly:
            kind = sys.alphabet.kind_of(action)
            want = {"call": 2, "int": 1, "ret": 0}[kind]
            if len(r.push) != want and not (kind == "ret" and is_bottom(r.top)):
                out.append(f"rule {r}: {kind} action needs a body of length {want}")
    if not sys.is_buchi:
        for p in sorted(sys.locations, key=repr):
            for g in sorted(sys.stack, key=repr):
                if not sys.rules_from.get((p, g)):
                    out.append(f"head ({p},{g}) has no rule (totality)")
    for p, w in sys.initial:
        if p not in sys.locations:
            out.append(f"initial configuration ({p},{' '.join(map(str, w))}): unknown location")
    return out


def pds_normalize(pds):
    """Split rules pushing more than two symbols through fresh locations.

    A rule ``(p,g) -a-> (p2, g1 ... gn)`` with ``n > 2`` becomes
    ``(p,g) -a-> (f1, g_{n-1} gn)`` followed by silent rules
    ``(f_i, x) -τ-> (f_{i+1}, g x)`` that push the remaining symbols.
    Fresh heads that are never reached get silent self-loops to keep the
    system total.
    """
    if all(len(r.push) <= 2 for r in pds.rules):
        return pds
    tau = "τ"
    while tau in pds.alphabet.symbols:
        tau += "'"
    rules = []
    locations = set(pds.locations)
    fresh_locs = []
    counter = 0
    for r in pds.rules:
        if len(r.push) <= 2:
            rules.append(r)
            continue
        w = tuple(r.push)
        # the deepest two symbols go first, then one symbol per silent step
        chain = []
        for _ in range(len(w) - 2):
            counter += 1
            f = ("#f", counter)
            while f in locations:
                counter += 1
                f = ("#f", counter)
            locations.add(f)
            fresh_locs.append(f)
            chain.append(f)
        rules.append(PDSRule(r.src, r.top, r.label, chain[0], w[-2:]))
        for k, f in enumerate(chain):
            pushed = w[len(w) - 3 - k]
            nxt = chain[k + 1] if k + 1 < len(chain) else r.dst
            below = w[len(w) - 2 - k]
            rules.append(PDSRule(f, below, tau, nxt, (pushed, below)))
    have = {(r.src, r.top) for r in rules}
    for f in fresh_locs:
        for g in sorted(pds.stack, key=repr):
            if (f, g) not in have:
                rules.append(PDSRule(f, g, tau, f, (g,)))
    alphabet = Alphabet(pds.alphabet.calls, pds.alphabet.internals | {tau},
                        pds.alphabet.returns, pds.alphabet.pushdown)
    return PDS(pds.name, locations, pds.stack, rules, alphabet, pds.initial,
               dict(pds.labels), visibly=False, finals=pds.finals,
               silent=frozenset(pds.silent) | {tau})


def universal_generator(sigma, t_hat="t^", end_prop="end"):
    """Two states: q0 loops on every symbol of ``sigma`` and moves to q1 on
    ``t_hat``; q1 loops on ``t_hat`` and is labelled ``end_prop``.
    """
    if t_hat in sigma.symbols:
        raise PreconditionError(f"{t_hat!r} must be fresh for the alphabet")
    trans = [("q0", a, "q0") for a in sigma.sorted_symbols()]
    trans += [("q0", t_hat, "q1"), ("q1", t_hat, "q1")]
    alphabet = Alphabet.plain(sigma.symbols | {t_hat})
    return KTS("universal", ("q0", "q1"), alphabet, trans,
               {"q0": frozenset(), "q1": frozenset({end_prop})}, "q0",
               props=frozenset({end_prop}))


def kts_paths(kts, depth, start=None):
    """All state/action sequences of ``depth`` steps from ``start``."""
    s0 = kts.initial if start is None else start
    paths = [((s0,), ())]
    for _ in range(depth):
        nxt = []
        for states, acts in paths:
            for a, t in kts.out.get(states[-1], ()):
                nxt.append((states + (t,), acts + (a,)))
        paths = nxt
    return paths


def lasso_trace(kts, stem_states, stem_actions, loop_states, loop_actions):
    """Trace of a KTS lasso path as a :class:`LassoWord` of letters."""
    stem = [(kts.label(s), a) for s, a in zip(stem_states, stem_actions)]
    loop = [(kts.label(s), a) for s, a in zip(loop_states, loop_actions)]
    return LassoWord(stem, loop)


# ------------------------------------------------------------------ products

def _acceptor_rule_kind(r):
    return len(r.push)


def synchronize_product(sys, acc):
    """Büchi pushdown system whose accepting runs are the runs of ``sys``
    whose trace ``acc`` accepts.

    Legal pairs: KTS × BA, KTS × BVPS, VPS × BA, VPS × BVPS (same partition),
    PDS × BA.  A KTS contributes a single never-popped stack symbol.
    """
    if isinstance(acc, BuchiAutomaton):
        if isinstance(sys, KTS):
            return _kts_x_ba(sys, acc)
        return _pds_x_ba(sys, acc)
    if not isinstance(acc, PDS) or not acc.is_buchi:
        raise TypeError(f"cannot synchronise with {acc!r}")
    if isinstance(sys, KTS):
        return _kts_x_bvps(sys, acc)
    if not sys.visibly:
        raise UndecidableFragmentError(CITE_VPL_PDS)
    if sys.alphabet != acc.alphabet and acc.alphabet.pushdown:
        if (sys.alphabet.calls, sys.alphabet.returns) != (acc.alphabet.calls, acc.alphabet.returns):
            raise UndecidableFragmentError(
                CITE_VPL_PDS + "; the call/return partitions of system and formula differ")
    return _vps_x_bvps(sys, acc)


def _kts_x_ba(kts, ba):
    rules = []
    locs = set()
    start = (kts.initial, ba.initial)
    todo = [start]
    locs.add(start)
    while todo:
        s, q = todo.pop()
        lab = kts.label(s)
        for a, t in kts.out.get(s, ()):
            for q2 in ba.post(q, (lab, a)):
                rules.append(PDSRule((s, q), KTS_STACK, a, (t, q2), (KTS_STACK,)))
                if (t, q2) not in locs:
                    locs.add((t, q2))
                    todo.append((t, q2))
    finals = {(s, q) for s, q in locs if q in ba.finals}
    labels = {((s, q), KTS_STACK): kts.label(s) for s, q in locs}
    return PDS(f"{kts.name}x{ba.name}", locs, {KTS_STACK}, rules, kts.alphabet,
               initial=[(start, (KTS_STACK,))], labels=labels, finals=finals)


def _pds_x_ba(pds, ba):
    rules = []
    locs = set()
    for (p, g), rs in pds.rules_from.items():
        lab = pds.label_of((p, g))
        for r in rs:
            for q in ba.states:
                for q2 in ba.post(q, (lab, r.label)):
                    rules.append(PDSRule((p, q), g, r.label, (r.dst, q2), r.push))
                    locs.add((p, q))
                    locs.add((r.dst, q2))
    locs |= {(p, ba.initial) for p in pds.locations}
    finals = {(p, q) for p, q in locs if q in ba.finals}
    labels = {((p, q), g): lab for (p, g), lab in pds.labels.items() for q in ba.states}
    initial = [((p, ba.initial), w) for p, w in pds.initial]
    return PDS(f"{pds.name}x{ba.name}", locs, pds.stack, rules, pds.alphabet,
               initial=initial, labels=labels, visibly=pds.visibly, finals=finals)


def _kts_x_bvps(kts, bp):
    rules = []
    locs = set()
    by_label = {}
    for r in bp.rules:
        by_label.setdefault((r.src, r.label), []).append(r)
    (c0, w0), = bp.initial
    start = (kts.initial, c0)
    locs.add(start)
    todo = [start]
    while todo:
        s, c = todo.pop()
        lab = kts.label(s)
        for a, t in kts.out.get(s, ()):
            for r in by_label.get((c, (lab, a)), ()):
                rules.append(PDSRule((s, c), r.top, a, (t, r.dst), r.push))
                if (t, r.dst) not in locs:
                    locs.add((t, r.dst))
                    todo.append((t, r.dst))
    finals = {(s, c) for s, c in locs if c in bp.finals}
    return PDS(f"{kts.name}x{bp.name}", locs, bp.stack, rules, kts.alphabet,
               initial=[(start, w0)], visibly=False, finals=finals)


def _vps_x_bvps(vps, bp):
    """Stacks are paired symbol by symbol; system symbols below the
    acceptor's start are paired with the acceptor's bottom."""
    by_head = {}
    for r in bp.rules:
        by_head.setdefault((r.src, r.top, r.label), []).append(r)
    (c0, w0), = bp.initial
    rules = []
    locs = set()
    stack = set()
    tops = {(g, BOTTOM) for g in vps.stack}
    todo = list(tops)
    stack |= tops
    # explore pairs of stack symbols reachable by synchronised pushes
    acc_states = set(bp.locations)
    while todo:
        g, b = todo.pop()
        for p in vps.locations:
            lab = vps.label_of((p, g))
            for r in vps.rules_from.get((p, g), ()):
                letter = (lab, r.label)
                for c in acc_states:
                    for ar in by_head.get((c, b, letter), ()):
                        body = _pair_body(r.push, ar.push)
                        if body is None:
                            continue
                        rules.append(PDSRule((p, c), (g, b), r.label, (r.dst, ar.dst), body))
                        locs.add((p, c))
                        locs.add((r.dst, ar.dst))
                        for x in body:
                            if x not in stack:
                                stack.add(x)
                                todo.append(x)
    locs |= {(p, c0) for p in vps.locations}
    finals = {(p, c) for p, c in locs if c in bp.finals}
    labels = {((p, c), (g, b)): vps.label_of((p, g)) for p, c in locs for g, b in stack}
    initial = [((p, c0), tuple((g, BOTTOM) for g in w)) for p, w in vps.initial]
    return PDS(f"{vps.name}x{bp.name}", locs, stack, rules, vps.alphabet,
               initial=initial, labels=labels, visibly=True, finals=finals)


def _pair_body(sys_push, acc_push):
    """Pair system and acceptor rule bodies of matching shape.

    A return of the acceptor on its bottom keeps the bottom; paired with a
    system pop it becomes a plain pop (the symbol below is paired with the
    bottom again).
    """
    if len(sys_push) == 0:
        if len(acc_push) == 0 or acc_push == (BOTTOM,):
            return ()
        return None
    if len(sys_push) != len(acc_push):
        return None
    return tuple(zip(sys_push, acc_push))
