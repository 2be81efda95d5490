"""Finite-word automata over plain and pushdown alphabets.

DFA/NFA use internal rules only.  DVPA/VPA use push rules on calls, internal
rules on internals and pop rules on returns.  A pop on an empty stack is not
enabled, so the run dies; acceptance ignores the stack content.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as _cartesian

from .errors import AlphabetMismatchError, PreconditionError, UnsupportedKindError

__all__ = [
    "vpa_summaries", "append_symbol",
    "Alphabet", "Rule", "FiniteAutomaton", "fa_membership", "fa_determinize",
    "fa_complement", "fa_product", "vpa_validate", "merge_alphabets",
    "star_automaton", "sigma_automaton", "is_empty", "words_upto",
    "PLAIN_KINDS", "VP_KINDS", "REJECTED_KINDS",
]

PLAIN_KINDS = ("DFA", "NFA")
VP_KINDS = ("DVPA", "VPA")
REJECTED_KINDS = ("DPDA", "PDA")


@dataclass(frozen=True)
class Alphabet:
    """Action alphabet, optionally split into calls, internals and returns.

    A plain alphabet keeps every symbol in ``internals`` and has
    ``pushdown=False``.
    """

    calls: frozenset = frozenset()
    internals: frozenset = frozenset()
    returns: frozenset = frozenset()
    pushdown: bool = False

    def __post_init__(self):
        for name in ("calls", "internals", "returns"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if not self.pushdown and (self.calls or self.returns):
            raise ValueError("a plain alphabet has no calls or returns")
        if (self.calls & self.internals) or (self.calls & self.returns) or (
                self.internals & self.returns):
            raise ValueError("call/internal/return classes must be disjoint")

    @classmethod
    def plain(cls, symbols):
        return cls(internals=frozenset(symbols))

    @classmethod
    def visibly(cls, calls=(), internals=(), returns=()):
        return cls(frozenset(calls), frozenset(internals), frozenset(returns), True)

    @property
    def symbols(self):
        return self.calls | self.internals | self.returns

    def kind_of(self, symbol):
        if symbol in self.calls:
            return "call"
        if symbol in self.returns:
            return "ret"
        if symbol in self.internals:
            return "int"
        raise AlphabetMismatchError(f"symbol {symbol!r} is not in the alphabet")

    def sorted_symbols(self):
        return sorted(self.symbols)

    def describe(self):
        parts = [f"int={{{', '.join(sorted(self.internals))}}}"]
        if self.pushdown:
            parts.insert(0, f"call={{{', '.join(sorted(self.calls))}}}")
            parts.append(f"ret={{{', '.join(sorted(self.returns))}}}")
        return " ".join(parts)


def merge_alphabets(alphabets):
    """Combine alphabets that must agree on symbols.

    Plain alphabets are compatible with any partition of the same symbols;
    two pushdown alphabets must have the same partition.
    """
    alphabets = [a for a in alphabets if a is not None]
    if not alphabets:
        raise AlphabetMismatchError("no alphabet to merge")
    symbols = alphabets[0].symbols
    chosen = None
    for a in alphabets:
        if a.symbols != symbols:
            raise AlphabetMismatchError(
                f"alphabets differ: {sorted(symbols)} vs {sorted(a.symbols)}")
        if a.pushdown:
            if chosen is not None and chosen != a:
                raise AlphabetMismatchError(
                    f"call/return partitions differ: {chosen.describe()} vs {a.describe()}")
            chosen = a
    return chosen if chosen is not None else alphabets[0]


@dataclass(frozen=True)
class Rule:
    src: object
    symbol: str
    dst: object
    op: str = "int"        # "int", "push" or "pop"
    stack: object = None   # pushed or popped stack symbol

    def __str__(self):
        if self.op == "int":
            return f"{self.src} -{self.symbol}-> {self.dst}"
        return f"{self.src} -{self.symbol}/{self.op} {self.stack}-> {self.dst}"


@dataclass(frozen=True, eq=False)
class FiniteAutomaton:
    """Immutable finite-word automaton. Compared by identity."""

    name: str
    kind: str
    alphabet: Alphabet
    states: frozenset
    initial: object
    finals: frozenset
    rules: tuple
    stack_symbols: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "stack_symbols", frozenset(self.stack_symbols))

    def __repr__(self):
        return f"FiniteAutomaton({self.name!r}, {self.kind}, {len(self.states)} states)"

    @property
    def size(self):
        return len(self.states) + len(self.rules)

    @property
    def is_pushdown(self):
        return self.kind in VP_KINDS

    @cached_property
    def internal_index(self):
        idx = {}
        for r in self.rules:
            if r.op == "int":
                idx.setdefault((r.src, r.symbol), []).append(r.dst)
        return idx

    @cached_property
    def push_index(self):
        idx = {}
        for r in self.rules:
            if r.op == "push":
                idx.setdefault((r.src, r.symbol), []).append((r.dst, r.stack))
        return idx

    @cached_property
    def pop_index(self):
        idx = {}
        for r in self.rules:
            if r.op == "pop":
                idx.setdefault((r.src, r.symbol, r.stack), []).append(r.dst)
        return idx

    @cached_property
    def out_symbols(self):
        """state -> sorted symbols that have at least one rule from it."""
        out = {}
        for r in self.rules:
            out.setdefault(r.src, set()).add(r.symbol)
        return {q: sorted(v) for q, v in out.items()}

    def successors(self, state, symbol):
        return self.internal_index.get((state, symbol), ())

    def accepts(self, word):
        return fa_membership(self, word)


def _check_word(a, word):
    syms = a.alphabet.symbols
    for s in word:
        if s not in syms:
            raise AlphabetMismatchError(
                f"symbol {s!r} is not in the alphabet of automaton {a.name!r}")


def fa_membership(a, word):
    """True iff some run of ``a`` over ``word`` ends in a final state."""
    _check_word(a, word)
    if not a.is_pushdown:
        current = {a.initial}
        for s in word:
            current = {d for q in current for d in a.successors(q, s)}
            if not current:
                return False
        return bool(current & a.finals)
    current = {(a.initial, ())}
    for s in word:
        nxt = set()
        for q, stack in current:
            for d in a.internal_index.get((q, s), ()):
                nxt.add((d, stack))
            for d, g in a.push_index.get((q, s), ()):
                nxt.add((d, stack + (g,)))
            if stack:
                for d in a.pop_index.get((q, s, stack[-1]), ()):
                    nxt.add((d, stack[:-1]))
        current = nxt
        if not current:
            return False
    return any(q in a.finals for q, _ in current)


def _subset_name(members):
    return tuple(sorted(members, key=repr))


def fa_determinize(a, name=None):
    """Reachable subset construction; subset states are sorted tuples."""
    if a.kind not in PLAIN_KINDS:
        raise UnsupportedKindError(f"cannot determinise {a.kind} automaton {a.name!r}")
    symbols = a.alphabet.sorted_symbols()
    start = _subset_name({a.initial})
    states = {start}
    rules = []
    todo = [start]
    while todo:
        cur = todo.pop()
        for s in symbols:
            nxt = _subset_name({d for q in cur for d in a.successors(q, s)})
            if not nxt:
                continue
            rules.append(Rule(cur, s, nxt))
            if nxt not in states:
                states.add(nxt)
                todo.append(nxt)
    finals = {S for S in states if any(q in a.finals for q in S)}
    return FiniteAutomaton(name or f"det({a.name})", "DFA", a.alphabet, states,
                           start, finals, sorted(rules, key=repr))


def fa_complement(a, name=None):
    """Complement of a deterministic plain automaton; a sink completes it."""
    if a.kind != "DFA" or vpa_validate(a):
        raise PreconditionError(f"complement needs a valid DFA, got {a.kind} {a.name!r}")
    symbols = a.alphabet.sorted_symbols()
    sink = "__sink"
    while sink in a.states:
        sink += "_"
    rules = list(a.rules)
    need_sink = False
    for q in sorted(a.states, key=repr):
        for s in symbols:
            if not a.successors(q, s):
                rules.append(Rule(q, s, sink))
                need_sink = True
    states = set(a.states)
    if need_sink:
        states.add(sink)
        rules.extend(Rule(sink, s, sink) for s in symbols)
    return FiniteAutomaton(name or f"not({a.name})", "DFA", a.alphabet, states,
                           a.initial, states - set(a.finals), rules)


def fa_product(a, b, name=None):
    """Intersection of two plain automata, reachable pairs only."""
    for x in (a, b):
        if x.kind not in PLAIN_KINDS:
            raise UnsupportedKindError(f"product needs DFA/NFA, got {x.kind} {x.name!r}")
    if a.alphabet.symbols != b.alphabet.symbols:
        raise AlphabetMismatchError(f"alphabets of {a.name!r} and {b.name!r} differ")
    symbols = a.alphabet.sorted_symbols()
    start = (a.initial, b.initial)
    states = {start}
    rules = []
    todo = [start]
    while todo:
        p, q = todo.pop()
        for s in symbols:
            for p2 in a.successors(p, s):
                for q2 in b.successors(q, s):
                    rules.append(Rule((p, q), s, (p2, q2)))
                    if (p2, q2) not in states:
                        states.add((p2, q2))
                        todo.append((p2, q2))
    kind = "DFA" if a.kind == b.kind == "DFA" else "NFA"
    finals = {(p, q) for p, q in states if p in a.finals and q in b.finals}
    return FiniteAutomaton(name or f"({a.name}x{b.name})", kind, a.alphabet,
                           states, start, finals, rules)


def is_empty(a):
    """Language emptiness of a plain automaton by forward search."""
    if a.kind not in PLAIN_KINDS:
        raise UnsupportedKindError("emptiness is implemented for DFA/NFA only")
    seen = {a.initial}
    todo = [a.initial]
    while todo:
        q = todo.pop()
        if q in a.finals:
            return False
        for r in a.rules:
            if r.src == q and r.dst not in seen:
                seen.add(r.dst)
                todo.append(r.dst)
    return True


def append_symbol(a, symbol, name=None):
    """Plain automaton for ``L(a) . symbol`` over the alphabet extended by ``symbol``."""
    if a.kind not in PLAIN_KINDS:
        raise UnsupportedKindError(f"append_symbol needs a DFA or NFA, got {a.kind}")
    if symbol in a.alphabet.symbols:
        raise PreconditionError(f"{symbol!r} must be fresh for the alphabet")
    end = "__end"
    while end in a.states:
        end += "_"
    rules = list(a.rules) + [Rule(q, symbol, end) for q in sorted(a.finals, key=repr)]
    alphabet = Alphabet.plain(a.alphabet.symbols | {symbol})
    return FiniteAutomaton(name or f"{a.name}^", a.kind, alphabet, a.states | {end},
                           a.initial, frozenset([end]), tuple(rules))


def vpa_summaries(a):
    """Pairs ``(q, q2)`` such that some well-matched word leads from ``q`` to ``q2``."""
    wm = {(q, q) for q in a.states}
    pops = {}
    for r in a.rules:
        if r.op == "pop":
            pops.setdefault(r.stack, []).append((r.src, r.dst))
    changed = True
    while changed:
        changed = False
        new = set()
        for r in a.rules:
            if r.op == "int":
                new.add((r.src, r.dst))
            elif r.op == "push":
                for q1, q2 in pops.get(r.stack, ()):
                    if (r.dst, q1) in wm:
                        new.add((r.src, q2))
        for q, q1 in list(wm):
            for q1b, q2 in list(wm | new):
                if q1 == q1b:
                    new.add((q, q2))
        if not new <= wm:
            wm |= new
            changed = True
    return wm


def vpa_validate(a):
    """Structural violations of ``a`` as human-readable strings."""
    out = []
    if a.kind in REJECTED_KINDS:
        out.append(f"kind {a.kind} is not supported as a modality parameter")
        return out
    if a.kind not in PLAIN_KINDS + VP_KINDS:
        out.append(f"unknown kind {a.kind}")
        return out
    if a.initial not in a.states:
        out.append(f"initial state {a.initial!r} not declared")
    for f in sorted(a.finals - a.states, key=repr):
        out.append(f"final state {f!r} not declared")
    seen = {}
    for r in a.rules:
        if r.src not in a.states or r.dst not in a.states:
            out.append(f"rule {r}: undeclared state")
        if r.symbol not in a.alphabet.symbols:
            out.append(f"rule {r}: symbol not in alphabet")
            continue
        if a.kind in PLAIN_KINDS:
            if r.op != "int":
                out.append(f"rule {r}: {a.kind} allows internal rules only")
        else:
            expected = {"call": "push", "int": "int", "ret": "pop"}[a.alphabet.kind_of(r.symbol)]
            if r.op != expected:
                out.append(f"rule {r}: symbol class requires a {expected} rule")
            if r.op in ("push", "pop") and r.stack not in a.stack_symbols:
                out.append(f"rule {r}: undeclared stack symbol {r.stack!r}")
        if a.kind in ("DFA", "DVPA"):
            key = (r.src, r.symbol, r.stack if r.op == "pop" else None)
            if key in seen and seen[key] != r:
                out.append(f"rule {r}: nondeterministic with {seen[key]}")
            seen.setdefault(key, r)
    return out


def star_automaton(alphabet, name="*"):
    """One accepting state looping on every symbol: the language of all words."""
    rules = [Rule("s", x, "s") for x in alphabet.sorted_symbols()]
    return FiniteAutomaton(name, "DFA", Alphabet.plain(alphabet.symbols), {"s"}, "s",
                           {"s"}, rules)


def sigma_automaton(alphabet, name="."):
    """Exactly the one-letter words."""
    rules = [Rule("s", x, "t") for x in alphabet.sorted_symbols()]
    return FiniteAutomaton(name, "DFA", Alphabet.plain(alphabet.symbols), {"s", "t"},
                           "s", {"t"}, rules)


def words_upto(symbols, n):
    """All words over ``symbols`` of length at most ``n``, shortest first."""
    symbols = sorted(symbols)
    for k in range(n + 1):
        yield from _cartesian(symbols, repeat=k)
