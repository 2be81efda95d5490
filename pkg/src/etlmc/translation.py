"""Compile LTL[U] formulas into alternating automata.

* :func:`ltl_reg_to_aba`: NNF formulas with DFA/NFA parameters into an ABA
  with linearly many states;
* :func:`ltl_vpl_to_aja`: any quantifier-free formula (negation by
  dualisation) into an AJA with quadratically many states.  VPA parameters
  are simulated with jumps: a copy guessing that a call is matched jumps to
  the matching return, while a verification copy checks the VPA path across
  the call.

Every state is named by a string; states of the subautomaton for the
subformula with index ``k`` start with ``n<k>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import pbf
from .automata import (Alphabet, PLAIN_KINDS, VP_KINDS,
                       sigma_automaton, star_automaton, vpa_summaries)
from .errors import PreconditionError, UnsupportedKindError
from .logic import (SIGMA, STAR, And, Atom, Const, Exists, Not, Or, Release,
                    Until, formula_size, is_nnf)
from .omega import AltAutomaton, Move, down, downa, stay

__all__ = ["ltl_reg_to_aba", "ltl_vpl_to_aja", "materialise", "size_report",
           "LINEAR_CONSTANT", "QUADRATIC_CONSTANT"]

LINEAR_CONSTANT = 10
QUADRATIC_CONSTANT = 10


def materialise(param, alphabet):
    """The automaton behind a modality parameter."""
    if param is STAR:
        return star_automaton(alphabet)
    if param is SIGMA:
        return sigma_automaton(alphabet)
    return param


@dataclass
class _Builder:
    props: frozenset
    alphabet: Alphabet
    inclusive: bool = False
    delta: dict = field(default_factory=dict)
    colour: dict = field(default_factory=dict)
    order: list = field(default_factory=list)
    memo: dict = field(default_factory=dict)
    counter: int = 0

    def fresh(self):
        self.counter += 1
        return f"n{self.counter}"

    def add(self, name, formula, colour):
        if name not in self.delta:
            self.order.append(name)
        self.delta[name] = formula
        self.colour[name] = colour

    # shared cases ---------------------------------------------------------
    def atomic(self, f, build):
        if isinstance(f, Atom):
            q = self.fresh()
            self.add(q, pbf.has(f.name), 0)
            return q
        if isinstance(f, Not) and isinstance(f.arg, Atom):
            q = self.fresh()
            self.add(q, pbf.lacks(f.arg.name), 0)
            return q
        if isinstance(f, Const):
            q = self.fresh()
            self.add(q, pbf.TRUE if f.value else pbf.FALSE, 0)
            return q
        if isinstance(f, (And, Or)):
            l, r = build(f.left), build(f.right)
            q = self.fresh()
            join = pbf.conj if isinstance(f, And) else pbf.disj
            self.add(q, join(stay(l), stay(r)), 0)
            return q
        if isinstance(f, Exists):
            raise PreconditionError("quantified subformulas must be replaced by "
                                    "propositions before translation")
        return None

    # plain parameters -------------------------------------------------------
    def until_plain(self, aut, q1, q2):
        k = self.fresh()
        name = {s: f"{k}:{s}" for s in sorted(aut.states, key=repr)}
        for s in sorted(aut.states, key=repr):
            steps = []
            reach_final = []
            for a in aut.out_symbols.get(s, ()):
                dsts = aut.successors(s, a)
                if not dsts:
                    continue
                steps.append(pbf.conj(pbf.act(a), pbf.disj(down(name[d]) for d in dsts)))
                if self.inclusive and any(d in aut.finals for d in dsts):
                    reach_final.append(pbf.act(a))
            move = pbf.conj(stay(q1), pbf.disj(steps))
            if self.inclusive:
                here = pbf.conj(stay(q2), pbf.disj(reach_final))
            else:
                here = stay(q2) if s in aut.finals else pbf.FALSE
            self.add(name[s], pbf.disj(here, move), 1)
        return name[aut.initial]

    def release_plain(self, aut, q1, q2):
        k = self.fresh()
        name = {s: f"{k}:{s}" for s in sorted(aut.states, key=repr)}
        for s in sorted(aut.states, key=repr):
            steps = []
            reach_final = []
            for a in aut.out_symbols.get(s, ()):
                dsts = aut.successors(s, a)
                if not dsts:
                    continue
                steps.append(pbf.disj(pbf.nact(a), pbf.conj(down(name[d]) for d in dsts)))
                if self.inclusive and any(d in aut.finals for d in dsts):
                    reach_final.append(pbf.nact(a))
            keep = pbf.disj(stay(q1), pbf.conj(steps))
            if self.inclusive:
                here = pbf.disj(stay(q2), pbf.conj(reach_final))
            else:
                here = stay(q2) if s in aut.finals else pbf.TRUE
            self.add(name[s], pbf.conj(here, keep), 0)
        return name[aut.initial]


def _plain_param(aut):
    return aut.kind in PLAIN_KINDS


def ltl_reg_to_aba(f, props=None, alphabet=None, inclusive=False, name="aba"):
    """ABA with ``L(ABA) = L(f)`` for an NNF formula with plain parameters.

    ``inclusive`` switches to the reading where the parameter constrains the
    actions up to and including the witness position.
    """
    if not is_nnf(f):
        raise PreconditionError("ltl_reg_to_aba expects a formula in negation normal form")
    props, alphabet = _context(f, props, alphabet)
    b = _Builder(props, alphabet, inclusive)

    def build(g):
        if g in b.memo:
            return b.memo[g]
        q = b.atomic(g, build)
        if q is None:
            if not isinstance(g, (Until, Release)):
                raise PreconditionError(f"unexpected subformula {g!r}")
            aut = materialise(g.param, alphabet)
            if not _plain_param(aut):
                raise UnsupportedKindError(
                    f"parameter {aut.name!r} has kind {aut.kind}; use ltl_vpl_to_aja")
            q1, q2 = build(g.left), build(g.right)
            if isinstance(g, Until):
                q = b.until_plain(aut, q1, q2)
            else:
                q = b.release_plain(aut, q1, q2)
        b.memo[g] = q
        return q

    init = build(f)
    return _finish(b, init, "ABA", name)


def _context(f, props, alphabet):
    from .logic import atoms_of
    props = frozenset(props or ()) | frozenset(atoms_of(f))
    if alphabet is None:
        raise PreconditionError("an action alphabet is required")
    return props, alphabet


def _finish(b, init, kind, name):
    # keep only states reachable from the initial state
    reach, todo = {init}, [init]
    while todo:
        q = todo.pop()
        for m in pbf.atoms(b.delta[q]):
            for t in (m.target, m.fallback):
                if t is not None and t not in reach:
                    reach.add(t)
                    todo.append(t)
    states = tuple(q for q in b.order if q in reach)
    return AltAutomaton(name, kind, states, init, {q: b.delta[q] for q in states},
                        {q: b.colour[q] for q in states}, b.props, b.alphabet)


# ------------------------------------------------------------------- AJA

def ltl_vpl_to_aja(f, props=None, alphabet=None, name="aja"):
    """AJA with ``L(AJA) = L(f)``; parameters may be DFA, NFA, DVPA or VPA."""
    props, alphabet = _context(f, props, alphabet)
    b = _Builder(props, alphabet)

    def negate(q):
        """State recognising the complement of ``q``: dual formulas, colours + 1."""
        if q.startswith("~"):
            return q[1:]
        nq = "~" + q
        if nq in b.delta:
            return nq
        b.add(nq, pbf.FALSE, 0)     # placeholder breaks cycles
        body = pbf.substitute(pbf.dual(b.delta[q]), lambda m: pbf.atom(Move(
            m.dir, negate(m.target), None if m.fallback is None else negate(m.fallback))))
        b.add(nq, body, b.colour[q] + 1)
        return nq

    def build(g):
        if g in b.memo:
            return b.memo[g]
        q = None
        if isinstance(g, Not) and not isinstance(g.arg, Atom):
            q = negate(build(g.arg))
        if q is None:
            q = b.atomic(g, build)
        if q is None:
            if not isinstance(g, (Until, Release)):
                raise PreconditionError(f"unexpected subformula {g!r}")
            aut = materialise(g.param, alphabet)
            if _plain_param(aut):
                q1, q2 = build(g.left), build(g.right)
                if isinstance(g, Until):
                    q = b.until_plain(aut, q1, q2)
                else:
                    q = b.release_plain(aut, q1, q2)
            elif aut.kind in VP_KINDS:
                if isinstance(g, Release):
                    q = build(Not(Until(g.param, Not(g.left), Not(g.right))))
                else:
                    q = _until_vpa(b, aut, build(g.left), build(g.right))
            else:
                raise UnsupportedKindError(f"unsupported parameter kind {aut.kind}")
        b.memo[g] = q
        return q

    init = build(f)
    return _finish(b, init, "AJA", name)


def _until_vpa(b, aut, q1, q2):
    """Until whose parameter is a visibly pushdown automaton.

    States: ``sim(q, f)`` follows the VPA in state ``q``; ``f = 1`` once a
    call was guessed to stay open, after which no return may be read.
    ``ver(q, q2, g)`` checks that the VPA can go from ``q`` to ``q2`` inside
    a matched call, popping ``g`` at the matching return.  ``rej`` rejects.
    """
    alphabet = b.alphabet
    if not alphabet.pushdown:
        alphabet = aut.alphabet
    k = b.fresh()
    states = sorted(aut.states, key=repr)
    rej = f"{k}:rej"

    def sim(q, flag):
        return f"{k}:({q},{flag})"

    def ver(q, q2, g):
        return f"{k}:[{q},{q2},{g}]"

    b.add(rej, down(rej), 1)
    # ver(q, t, g) is only worth creating when some well-matched word leads
    # from q to a state popping g into t
    wm = vpa_summaries(aut)
    popper = {}
    for r in aut.rules:
        if r.op == "pop":
            popper.setdefault((r.stack, r.dst), set()).add(r.src)

    def feasible(q, t, g):
        return any((q, q1) in wm for q1 in popper.get((g, t), ()))

    calls = sorted(alphabet.calls)
    ints = sorted(alphabet.internals)
    rets = sorted(alphabet.returns)
    pending = []
    made = set()

    def need(name, maker):
        if name not in made:
            made.add(name)
            pending.append((name, maker))
        return name

    def sim_formula(q, flag):
        parts = []
        for a in ints:
            dsts = aut.internal_index.get((q, a), ())
            if dsts:
                parts.append(pbf.conj(pbf.act(a), pbf.disj(
                    down(need(sim(d, flag), ("sim", d, flag))) for d in dsts)))
        for a in calls:
            pushes = aut.push_index.get((q, a), ())
            if not pushes:
                continue
            matched = []
            for d, g in pushes:
                for q3 in states:
                    if not feasible(d, q3, g):
                        continue
                    matched.append(pbf.conj(
                        down(need(ver(d, q3, g), ("ver", d, q3, g))),
                        downa(need(sim(q3, flag), ("sim", q3, flag)), rej)))
            unmatched = [down(need(sim(d, 1), ("sim", d, 1))) for d, _ in pushes]
            parts.append(pbf.conj(pbf.act(a), pbf.disj(matched + unmatched)))
        # returns: flag 1 means a pending call was declared unmatched, and a
        # return with flag 0 would pop the empty stack; either way the run dies
        step = pbf.conj(stay(q1), pbf.disj(parts))
        here = stay(q2) if q in aut.finals else pbf.FALSE
        return pbf.disj(here, step)

    def ver_formula(q, target, g):
        parts = []
        for a in ints:
            dsts = aut.internal_index.get((q, a), ())
            if dsts:
                parts.append(pbf.conj(pbf.act(a), pbf.disj(
                    down(need(ver(d, target, g), ("ver", d, target, g))) for d in dsts)))
        for a in calls:
            pushes = aut.push_index.get((q, a), ())
            if not pushes:
                continue
            alts = []
            for d, g2 in pushes:
                for q3 in states:
                    if not (feasible(d, q3, g2) and feasible(q3, target, g)):
                        continue
                    alts.append(pbf.conj(
                        down(need(ver(d, q3, g2), ("ver", d, q3, g2))),
                        downa(need(ver(q3, target, g), ("ver", q3, target, g)), rej)))
            parts.append(pbf.conj(pbf.act(a), pbf.disj(alts)))
        for a in rets:
            if target in aut.pop_index.get((q, a, g), ()):
                parts.append(pbf.act(a))
        return pbf.conj(stay(q1), pbf.disj(parts))

    start = need(sim(aut.initial, 0), ("sim", aut.initial, 0))
    while pending:
        nm, spec = pending.pop()
        if spec[0] == "sim":
            b.add(nm, sim_formula(spec[1], spec[2]), 1)
        else:
            b.add(nm, ver_formula(spec[1], spec[2], spec[3]), 1)
    return start


def size_report(aut, f, bound):
    """``states=.. transitions=.. bound=.. constant=..`` line for ``translate``."""
    n = formula_size(f)
    limit = n if bound == "linear" else n * n
    constant = aut.size / limit if limit else 0.0
    return (f"states={aut.size} transitions={aut.leaves} bound={bound} "
            f"constant={constant:.3f}")
