"""Brute-force semantics used to cross-check the automata pipeline.

Everything here evaluates the semantic clauses directly and is deliberately
independent of the translation, dealternation and saturation modules.
Verdicts are three-valued: ``True``, ``False`` or ``None`` (unknown within
the bound).  ``None`` is never turned into a guess.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product as _cartesian

import networkx as nx

from .automata import PLAIN_KINDS
from .logic import (SIGMA, STAR, And, Atom, Const, Exists, Not, Or, Release,
                    Until, children)
from .omega import LassoWord
from .pushdown import letter_action
from .systems import kts_paths

__all__ = [
    "OracleBounds", "default_bounds", "and3", "or3", "not3",
    "oracle_lasso_eval", "oracle_lasso_positions", "kts_lassos",
    "oracle_kts_linear", "oracle_branching_eval", "oracle_bounded_pds",
    "PdsReport", "unmatched_calls", "pds_config_lassos", "oracle_pds_linear",
    "bounded_backward",
]


@dataclass(frozen=True)
class OracleBounds:
    extra: int = 20          # B = |stem| + 4 |loop| + extra
    height: int = 8          # H
    depth: int = 200         # D

    def lasso_bound(self, w):
        return len(w.stem) + 4 * len(w.loop) + self.extra


def default_bounds():
    """Defaults, overridable by ``ETLMC_ORACLE_BOUNDS=B,H,D``."""
    raw = os.environ.get("ETLMC_ORACLE_BOUNDS")
    if not raw:
        return OracleBounds()
    b, h, d = (int(x) for x in raw.split(","))
    return OracleBounds(b, h, d)


def not3(a):
    return None if a is None else not a


def and3(*xs):
    out = True
    for x in xs:
        if x is False:
            return False
        if x is None:
            out = None
    return out


def or3(*xs):
    out = False
    for x in xs:
        if x is True:
            return True
        if x is None:
            out = None
    return out


# ------------------------------------------------------------ finite words

_SAFETY = 50          # exact runs still stop at this multiple of the bound
FROZEN = "#frozen"    # stands for a stack part that is never popped again


def _kind(alphabet, letter):
    a = letter_action(letter)
    return alphabet.kind_of(a) if a in alphabet.symbols else "int"


def unmatched_calls(w, alphabet):
    """Canonical positions of ``w`` holding a call that is never matched.

    Computed by simulating a stack of call positions over a prefix of the
    unrolled lasso long enough for the pending calls to reach their steady
    state: stem calls are drained or settled within ``|stem| + 1`` loop
    iterations, loop calls are matched in the next iteration or never.
    """
    n_stem, n_loop = len(w.stem), len(w.loop)
    steady = n_stem + n_loop * (n_stem + 1)
    horizon = steady + 3 * n_loop
    stack, popped = [], set()
    for x in range(horizon):
        kind = _kind(alphabet, w[x])
        if kind == "call":
            stack.append(x)
        elif kind == "ret" and stack:
            popped.add(stack.pop())
    out = set()
    for j in range(n_stem):
        if _kind(alphabet, w[j]) == "call" and j not in popped:
            out.add(j)
    for j in range(n_stem, n_stem + n_loop):
        x = steady + (j - n_stem)
        if _kind(alphabet, w[x]) == "call" and x not in popped:
            out.add(j)
    return frozenset(out)


class _Runner:
    """Incremental membership of action prefixes in a parameter language.

    For pushdown parameters the stack below a call that is never matched is
    replaced by :data:`FROZEN`, which keeps the configuration sets finite on
    a lasso.
    """

    def __init__(self, param, w=None):
        self.param = param
        if param is STAR or param is SIGMA:
            self.kind = "builtin"
        elif param.kind in PLAIN_KINDS:
            self.kind = "plain"
        else:
            self.kind = "vpa"
        self.unmatched = frozenset()
        if self.kind == "vpa" and w is not None:
            self.unmatched = unmatched_calls(w, param.alphabet)
        self.exact = self.kind != "vpa" or w is not None

    def start(self):
        if self.kind == "builtin":
            return frozenset([0])
        if self.kind == "plain":
            return frozenset([self.param.initial])
        return frozenset([(self.param.initial, ())])

    def step(self, cur, action, pos=None):
        if self.kind == "builtin":
            if self.param is STAR:
                return cur
            return frozenset(i + 1 for i in cur if i == 0)
        a = self.param
        if self.kind == "plain":
            return frozenset(d for q in cur for d in a.successors(q, action))
        frozen = pos in self.unmatched
        nxt = set()
        for q, stack in cur:
            for d in a.internal_index.get((q, action), ()):
                nxt.add((d, stack))
            for d, g in a.push_index.get((q, action), ()):
                nxt.add((d, (FROZEN,) if frozen else stack + (g,)))
            if stack and stack[-1] != FROZEN:
                for d in a.pop_index.get((q, action, stack[-1]), ()):
                    nxt.add((d, stack[:-1]))
        return frozenset(nxt)

    def accepting(self, cur):
        if self.kind == "builtin":
            return True if self.param is STAR else (1 in cur)
        if self.kind == "plain":
            return bool(cur & self.param.finals)
        return any(q in self.param.finals for q, _ in cur)


# ------------------------------------------------------------------ lassos

def oracle_lasso_positions(f, w, bound=None, inclusive=False, state_value=None):
    """Truth of ``f`` at every canonical position of the lasso ``w``.

    ``state_value(g, i)`` supplies three-valued truth for quantified
    subformulas ``g`` at position ``i`` (used by the branching oracle).
    """
    n = len(w)
    if bound is None:
        bound = default_bounds().lasso_bound(w)
    val = {}
    for g in _postorder(f):
        if isinstance(g, Atom):
            val[g] = [g.name in w[i][0] for i in range(n)]
        elif isinstance(g, Const):
            val[g] = [g.value] * n
        elif isinstance(g, Not):
            val[g] = [not3(x) for x in val[g.arg]]
        elif isinstance(g, And):
            val[g] = [and3(a, b) for a, b in zip(val[g.left], val[g.right])]
        elif isinstance(g, Or):
            val[g] = [or3(a, b) for a, b in zip(val[g.left], val[g.right])]
        elif isinstance(g, Exists):
            if state_value is None:
                raise ValueError("quantified subformula needs a state_value callback")
            val[g] = [state_value(g, i) for i in range(n)]
        elif isinstance(g, Until):
            val[g] = [_until_at(g, w, i, val, bound, inclusive) for i in range(n)]
        elif isinstance(g, Release):
            val[g] = [_release_at(g, w, i, val, bound, inclusive) for i in range(n)]
        else:
            raise TypeError(f"not a formula: {g!r}")
    return val[f]


def _postorder(f):
    out, seen = [], set()

    def visit(g):
        if g in seen:
            return
        seen.add(g)
        for c in children(g):
            visit(c)
        out.append(g)
    visit(f)
    return out


def _until_at(g, w, i, val, bound, inclusive):
    """exists k >= i: right(k), left(j) for i <= j < k, actions in L."""
    run = _Runner(g.param, w)
    cur = run.start()
    left, right = val[g.left], val[g.right]
    prefix_ok = True       # left held on [i, k)
    result = False
    seen = set()
    k = i
    while True:
        p = w.norm(k)
        if inclusive:
            cur = run.step(cur, letter_action(w[k]), p)
            in_lang = run.accepting(cur)
        else:
            in_lang = run.accepting(cur)
        result = or3(result, and3(in_lang, right[p], prefix_ok))
        if result is True:
            return True
        prefix_ok = and3(prefix_ok, left[p])
        if prefix_ok is False:
            return result
        if not inclusive:
            cur = run.step(cur, letter_action(w[k]), p)
        if not cur:
            return result
        key = (w.norm(k + 1), cur, prefix_ok)
        if key in seen:
            return result
        seen.add(key)
        k += 1
        if k - i >= (bound if not run.exact else _SAFETY * bound):
            return True if result is True else None


def _release_at(g, w, i, val, bound, inclusive):
    """for all k >= i: actions not in L, or right(k), or left(j) for some i <= j < k."""
    run = _Runner(g.param, w)
    cur = run.start()
    left, right = val[g.left], val[g.right]
    released = False       # left held somewhere on [i, k)
    result = True
    seen = set()
    k = i
    while True:
        p = w.norm(k)
        if inclusive:
            cur = run.step(cur, letter_action(w[k]), p)
        in_lang = run.accepting(cur)
        result = and3(result, or3(not in_lang, right[p], released))
        if result is False:
            return False
        released = or3(released, left[p])
        if released is True:
            return result
        if not inclusive:
            cur = run.step(cur, letter_action(w[k]), p)
        if not cur:
            return result
        key = (w.norm(k + 1), cur, released)
        if key in seen:
            return result
        seen.add(key)
        k += 1
        if k - i >= (bound if not run.exact else _SAFETY * bound):
            return False if result is False else None


def oracle_lasso_eval(f, w, bound=None, inclusive=False, state_value=None):
    """Three-valued truth of a quantifier-free formula on the lasso trace ``w``."""
    return oracle_lasso_positions(f, w, bound, inclusive, state_value)[0]


# --------------------------------------------------------------------- KTS

def kts_lassos(kts, start, max_stem, max_loop):
    """Every lasso path from ``start`` with stem <= max_stem, loop <= max_loop.

    Yields ``(states, actions, loop_start)`` where ``states`` has one more
    entry than ``actions`` and the last state equals ``states[loop_start]``.
    """
    frontier = [((start,), ())]
    for length in range(1, max_stem + max_loop + 1):
        nxt = []
        for states, acts in frontier:
            for a, t in kts.out.get(states[-1], ()):
                s2, a2 = states + (t,), acts + (a,)
                nxt.append((s2, a2))
                lo = max(0, length - max_loop)
                for j in range(lo, min(length, max_stem + 1)):
                    if states[j] == t:
                        yield s2, a2, j
        frontier = nxt


def _lasso_word(kts, states, actions, j):
    letters = [(kts.label(s), a) for s, a in zip(states, actions)]
    return LassoWord(letters[:j], letters[j:])


def oracle_kts_linear(kts, f, max_stem=None, max_loop=None, bound=None):
    """Search a lasso path violating ``f``.

    Returns ``(False, lasso)`` when one is found (definite), otherwise
    ``(None, None)``: no violation within the bounds proves nothing.
    """
    n = len(kts.states)
    max_stem = n if max_stem is None else max_stem
    max_loop = n if max_loop is None else max_loop
    for states, actions, j in kts_lassos(kts, kts.initial, max_stem, max_loop):
        w = _lasso_word(kts, states, actions, j)
        v = oracle_lasso_eval(f, w, bound)
        if v is False:
            return False, (states, actions, j, w)
    return None, None


def oracle_branching_eval(f, kts, max_stem=None, max_loop=None, bound=None):
    """Three-valued truth of a CTL* formula at the initial state of ``kts``.

    ``E psi`` is definitely true when a witness lasso is found.  It is
    definitely false when ``psi`` only looks a fixed number ``d`` of steps
    ahead (no modalities, or only next-step ones): every path prefix of
    length ``d`` is then enumerated.  The formula itself is read universally
    over the paths of the initial state.
    """
    n = len(kts.states)
    max_stem = n if max_stem is None else max_stem
    max_loop = n if max_loop is None else max_loop
    memo = {}

    def state_value_at(states):
        def sv(g, i):
            return value_of_exists(g, states[i])
        return sv

    def lassos(psi, s):
        d = _lookahead(psi)
        if d is None:
            return kts_lassos(kts, s, max_stem, max_loop), False
        return _prefix_lassos(kts, s, d), True

    def value_of_exists(g, s):
        key = (g, s)
        if key in memo:
            return memo[key]
        runs, exhaustive = lassos(g.arg, s)
        result = False
        for states, actions, j in runs:
            w = _lasso_word(kts, states, actions, j)
            v = oracle_lasso_eval(g.arg, w, bound, state_value=state_value_at(states[:len(w)]))
            result = or3(result, v)
            if result is True:
                break
        if result is False and not exhaustive:
            result = None
        memo[key] = result
        return result

    runs, exhaustive = lassos(f, kts.initial)
    result = True
    for states, actions, j in runs:
        w = _lasso_word(kts, states, actions, j)
        v = oracle_lasso_eval(f, w, bound, state_value=state_value_at(states[:len(w)]))
        result = and3(result, v)
        if result is False:
            return False
    return result if exhaustive else (None if result is True else result)


def _lookahead(f):
    """Steps of lookahead of a path formula whose modalities (outside
    quantifiers) are all next-step ones; ``None`` otherwise."""
    if isinstance(f, (Atom, Const, Exists)):
        return 0
    if isinstance(f, Not):
        return _lookahead(f.arg)
    if isinstance(f, (And, Or)):
        a, b = _lookahead(f.left), _lookahead(f.right)
        return None if a is None or b is None else max(a, b)
    if f.param is not SIGMA:
        return None
    a, b = _lookahead(f.left), _lookahead(f.right)
    return None if a is None or b is None else 1 + max(a, b)


def _prefix_lassos(kts, s, d):
    """One lasso per path prefix of ``d`` steps from ``s`` that extends to
    an infinite path: the prefix followed by a shortest lasso."""
    n = len(kts.states)
    tails = {}
    for states, acts in kts_paths(kts, d, s):
        last = states[-1]
        if last not in tails:
            tails[last] = next(iter(kts_lassos(kts, last, n, n)), None)
        tail = tails[last]
        if tail is None:
            continue
        t_states, t_acts, j = tail
        yield states + tuple(t_states[1:]), tuple(acts) + tuple(t_acts), d + j


def _under_exists(f, target):
    """Is every occurrence of ``target`` inside some quantified subformula?"""
    def walk(g, inside):
        if g == target:
            return inside
        if isinstance(g, (Atom, Const)):
            return True
        if isinstance(g, Exists):
            return walk(g.arg, True)
        if isinstance(g, Not):
            return walk(g.arg, inside)
        return walk(g.left, inside) and walk(g.right, inside)
    return walk(f, False)


# --------------------------------------------------------- pushdown search

def pds_config_lassos(pds, max_len=8, height=None):
    """Runs of ``pds`` that reach a configuration already on the run.

    Yields ``(configs, actions, loop_start)``: the run repeats
    ``configs[loop_start:]`` forever.  Stacks are capped at ``height``.
    """
    height = default_bounds().height if height is None else height

    def walk(configs, actions, index):
        c = configs[-1]
        for r, c2 in pds.successors(c):
            if len(c2[1]) > height:
                continue
            acts = actions + [r.label]
            if c2 in index:
                yield list(configs), acts, index[c2]
            elif len(acts) < max_len:
                index[c2] = len(configs)
                configs.append(c2)
                yield from walk(configs, acts, index)
                configs.pop()
                del index[c2]

    for c in pds.initial:
        yield from walk([c], [], {c: 0})


def _config_letter(pds, c, action):
    return (pds.label_of((c[0], c[1][0])), action)


def oracle_pds_linear(pds, f, max_len=8, height=None, bound=None):
    """Like :func:`oracle_kts_linear` for pushdown systems: looks for a run
    repeating a configuration whose trace violates ``f``."""
    for configs, actions, j in pds_config_lassos(pds, max_len, height):
        letters = [_config_letter(pds, c, a) for c, a in zip(configs, actions)]
        w = LassoWord(letters[:j], letters[j:])
        if oracle_lasso_eval(f, w, bound) is False:
            return False, (configs, actions, j, w)
    return None, None


@dataclass
class PdsReport:
    reachable: set = field(default_factory=set)
    accepting: set = field(default_factory=set)   # initial configs with a found lasso
    truncated: bool = False


def _bounded_graph(pds, starts, height, depth):
    g = nx.DiGraph()
    dist = {c: 0 for c in starts}
    frontier = list(starts)
    truncated = False
    for c in starts:
        g.add_node(c)
    for d in range(depth):
        nxt = []
        for c in frontier:
            for _, c2 in pds.successors(c):
                if len(c2[1]) > height:
                    truncated = True
                    continue
                g.add_edge(c, c2)
                if c2 not in dist:
                    dist[c2] = d + 1
                    nxt.append(c2)
        frontier = nxt
        if not frontier:
            break
    else:
        truncated = truncated or bool(frontier)
    return g, dist, truncated


def oracle_bounded_pds(pds, height=None, depth=None, starts=None):
    """Explicit exploration of configurations with stack height <= ``height``.

    ``reachable``: configurations reached within ``depth`` steps.
    ``accepting``: start configurations from which a cycle through a final
    location (returning to the same configuration) was found.  Both are
    one-sided: everything reported is true of the unbounded system.
    """
    bounds = default_bounds()
    height = bounds.height if height is None else height
    depth = bounds.depth if depth is None else depth
    starts = list(pds.initial if starts is None else starts)
    g, dist, truncated = _bounded_graph(pds, starts, height, depth)
    report = PdsReport(set(dist), set(), truncated)
    if pds.finals:
        good = set()
        for comp in nx.strongly_connected_components(g):
            if not any(c[0] in pds.finals for c in comp):
                continue
            c = next(iter(comp))
            if len(comp) > 1 or g.has_edge(c, c):
                good |= comp
        if good:
            rev = g.reverse(copy=False)
            back = set(good)
            for c in good:
                back |= nx.descendants(rev, c)
            report.accepting = {c for c in starts if c in back}
    return report


def bounded_backward(pds, targets, height):
    """Configurations of height <= ``height`` that reach ``targets`` along
    runs whose stack never exceeds ``height`` (exact on that finite graph)."""
    configs = []
    for h in range(height + 1):
        for w in _cartesian(sorted(pds.stack, key=repr), repeat=h):
            for p in pds.locations:
                configs.append((p, w))
    g = nx.DiGraph()
    g.add_nodes_from(configs)
    for c in configs:
        for _, c2 in pds.successors(c):
            if len(c2[1]) <= height:
                g.add_edge(c, c2)
    rev = g.reverse(copy=False)
    out = set()
    for t in targets:
        if t in g:
            out.add(t)
            out |= nx.descendants(rev, t)
    return out
