"""Model checking LTL[U] and CTL*[U] against KTS, VPS and PDS.

Linear formulas: the negation is compiled into an alternating automaton,
dealternated (Büchi automaton for regular parameters, Büchi VPS for
visibly pushdown ones), synchronised with the system, and the product is
tested for an accepting run.  Branching formulas are handled bottom-up: each
innermost ``E psi`` is replaced by a fresh proposition holding exactly where
a path satisfying ``psi`` starts.  On pushdown systems that set of
configurations is regular and is tracked by annotating stack symbols.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .automata import Alphabet, VP_KINDS
from .errors import (CITE_VPL_PDS, AlphabetMismatchError, PreconditionError,
                     UndecidableFragmentError)
from .logic import (SIGMA, STAR, And, Atom, Const, Exists, Not, Or, atoms_of, classify_fragment, has_quantifier, params,
                    to_nnf)
from .omega import LassoWord, aba_to_ba, accepting_lasso, aja_to_bvps
from .pushdown import BOTTOM, PDS, PDSRule
from .saturation import ConfigNFA, bpds_accepting_configs, repeating_heads
from .systems import KTS, KTS_STACK, synchronize_product, validate_system
from .translation import ltl_reg_to_aba, ltl_vpl_to_aja

__all__ = [
    "Verdict", "Counterexample", "mc_linear", "mc_branching", "complexity_of",
    "formula_alphabet", "system_letters", "regular_valuation_label",
    "pds_lasso", "HOLDS", "VIOLATED", "UNKNOWN", "SUB_PREFIX",
]

HOLDS, VIOLATED, UNKNOWN = "HOLDS", "VIOLATED", "UNKNOWN"
DEFAULT_BUDGET = 200_000     # heads explored while dealternating an AJA
SUB_PREFIX = "__sub"


@dataclass
class Counterexample:
    """A lasso-shaped run: ``trace`` is the word, ``path`` the system side
    (KTS states or PDS configurations, one per letter plus the loop target)."""

    trace: LassoWord
    path: list = field(default_factory=list)
    loop_start: int = 0

    def describe(self):
        lines = []
        for i, (node, letter) in enumerate(zip(self.path, self.trace.stem + self.trace.loop)):
            mark = "loop> " if i == self.loop_start and i >= len(self.trace.stem) else "      "
            props = ",".join(sorted(letter[0]))
            lines.append(f"{mark}{_show_node(node)} {{{props}}} -{letter[1]}->")
        return "\n".join(lines)


def _show_node(node):
    if isinstance(node, tuple) and len(node) == 2 and isinstance(node[1], tuple):
        p, w = node
        return f"({p}, {' '.join(map(str, w))})"
    return str(node)


@dataclass
class Verdict:
    status: str
    fragment: str = ""
    complexity: str = ""
    counterexample: Counterexample = None
    certificate: ConfigNFA = None
    stats: dict = field(default_factory=dict)

    @property
    def holds(self):
        return self.status == HOLDS


# -------------------------------------------------------------- complexity

_TABLE = {
    ("LTL", "REG", "KTS"): "PSPACE-complete",
    ("LTL", "VPL", "KTS"): "EXPTIME-complete",
    ("CTL*", "REG", "KTS"): "PSPACE-complete",
    ("CTL+", "REG", "KTS"): "PSPACE-complete",
    ("CTL*", "VPL", "KTS"): "EXPTIME-complete",
    ("CTL+", "VPL", "KTS"): "EXPTIME-complete",
    ("LTL", "REG", "VPS"): "EXPTIME-complete",
    ("LTL", "VPL", "VPS"): "EXPTIME-complete",
    ("CTL*", "VPL", "VPS"): "2EXPTIME-complete",
    ("CTL*", "REG", "VPS"): "2EXPTIME-complete",
    ("LTL", "REG", "PDS"): "EXPTIME-complete",
    ("CTL*", "REG", "PDS"): "2EXPTIME-complete",
}


def complexity_of(fragment, system_kind):
    """Complexity class of the model checking problem, as a string."""
    logic = fragment.logic
    if logic == "CTL":
        logic = "CTL+"
    lang = fragment.languages
    if system_kind == "PDS" and lang == "VPL":
        return "undecidable"
    if logic == "CTL+" and system_kind in ("VPS", "PDS"):
        if fragment.deterministic:
            return "in 2EXPTIME, EXPTIME-hard"
        return "2EXPTIME-complete"
    return _TABLE.get((logic, lang, system_kind), "unknown")


def system_kind(sys):
    if isinstance(sys, KTS):
        return "KTS"
    return "VPS" if sys.visibly else "PDS"


# -------------------------------------------------------------- alphabets

def _user_params(f):
    return [p for p in params(f) if p is not STAR and p is not SIGMA]


def formula_alphabet(sys, f):
    """Alphabet used to compile ``f`` against ``sys``: the union of all
    symbols, with the call/return partition of whichever side has one."""
    alphabets = [sys.alphabet] + [p.alphabet for p in _user_params(f)]
    parts = [a for a in alphabets if a.pushdown]
    calls, rets = set(), set()
    for a in parts:
        calls |= a.calls
        rets |= a.returns
    symbols = set()
    for a in alphabets:
        symbols |= a.symbols
    for a in parts:
        clash = (a.internals & (calls | rets)) | (a.calls & rets) | (a.returns & calls)
        if clash:
            raise AlphabetMismatchError(
                f"call/return partitions disagree on {sorted(clash)}")
    if isinstance(sys, PDS) and sys.visibly and sys.alphabet.pushdown:
        extra = (calls - sys.alphabet.calls) | (rets - sys.alphabet.returns)
        if extra & sys.alphabet.symbols:
            raise UndecidableFragmentError(
                CITE_VPL_PDS + "; the call/return partitions of system and formula differ")
    if not parts:
        return Alphabet.plain(symbols)
    return Alphabet.visibly(calls, symbols - calls - rets, rets)


def system_letters(sys):
    """Letters ``(label, action)`` the system can produce."""
    if isinstance(sys, KTS):
        return sys.letters
    out = {(sys.label_of((r.src, r.top)), r.label) for r in sys.rules}
    return sorted(out, key=repr)


def _is_vpl(f):
    return any(p.kind in VP_KINDS for p in _user_params(f))


# ----------------------------------------------------------------- linear

def _check_system(sys):
    problems = validate_system(sys)
    if problems:
        raise PreconditionError("invalid system: " + "; ".join(problems[:5]))


def _acceptor(sys, f, props, inclusive, budget=DEFAULT_BUDGET):
    """Acceptor for the traces of ``sys`` satisfying ``f``."""
    alphabet = formula_alphabet(sys, f)
    letters = system_letters(sys)
    if not _is_vpl(f):
        aba = ltl_reg_to_aba(to_nnf(f), props, alphabet, inclusive=inclusive)
        return aba_to_ba(aba, letters), aba
    if inclusive:
        raise PreconditionError("the inclusive reading is only available for "
                                "regular parameters")
    if isinstance(sys, PDS) and not sys.visibly:
        raise UndecidableFragmentError(CITE_VPL_PDS)
    aja = ltl_vpl_to_aja(f, props, alphabet)
    return aja_to_bvps(aja, letters, max_heads=budget), aja


def mc_linear(sys, f, inclusive=False, certificate=False, budget=DEFAULT_BUDGET):
    """Does every run of ``sys`` satisfy the quantifier-free formula ``f``?

    Raises :class:`UnknownAtBoundError` when dealternation exceeds ``budget``.
    """
    _check_system(sys)
    if has_quantifier(f):
        raise PreconditionError("mc_linear expects a formula without path quantifiers")
    frag = classify_fragment(f)
    kind = system_kind(sys)
    if kind == "PDS" and frag.languages == "VPL":
        raise UndecidableFragmentError(CITE_VPL_PDS)
    props = frozenset(sys.props if isinstance(sys, KTS) else _pds_props(sys)) | frozenset(atoms_of(f))
    acc, alt = _acceptor(sys, Not(f), props, inclusive, budget)
    prod = synchronize_product(sys, acc)
    verdict = Verdict(HOLDS, str(frag), complexity_of(frag, kind))
    verdict.stats = {"automaton_states": alt.size, "product_locations": len(prod.locations),
                     "product_rules": len(prod.rules)}
    if isinstance(sys, KTS) and not isinstance(acc, PDS) and not certificate:
        cex = _kts_lasso(sys, prod)
        if cex is not None:
            verdict.status = VIOLATED
            verdict.counterexample = cex
        return verdict
    acc_cfg = bpds_accepting_configs(prod)
    if certificate:
        verdict.certificate = acc_cfg
    if any(acc_cfg.accepts(c) for c in prod.initial):
        verdict.status = VIOLATED
        if isinstance(sys, KTS) and not isinstance(acc, PDS):
            verdict.counterexample = _kts_lasso(sys, prod)
        else:
            verdict.counterexample = _pushdown_counterexample(sys, prod)
    return verdict


def _pds_props(pds):
    out = set()
    for v in pds.labels.values():
        out |= set(v)
    return out


def _kts_lasso(kts, prod):
    """Accepting lasso of a KTS × Büchi product, projected to the KTS."""
    def post(loc):
        for r in prod.rules_from.get((loc, KTS_STACK), ()):
            yield r.label, r.dst

    res = accepting_lasso([prod.initial[0][0]], post, lambda loc: loc in prod.finals)
    if res is None:
        return None
    stem_nodes, stem_labels, loop_nodes, loop_labels = res
    nodes = [n[0] for n in stem_nodes + loop_nodes]
    actions = list(stem_labels) + list(loop_labels)
    letters = [(kts.label(s), a) for s, a in zip(nodes, actions)]
    k = len(stem_labels)
    return Counterexample(LassoWord(letters[:k], letters[k:]), nodes + [loop_nodes[0][0]], k)


def pds_lasso(pds, height=8, depth=2000):
    """Search an accepting lasso of a Büchi PDS whose loop repeats a head.

    Returns ``(stem, loop)``: lists of ``(config, rule)`` steps, where the
    loop runs from head ``(p, g)`` back to ``(p, g v)`` visiting a final
    location, so repeating it forever is a run.  ``None`` when nothing is
    found within the height bound.
    """
    finals = pds.finals or frozenset()
    candidates = repeating_heads(pds)
    if not candidates:
        return None
    loops = {}
    parent = {}
    todo = deque()
    for c in pds.initial:
        parent[c] = None
        todo.append(c)
    steps = 0
    while todo and steps < depth:
        c = todo.popleft()
        steps += 1
        head = (c[0], c[1][0]) if c[1] else None
        if head in candidates:
            if head not in loops:
                loops[head] = _head_loop(pds, head, finals, height)
            if loops[head] is not None:
                stem = []
                x = c
                while parent[x] is not None:
                    prev, r = parent[x]
                    stem.append((prev, r))
                    x = prev
                stem.reverse()
                loop = [((p, w + c[1][1:]), r) for (p, w), r in loops[head]]
                return stem, loop
        for r, c2 in pds.successors(c):
            if len(c2[1]) <= height and c2 not in parent:
                parent[c2] = (c, r)
                todo.append(c2)
    return None


def _head_loop(pds, head, finals, height):
    p, g = head
    start = ((p, (g,)), p in finals)
    parent = {start: None}
    todo = deque([start])
    while todo:
        node = todo.popleft()
        c, flag = node
        for r, c2 in pds.successors(c):
            if not c2[1] or len(c2[1]) > height:
                continue
            flag2 = flag or c2[0] in finals
            if c2[0] == p and c2[1][0] == g and flag:
                # closing the loop
                path = [(c, r)]
                x = node
                while parent[x] is not None:
                    prev, rr = parent[x]
                    path.append((prev[0], rr))
                    x = prev
                path.reverse()
                return path
            nxt = (c2, flag2)
            if nxt not in parent:
                parent[nxt] = (node, r)
                todo.append(nxt)
    return None


def _pushdown_counterexample(sys, prod):
    found = pds_lasso(prod)
    if found is None:
        return None
    stem, loop = found
    letters, path = [], []
    for c, r in stem + loop:
        letters.append(_project_letter(sys, c, r))
        path.append(_project_config(sys, c))
    k = len(stem)
    return Counterexample(LassoWord(letters[:k], letters[k:]), path, k)


def _project_letter(sys, config, rule):
    loc, w = config
    if isinstance(sys, KTS):
        return (sys.label(loc[0]), rule.label)
    top = w[0]
    if isinstance(top, tuple) and len(top) == 2 and top not in sys.stack:
        top = top[0]
    return (sys.label_of((loc[0], top)), rule.label)


def _project_config(sys, config):
    loc, w = config
    if isinstance(sys, KTS):
        return loc[0]
    stack = tuple(x[0] if isinstance(x, tuple) and x not in sys.stack else x for x in w)
    return (loc[0], stack)


# -------------------------------------------------------------- branching

def _innermost_exists(f):
    """An ``Exists`` subformula with no quantifier below it, or ``None``."""
    if isinstance(f, (Atom, Const)):
        return None
    if isinstance(f, Exists):
        inner = _innermost_exists(f.arg)
        return f if inner is None else inner
    if isinstance(f, Not):
        return _innermost_exists(f.arg)
    for g in (f.left, f.right):
        hit = _innermost_exists(g)
        if hit is not None:
            return hit
    return None


def _replace(f, target, prop):
    if f == target:
        return prop
    if isinstance(f, (Atom, Const)):
        return f
    if isinstance(f, Not):
        return Not(_replace(f.arg, target, prop))
    if isinstance(f, Exists):
        return Exists(_replace(f.arg, target, prop))
    if isinstance(f, And):
        return And(_replace(f.left, target, prop), _replace(f.right, target, prop))
    if isinstance(f, Or):
        return Or(_replace(f.left, target, prop), _replace(f.right, target, prop))
    return type(f)(f.param, _replace(f.left, target, prop), _replace(f.right, target, prop))


def mc_branching(sys, f, certificate=False, budget=DEFAULT_BUDGET, jobs=1):
    """Does the initial state (configuration) of ``sys`` satisfy the CTL*
    state formula ``f``?"""
    _check_system(sys)
    frag = classify_fragment(f)
    kind = system_kind(sys)
    if kind == "PDS" and frag.languages == "VPL":
        raise UndecidableFragmentError(CITE_VPL_PDS)
    k = 0
    labelled = sys
    while True:
        target = _innermost_exists(f)
        if target is None:
            break
        k += 1
        prop = Atom(f"{SUB_PREFIX}{k}")
        labelled = label_exists(labelled, target.arg, prop.name, budget, jobs)
        f = _replace(f, target, prop)
    verdict = mc_linear(labelled, f, certificate=certificate, budget=budget)
    verdict.fragment = str(frag)
    verdict.complexity = complexity_of(frag, kind)
    verdict.stats["quantifiers"] = k
    return verdict


def _run_from(args):
    sys, psi, s, budget = args
    return mc_linear(sys.with_initial(s), Not(psi), budget=budget).status == VIOLATED


def label_exists(sys, psi, prop, budget=DEFAULT_BUDGET, jobs=1):
    """Copy of ``sys`` where ``prop`` holds exactly where a run satisfying the
    quantifier-free ``psi`` starts.  On a KTS the states are independent and
    are checked by ``jobs`` worker processes."""
    if isinstance(sys, KTS):
        work = [(sys, psi, s, budget) for s in sys.states]
        if jobs > 1 and len(work) > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                hits = list(pool.map(_run_from, work))
        else:
            hits = [_run_from(w) for w in work]
        return sys.relabel({s: {prop} for s, hit in zip(sys.states, hits) if hit})
    nfa = exists_configs(sys, psi, budget)
    return regular_valuation_label(sys, nfa, prop)


def exists_configs(sys, psi, budget=DEFAULT_BUDGET):
    """ConfigNFA over the stack of ``sys`` for the configurations from which
    some run satisfies ``psi``."""
    props = frozenset(_pds_props(sys)) | frozenset(atoms_of(psi))
    acc, _ = _acceptor(sys, psi, props, False, budget)
    prod = synchronize_product(sys, acc)
    cfg = bpds_accepting_configs(prod)
    if isinstance(acc, PDS):
        (c0, _), = acc.initial
        start = {p: cfg.start[(p, c0)] for p in sys.locations if (p, c0) in cfg.start}
        out = ConfigNFA(start, {}, set(cfg.finals))
        for s, g, t in cfg.edges():
            if isinstance(g, tuple) and len(g) == 2 and g[1] == BOTTOM:
                out.add(s, g[0], t)
        return out
    q0 = acc.initial
    start = {p: cfg.start[(p, q0)] for p in sys.locations if (p, q0) in cfg.start}
    return ConfigNFA(start, {s: {g: set(d) for g, d in m.items()}
                             for s, m in cfg.transitions.items()}, set(cfg.finals))


def regular_valuation_label(sys, nfa, prop):
    """Pushdown system equivalent to ``sys`` where ``prop`` labels the heads
    of configurations accepted by ``nfa``.

    Each stack symbol ``g`` becomes ``(g, R)`` where ``R`` is the set of
    ``nfa`` states from which the part of the stack below ``g`` is accepted;
    membership of a configuration can then be read off its head.
    """
    def pre(g, R):
        return frozenset(s for s, m in nfa.transitions.items()
                         if any(t in R for t in m.get(g, ())))

    bottom = frozenset(nfa.finals)

    def annotate(w):
        out, R = [], bottom
        for g in reversed(w):
            out.append((g, R))
            R = pre(g, R)
        return tuple(reversed(out))

    initial = [(p, annotate(w)) for p, w in sys.initial]
    symbols = set()
    todo = []
    for _, w in initial:
        for x in w:
            if x not in symbols:
                symbols.add(x)
                todo.append(x)
    rules = []
    while todo:
        g, R = todo.pop()
        for p in sys.locations:
            for r in sys.rules_from.get((p, g), ()):
                if len(r.push) == 0:
                    body = ()
                elif len(r.push) == 1:
                    body = ((r.push[0], R),)
                else:
                    g1, g2 = r.push
                    body = ((g1, pre(g2, R)), (g2, R))
                rules.append(PDSRule(p, (g, R), r.label, r.dst, body))
                for x in body:
                    if x not in symbols:
                        symbols.add(x)
                        todo.append(x)
    labels = {}
    for p in sys.locations:
        for g, R in symbols:
            lab = sys.label_of((p, g))
            if p in nfa.start and nfa.start[p] in pre(g, R):
                lab = lab | {prop}
            if lab:
                labels[(p, (g, R))] = lab
    return PDS(sys.name, sys.locations, frozenset(symbols), tuple(rules), sys.alphabet,
               initial=initial, labels=labels, visibly=sys.visibly, finals=sys.finals,
               silent=sys.silent)
