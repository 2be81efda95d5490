"""Positive boolean formulas with letter literals.

Transition formulas of alternating automata are positive boolean
combinations of *atoms* (successor targets).  To keep transition tables
compact they may also contain *letter literals* that test the letter being
read: ``has(p)`` / ``lacks(p)`` for a proposition and ``act(a)`` /
``nact(a)`` for the action.  Fixing a letter (:func:`at_letter`) removes all
literals and leaves an ordinary element of B+(atoms).

Literals come in complementary pairs so that :func:`dual` stays a purely
syntactic operation: for every letter ``l``,
``at_letter(dual(f), l) == dual(at_letter(f, l))``.

Nodes are hash-consed-ish: each caches its hash, and/or children are kept in
frozensets so syntactically equal formulas compare equal.
"""
from __future__ import annotations

from itertools import product as _cartesian

__all__ = [
    "PBF", "TRUE", "FALSE", "atom", "has", "lacks", "act", "nact",
    "conj", "disj", "dual", "at_letter", "substitute", "atoms", "size",
    "evaluate", "models", "minimal_models", "to_prefix",
]

_LIT_DUAL = {"has": "lacks", "lacks": "has", "act": "nact", "nact": "act"}


class PBF:
    __slots__ = ("op", "args", "_hash")

    def __init__(self, op, args=()):
        self.op = op
        self.args = args
        self._hash = hash((op, args))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, PBF) or self._hash != other._hash:
            return False
        return self.op == other.op and self.args == other.args

    def __repr__(self):
        return to_prefix(self)

    def __and__(self, other):
        return conj(self, other)

    def __or__(self, other):
        return disj(self, other)


TRUE = PBF("true")
FALSE = PBF("false")


def atom(target):
    return PBF("atom", (target,))


def has(prop):
    return PBF("has", (prop,))


def lacks(prop):
    return PBF("lacks", (prop,))


def act(action):
    return PBF("act", (action,))


def nact(action):
    return PBF("nact", (action,))


def _flatten(op, items):
    out = set()
    for f in items:
        if f.op == op:
            out.update(f.args)
        else:
            out.add(f)
    return out


def conj(*items):
    if len(items) == 1 and not isinstance(items[0], PBF):
        items = tuple(items[0])
    kids = _flatten("and", items)
    if FALSE in kids:
        return FALSE
    kids.discard(TRUE)
    if not kids:
        return TRUE
    if len(kids) == 1:
        return next(iter(kids))
    return PBF("and", frozenset(kids))


def disj(*items):
    if len(items) == 1 and not isinstance(items[0], PBF):
        items = tuple(items[0])
    kids = _flatten("or", items)
    if TRUE in kids:
        return TRUE
    kids.discard(FALSE)
    if not kids:
        return FALSE
    if len(kids) == 1:
        return next(iter(kids))
    return PBF("or", frozenset(kids))


def dual(f):
    """Swap and/or and true/false, complement letter literals; atoms unchanged."""
    op = f.op
    if op == "true":
        return FALSE
    if op == "false":
        return TRUE
    if op == "atom":
        return f
    if op in _LIT_DUAL:
        return PBF(_LIT_DUAL[op], f.args)
    kids = [dual(g) for g in f.args]
    return disj(kids) if op == "and" else conj(kids)


def at_letter(f, props, action, _memo=None):
    """Resolve letter literals against the letter ``(props, action)``."""
    op = f.op
    if op in ("true", "false", "atom"):
        return f
    if op == "has":
        return TRUE if f.args[0] in props else FALSE
    if op == "lacks":
        return FALSE if f.args[0] in props else TRUE
    if op == "act":
        return TRUE if f.args[0] == action else FALSE
    if op == "nact":
        return FALSE if f.args[0] == action else TRUE
    kids = [at_letter(g, props, action) for g in f.args]
    return conj(kids) if op == "and" else disj(kids)


def substitute(f, fn):
    """Replace every atom ``t`` by the formula ``fn(t)`` (``None`` keeps it)."""
    op = f.op
    if op == "atom":
        r = fn(f.args[0])
        return f if r is None else r
    if op in ("and", "or"):
        kids = [substitute(g, fn) for g in f.args]
        return conj(kids) if op == "and" else disj(kids)
    return f


def atoms(f):
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g.op == "atom":
            out.add(g.args[0])
        elif g.op in ("and", "or"):
            stack.extend(g.args)
    return out


def size(f):
    """Number of leaves (atoms, literals, constants)."""
    if f.op in ("and", "or"):
        return sum(size(g) for g in f.args)
    return 1


def evaluate(f, chosen):
    """Truth of a literal-free formula when exactly the atoms in ``chosen`` hold."""
    op = f.op
    if op == "true":
        return True
    if op == "false":
        return False
    if op == "atom":
        return f.args[0] in chosen
    if op == "and":
        return all(evaluate(g, chosen) for g in f.args)
    if op == "or":
        return any(evaluate(g, chosen) for g in f.args)
    raise ValueError(f"letter literal {f!r} must be resolved before evaluation")


def _minimise(sets):
    ordered = sorted(set(sets), key=len)
    kept = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def minimal_models(f):
    """Subset-minimal sets of atoms satisfying a literal-free formula.

    ``[]`` means unsatisfiable, ``[frozenset()]`` means valid.
    """
    op = f.op
    if op == "true":
        return [frozenset()]
    if op == "false":
        return []
    if op == "atom":
        return [frozenset(f.args)]
    if op == "or":
        acc = []
        for g in f.args:
            acc.extend(minimal_models(g))
        return _minimise(acc)
    if op == "and":
        acc = [frozenset()]
        for g in f.args:
            sub = minimal_models(g)
            if not sub:
                return []
            acc = _minimise(a | b for a, b in _cartesian(acc, sub))
        return acc
    raise ValueError(f"letter literal {f!r} must be resolved first")


models = minimal_models


def to_prefix(f, show=str):
    op = f.op
    if op == "true":
        return "true"
    if op == "false":
        return "false"
    if op == "atom":
        return show(f.args[0])
    if op in _LIT_DUAL:
        return f"{op}({f.args[0]})"
    kids = sorted(to_prefix(g, show) for g in f.args)
    return f"{op.upper()}({', '.join(kids)})"
