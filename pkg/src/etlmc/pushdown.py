"""Pushdown systems, optionally with a Büchi condition on control locations.

A configuration is ``(p, w)`` with ``w`` a tuple of stack symbols, top first.
A rule ``(p, g) -label-> (p2, w2)`` replaces the top ``g`` by ``w2``.  Labels
are actions for systems and ``(props, action)`` letters for acceptors built
from automata.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .automata import Alphabet

__all__ = ["PDSRule", "PDS", "BOTTOM", "letter_action", "is_bottom"]

BOTTOM = "⊥"


def is_bottom(g):
    """``BOTTOM`` itself or a symbol annotating it (a tuple led by it)."""
    while isinstance(g, tuple) and g:
        g = g[0]
    return g == BOTTOM


def letter_action(label):
    """The action component of a rule label or ω-word letter."""
    return label[1] if isinstance(label, tuple) else label


@dataclass(frozen=True)
class PDSRule:
    src: object
    top: object
    label: object
    dst: object
    push: tuple = ()

    def __str__(self):
        w = " ".join(map(str, self.push)) if self.push else "eps"
        return f"({self.src},{self.top}) -{_show_label(self.label)}-> ({self.dst}, {w})"


def _show_label(label):
    if isinstance(label, tuple):
        props, action = label
        return f"({{{','.join(sorted(props))}}},{action})"
    return str(label)


@dataclass(frozen=True, eq=False)
class PDS:
    """A (visibly) pushdown system; ``finals`` set makes it a Büchi one.

    ``labels`` maps heads ``(p, g)`` to proposition sets; missing heads are
    unlabelled.  ``initial`` lists initial configurations ``(p, stack)``.
    """

    name: str
    locations: frozenset
    stack: frozenset
    rules: tuple
    alphabet: Alphabet
    initial: tuple = ()
    labels: dict = field(default_factory=dict)
    visibly: bool = False
    finals: frozenset = None
    silent: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "locations", frozenset(self.locations))
        object.__setattr__(self, "stack", frozenset(self.stack))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "initial", tuple(
            (p, tuple(w) if isinstance(w, (tuple, list)) else (w,)) for p, w in self.initial))
        if self.finals is not None:
            object.__setattr__(self, "finals", frozenset(self.finals))

    def __repr__(self):
        kind = "BVPS" if self.visibly else "BPDS"
        if self.finals is None:
            kind = kind[1:]
        return (f"{kind}({self.name!r}, {len(self.locations)} locations, "
                f"{len(self.stack)} stack symbols, {len(self.rules)} rules)")

    @property
    def is_buchi(self):
        return self.finals is not None

    @cached_property
    def rules_from(self):
        idx = {}
        for r in self.rules:
            idx.setdefault((r.src, r.top), []).append(r)
        return idx

    def label_of(self, head):
        return self.labels.get(head, frozenset())

    @property
    def size(self):
        return len(self.locations) + len(self.rules)

    def successors(self, config):
        """Yield ``(rule, config')`` for every rule enabled at ``config``."""
        p, w = config
        if not w:
            return
        for r in self.rules_from.get((p, w[0]), ()):
            yield r, (r.dst, tuple(r.push) + w[1:])
