"""Formulas of LTL[U], CTL+[U] and CTL*[U]: AST, parser, printer, NNF and
fragment classification.

Modalities carry a *parameter*: a finite-word automaton constraining the
actions taken up to the witness position, or one of the built-in languages
:data:`STAR` (all words, the default) and :data:`SIGMA` (one-letter words,
used by ``X``).  Derived operators are desugared while parsing::

    X f      = true U{.} f
    F{A} f   = true U{A} f
    G{A} f   = false R{A} f
    A(f)     = !E(!f)
    f -> g   = !f | g
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .automata import FiniteAutomaton, REJECTED_KINDS, VP_KINDS
from .errors import (CITE_DPDA_MC, CITE_DPDA_SAT, FormulaSyntaxError,
                     UndecidableFragmentError, UnresolvedAutomatonError)

__all__ = [
    "Formula", "Atom", "Const", "Not", "And", "Or", "Until", "Release", "Exists",
    "STAR", "SIGMA", "TRUE", "FALSE", "Next", "Finally", "Globally", "Forall",
    "Implies", "parse_formula", "to_str", "to_nnf", "is_nnf", "classify_fragment",
    "Fragment", "formula_size", "subformulas", "params", "atoms_of",
    "has_quantifier", "RESERVED_PREFIX", "param_kind", "param_name",
]

RESERVED_PREFIX = "__sub"


class _Builtin:
    __slots__ = ("name", "kind")

    def __init__(self, name):
        self.name = name
        self.kind = "DFA"

    def __repr__(self):
        return f"<{self.name}>"

    def __reduce__(self):
        # keep the singletons identical across process boundaries
        return (_builtin, (self.name,))


def _builtin(name):
    return STAR if name == "*" else SIGMA


STAR = _Builtin("*")
SIGMA = _Builtin(".")


class Formula:
    """Base class; subclasses are frozen dataclasses."""

    def __str__(self):
        return to_str(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"!{self.arg!r}"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return to_str(self)


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return to_str(self)


@dataclass(frozen=True, repr=False)
class Until(Formula):
    param: object
    left: Formula
    right: Formula

    def __repr__(self):
        return to_str(self)


@dataclass(frozen=True, repr=False)
class Release(Formula):
    param: object
    left: Formula
    right: Formula

    def __repr__(self):
        return to_str(self)


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    arg: Formula

    def __repr__(self):
        return to_str(self)


TRUE = Const(True)
FALSE = Const(False)


def Next(f):
    return Until(SIGMA, TRUE, f)


def Finally(f, param=STAR):
    return Until(param, TRUE, f)


def Globally(f, param=STAR):
    return Release(param, FALSE, f)


def Forall(f):
    return Not(Exists(Not(f)))


def Implies(a, b):
    return Or(Not(a), b)


def param_name(p):
    return p.name


def param_kind(p):
    return p.kind


# ------------------------------------------------------------------ parser

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<op>[!&|(){}])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*|\.|\*)
""", re.VERBOSE)

_KEYWORDS = {"true", "false", "U", "R", "X", "F", "G", "E", "A"}


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, library, purpose, allow_reserved):
        self.toks = _tokenize(text)
        self.i = 0
        self.library = library or {}
        self.purpose = purpose
        self.allow_reserved = allow_reserved

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        f = self.implication()
        tok = self.peek()
        if tok[0] != "eof":
            raise FormulaSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            right = self.implication()
            return Implies(left, right)
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek()[1] == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.binary()
        while self.peek()[1] == "&":
            self.take()
            left = And(left, self.binary())
        return left

    def binary(self):
        left = self.unary()
        tok = self.peek()
        if tok[1] in ("U", "R"):
            self.take()
            param = self.param()
            right = self.binary()
            return (Until if tok[1] == "U" else Release)(param, left, right)
        return left

    def param(self):
        if self.peek()[1] != "{":
            return STAR
        self.take("{")
        tok = self.take()
        if tok[0] != "ident":
            raise FormulaSyntaxError("expected an automaton name", tok[2])
        self.take("}")
        name = tok[1]
        if name == "*":
            return STAR
        if name == ".":
            return SIGMA
        if name not in self.library:
            raise UnresolvedAutomatonError(name)
        aut = self.library[name]
        if aut.kind in REJECTED_KINDS:
            cite = CITE_DPDA_SAT if self.purpose == "sat" else CITE_DPDA_MC
            raise UndecidableFragmentError(f"{cite} (automaton {name!r} has kind {aut.kind})")
        return aut

    def unary(self):
        tok = self.peek()
        v = tok[1]
        if v == "!":
            self.take()
            return Not(self.unary())
        if v == "X":
            self.take()
            return Next(self.unary())
        if v in ("F", "G"):
            self.take()
            param = self.param()
            arg = self.unary()
            return Finally(arg, param) if v == "F" else Globally(arg, param)
        if v in ("E", "A"):
            self.take()
            arg = self.unary()
            return Exists(arg) if v == "E" else Forall(arg)
        if v == "(":
            self.take()
            f = self.implication()
            self.take(")")
            return f
        if v == "true":
            self.take()
            return TRUE
        if v == "false":
            self.take()
            return FALSE
        if tok[0] == "ident" and v not in _KEYWORDS and v not in ("*", "."):
            self.take()
            if v.startswith(RESERVED_PREFIX) and not self.allow_reserved:
                raise FormulaSyntaxError(f"proposition {v!r} uses the reserved prefix "
                                         f"{RESERVED_PREFIX!r}", tok[2])
            return Atom(v)
        raise FormulaSyntaxError(f"unexpected {v or 'end of input'!r}", tok[2])


def parse_formula(text, library=None, purpose="check", allow_reserved=False):
    """Parse concrete syntax into a core AST with resolved parameters."""
    return _Parser(text, library, purpose, allow_reserved).parse()


def _pstr(p):
    return "" if p is STAR else "{" + p.name + "}"


def to_str(f):
    """Fully parenthesised concrete syntax; parses back to the same AST."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return "!" + to_str(f.arg)
    if isinstance(f, And):
        return f"({to_str(f.left)} & {to_str(f.right)})"
    if isinstance(f, Or):
        return f"({to_str(f.left)} | {to_str(f.right)})"
    if isinstance(f, Until):
        if f.param is SIGMA and f.left == TRUE:
            return "X " + to_str(f.right)
        if f.left == TRUE:
            return f"F{_pstr(f.param)} {to_str(f.right)}"
        return f"({to_str(f.left)} U{_pstr(f.param)} {to_str(f.right)})"
    if isinstance(f, Release):
        if f.left == FALSE:
            return f"G{_pstr(f.param)} {to_str(f.right)}"
        return f"({to_str(f.left)} R{_pstr(f.param)} {to_str(f.right)})"
    if isinstance(f, Exists):
        return f"E({to_str(f.arg)})"
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------------- traversal

def children(f):
    if isinstance(f, (Atom, Const)):
        return ()
    if isinstance(f, (Not, Exists)):
        return (f.arg,)
    if isinstance(f, (And, Or)):
        return (f.left, f.right)
    return (f.left, f.right)


def subformulas(f):
    """All subformulas, parents before children, without duplicates."""
    out, seen, stack = [], set(), [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        out.append(g)
        stack.extend(reversed(children(g)))
    return out


def params(f):
    out = []
    for g in subformulas(f):
        if isinstance(g, (Until, Release)) and g.param not in out:
            out.append(g.param)
    return out


def atoms_of(f):
    return sorted({g.name for g in subformulas(f) if isinstance(g, Atom)})


def has_quantifier(f):
    return any(isinstance(g, Exists) for g in subformulas(f))


def formula_size(f):
    """Number of AST nodes (counted along the tree) plus the sizes of the
    distinct user automata it references."""
    def nodes(g):
        return 1 + sum(nodes(c) for c in children(g))
    total = nodes(f)
    for p in params(f):
        if isinstance(p, FiniteAutomaton):
            total += p.size
        else:
            total += 1
    return total


# -------------------------------------------------------------------- NNF

def to_nnf(f):
    """Push negations onto atoms using the Until/Release duality.

    Negated quantified subformulas are left in place (they are state
    formulas handled by the branching algorithm).
    """
    return _nnf(f, False)


def _nnf(f, neg):
    if isinstance(f, Atom):
        return Not(f) if neg else f
    if isinstance(f, Const):
        return Const(f.value != neg)
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, And):
        l, r = _nnf(f.left, neg), _nnf(f.right, neg)
        return Or(l, r) if neg else And(l, r)
    if isinstance(f, Or):
        l, r = _nnf(f.left, neg), _nnf(f.right, neg)
        return And(l, r) if neg else Or(l, r)
    if isinstance(f, Until):
        if neg and f.param is SIGMA and f.left == TRUE:
            # on infinite traces the next position always exists
            return Until(SIGMA, TRUE, _nnf(f.right, True))
        l, r = _nnf(f.left, neg), _nnf(f.right, neg)
        return Release(f.param, l, r) if neg else Until(f.param, l, r)
    if isinstance(f, Release):
        l, r = _nnf(f.left, neg), _nnf(f.right, neg)
        return Until(f.param, l, r) if neg else Release(f.param, l, r)
    if isinstance(f, Exists):
        inner = Exists(to_nnf(f.arg))
        return Not(inner) if neg else inner
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f):
    for g in subformulas(f):
        if isinstance(g, Not) and not isinstance(g.arg, (Atom, Exists)):
            return False
    return True


# -------------------------------------------------------- classification

_RANK = {"LTL": 0, "CTL": 1, "CTL+": 2, "CTL*": 3}


@dataclass(frozen=True)
class Fragment:
    logic: str                  # LTL, CTL, CTL+ or CTL*
    kinds: frozenset            # parameter kinds seen anywhere
    until_kinds: frozenset = frozenset()
    release_kinds: frozenset = frozenset()

    @property
    def rank(self):
        return _RANK[self.logic]

    @property
    def languages(self):
        """``REG`` or ``VPL``: the class the parameters fall into."""
        return "VPL" if self.kinds & set(VP_KINDS) else "REG"

    @property
    def deterministic(self):
        return not (self.kinds & {"NFA", "VPA"})

    def __str__(self):
        if self.logic == "CTL":
            return f"CTL[{_join(self.until_kinds)},{_join(self.release_kinds)}]"
        return f"{self.logic}[{_join(self.kinds)}]"

    def __le__(self, other):
        return self.rank <= other.rank and self.kinds <= other.kinds


def _join(kinds):
    if not kinds:
        return "-"
    if "VPA" in kinds or ("DVPA" in kinds and "NFA" in kinds):
        return "VPA"
    if "DVPA" in kinds:
        return "DVPA"
    if "NFA" in kinds:
        return "NFA"
    return "DFA"


def _is_modality(f):
    return isinstance(f, (Until, Release))


def _state_formula_ctlplus(f, single):
    """Is ``f`` a CTL+ state formula (CTL when ``single``)?"""
    if isinstance(f, (Atom, Const)):
        return True
    if isinstance(f, Not):
        return _state_formula_ctlplus(f.arg, single)
    if isinstance(f, (And, Or)):
        return (_state_formula_ctlplus(f.left, single)
                and _state_formula_ctlplus(f.right, single))
    if isinstance(f, Exists):
        return _path_ctlplus(f.arg, single, top=True)
    return False


def _path_ctlplus(f, single, top):
    if _is_modality(f):
        return (_state_formula_ctlplus(f.left, single)
                and _state_formula_ctlplus(f.right, single))
    if isinstance(f, Not):
        return _path_ctlplus(f.arg, single, top)
    if single:
        return False
    if isinstance(f, (And, Or)):
        return (_path_ctlplus(f.left, single, False)
                and _path_ctlplus(f.right, single, False))
    return _state_formula_ctlplus(f, single)


def classify_fragment(f):
    """Least of LTL < CTL[V,W] < CTL+ < CTL* containing ``f``."""
    kinds, uk, rk = set(), set(), set()
    for g in subformulas(f):
        if isinstance(g, Until):
            kinds.add(g.param.kind)
            uk.add(g.param.kind)
        elif isinstance(g, Release):
            kinds.add(g.param.kind)
            rk.add(g.param.kind)
    if not has_quantifier(f):
        logic = "LTL"
    elif _state_formula_ctlplus(f, single=True):
        logic = "CTL"
    elif _state_formula_ctlplus(f, single=False):
        logic = "CTL+"
    else:
        logic = "CTL*"
    return Fragment(logic, frozenset(kinds), frozenset(uk), frozenset(rk))
