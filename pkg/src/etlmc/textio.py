"""Text formats for automata, systems, formulas and dumps.

Automaton files (several blocks per file)::

    automaton even kind=DFA
    alphabet int={a}
    states {e, o}
    initial e
    final {e}
    e -a-> o
    o -a-> e

Visibly pushdown rules read ``q -c/push g-> q2`` and ``q -r/pop g-> q2``.
KTS files use ``kts``, ``props``, ``state q {p}``, ``init q`` and
``q -a-> q2``; PDS files use ``pds <name> [visibly]``, ``stack``,
``label (p,g) {..}``, ``init (p, g1 g2)``, ``final {..}`` and rules
``(p,g) -a-> (p2, w)`` with ``w`` one of ``eps``, ``g``, ``g1 g2``.
``_|_`` may be written for the bottom symbol ``⊥``.  ``#`` starts a comment.
"""
from __future__ import annotations

import re

from . import pbf
from .automata import Alphabet, FiniteAutomaton, PLAIN_KINDS, REJECTED_KINDS, Rule, VP_KINDS
from .errors import FormatError, FormulaSyntaxError, UnresolvedAutomatonError
from .logic import parse_formula
from .omega import all_letters
from .pushdown import BOTTOM, PDS, PDSRule
from .systems import KTS

__all__ = [
    "parse_automata", "parse_kts", "parse_pds", "parse_system", "read_formula",
    "load_automata", "load_system", "load_formula", "dump_automaton", "dump_kts",
    "dump_pds", "dump_alt", "dump_config_nfa",
]

_NAME = r"[^\s{},()/]+"
_SET = re.compile(r"\{([^}]*)\}")
_AUT_RULE = re.compile(
    rf"^(?P<src>{_NAME})\s+-(?P<sym>{_NAME}?)(?:/(?P<op>push|pop)\s+(?P<g>{_NAME}?))?->\s*(?P<dst>{_NAME})$")
_KTS_RULE = re.compile(rf"^(?P<src>{_NAME})\s+-(?P<sym>{_NAME}?)->\s*(?P<dst>{_NAME})$")
_CONFIG = r"\(\s*(" + _NAME + r")\s*,\s*([^()]*?)\s*\)"
_PDS_RULE = re.compile(rf"^{_CONFIG}\s+-(?P<sym>{_NAME}?)->\s*{_CONFIG}$")
_KINDS = PLAIN_KINDS + VP_KINDS + REJECTED_KINDS


def _sym(x):
    return BOTTOM if x == "_|_" else x


def _lines(text):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _set(body, src, n):
    m = _SET.search(body)
    if m is None:
        raise FormatError(f"expected a set in braces: {body!r}", src, n)
    return [_sym(x) for x in re.split(r"[,\s]+", m.group(1).strip()) if x]


def _alphabet(rest, src, n):
    """``call={..} int={..} ret={..}`` or a bare ``{..}`` (plain)."""
    parts = dict(re.findall(r"(call|int|ret)\s*=\s*\{([^}]*)\}", rest))
    if not parts:
        return Alphabet.plain(_set(rest, src, n))
    split = {k: [x for x in re.split(r"[,\s]+", v.strip()) if x] for k, v in parts.items()}
    try:
        if "call" in split or "ret" in split:
            return Alphabet.visibly(split.get("call", ()), split.get("int", ()), split.get("ret", ()))
        return Alphabet.plain(split.get("int", ()))
    except ValueError as e:
        raise FormatError(str(e), src, n) from None


# ---------------------------------------------------------------- automata

def parse_automata(text, source="<automata>"):
    """All automaton blocks of ``text`` as a name -> automaton dict."""
    blocks, cur = [], None
    for n, line in _lines(text):
        if line.startswith("automaton"):
            cur = {"line": n, "lines": []}
            blocks.append(cur)
            cur["header"] = line
        elif cur is None:
            raise FormatError("content before the first 'automaton' header", source, n)
        else:
            cur["lines"].append((n, line))
    out = {}
    for b in blocks:
        a = _automaton_block(b, source)
        if a.name in out:
            raise FormatError(f"duplicate automaton name {a.name!r}", source, b["line"])
        out[a.name] = a
    return out


def _automaton_block(b, src):
    m = re.match(rf"^automaton\s+({_NAME})(?:\s+kind\s*=\s*(\w+))?\s*$", b["header"])
    if m is None:
        raise FormatError("expected 'automaton <name> kind=<K>'", src, b["line"])
    name, kind = m.group(1), (m.group(2) or "NFA")
    if kind not in _KINDS:
        raise FormatError(f"unknown automaton kind {kind!r}", src, b["line"])
    alphabet = states = initial = finals = stack = None
    rules = []
    for n, line in b["lines"]:
        head, _, rest = line.partition(" ")
        if head == "alphabet":
            alphabet = _alphabet(rest, src, n)
        elif head == "states":
            states = _set(rest, src, n)
        elif head == "initial":
            initial = rest.strip()
        elif head in ("final", "finals"):
            finals = _set(rest, src, n)
        elif head == "stack":
            stack = _set(rest, src, n)
        else:
            r = _AUT_RULE.match(line)
            if r is None:
                raise FormatError(f"cannot parse line {line!r}", src, n)
            op = r.group("op") or "int"
            if op != "int" and not r.group("g"):
                raise FormatError(f"{op} rule needs a stack symbol", src, n)
            rules.append((n, Rule(r.group("src"), r.group("sym"), r.group("dst"), op,
                                  _sym(r.group("g")) if r.group("g") else None)))
    if initial is None:
        raise FormatError(f"automaton {name!r} has no initial state", src, b["line"])
    symbols = {r.symbol for _, r in rules}
    if alphabet is None:
        if kind in VP_KINDS:
            raise FormatError(f"automaton {name!r} of kind {kind} needs an alphabet line",
                              src, b["line"])
        alphabet = Alphabet.plain(symbols)
    for n, r in rules:
        if r.symbol not in alphabet.symbols:
            raise FormatError(f"symbol {r.symbol!r} not in the alphabet", src, n)
    if states is None:
        states = {initial} | {r.src for _, r in rules} | {r.dst for _, r in rules} | set(finals or ())
    if stack is None:
        stack = {r.stack for _, r in rules if r.stack is not None}
    return FiniteAutomaton(name, kind, alphabet, frozenset(states), initial,
                           frozenset(finals or ()), tuple(r for _, r in rules),
                           frozenset(stack))


def dump_automaton(a):
    lines = [f"automaton {a.name} kind={a.kind}", f"alphabet {a.alphabet.describe()}"]
    if a.stack_symbols:
        lines.append(f"stack {{{', '.join(sorted(map(str, a.stack_symbols)))}}}")
    lines.append(f"states {{{', '.join(sorted(map(str, a.states)))}}}")
    lines.append(f"initial {a.initial}")
    lines.append(f"final {{{', '.join(sorted(map(str, a.finals)))}}}")
    lines += [str(r) for r in a.rules]
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- systems

def parse_kts(text, source="<kts>"):
    name, props, alphabet, init = "kts", None, None, None
    states, labels, trans = [], {}, []
    for n, line in _lines(text):
        head, _, rest = line.partition(" ")
        if head == "kts":
            name = rest.strip() or name
        elif head == "props":
            props = _set(rest, source, n)
        elif head == "alphabet":
            alphabet = _alphabet(rest, source, n)
        elif head == "state":
            m = re.match(rf"^({_NAME})\s*(\{{[^}}]*\}})?\s*$", rest.strip())
            if m is None:
                raise FormatError("expected 'state <name> {props}'", source, n)
            s = m.group(1)
            if s not in states:
                states.append(s)
            labels[s] = frozenset(_set(m.group(2), source, n) if m.group(2) else ())
        elif head == "init":
            init = rest.strip()
        else:
            r = _KTS_RULE.match(line)
            if r is None:
                raise FormatError(f"cannot parse line {line!r}", source, n)
            trans.append((r.group("src"), r.group("sym"), r.group("dst")))
            for s in (r.group("src"), r.group("dst")):
                if s not in states:
                    states.append(s)
    if init is None:
        if not states:
            raise FormatError("empty KTS", source, None)
        init = states[0]
    if alphabet is None:
        alphabet = Alphabet.plain({a for _, a, _ in trans})
    declared = frozenset(props) if props is not None else frozenset()
    for s, lab in labels.items():
        undeclared = lab - declared
        if props is not None and undeclared:
            raise FormatError(f"state {s!r} uses undeclared propositions {sorted(undeclared)}",
                              source, None)
    return KTS(name, tuple(states), alphabet, tuple(trans), labels, init, props=declared)


def _word(text):
    text = text.strip()
    if text in ("", "eps", "ε"):
        return ()
    return tuple(_sym(x) for x in text.split())


def parse_pds(text, source="<pds>"):
    name, visibly, alphabet, stack, locations = "pds", False, None, None, None
    labels, initial, finals, rules = {}, [], None, []
    for n, line in _lines(text):
        head, _, rest = line.partition(" ")
        if head == "pds":
            words = rest.split()
            name = words[0] if words else name
            visibly = "visibly" in words[1:]
        elif head == "stack":
            stack = _set(rest, source, n)
        elif head == "alphabet":
            alphabet = _alphabet(rest, source, n)
        elif head == "locations":
            locations = _set(rest, source, n)
        elif head == "label":
            m = re.match(rf"^{_CONFIG}\s*(\{{[^}}]*\}})\s*$", rest.strip())
            if m is None:
                raise FormatError("expected 'label (p,g) {props}'", source, n)
            labels[(m.group(1), _sym(m.group(2).strip()))] = frozenset(_set(m.group(3), source, n))
        elif head == "init":
            m = re.match(rf"^{_CONFIG}$", rest.strip())
            if m is None:
                raise FormatError("expected 'init (p, w)'", source, n)
            initial.append((m.group(1), _word(m.group(2))))
        elif head in ("final", "finals"):
            finals = _set(rest, source, n)
        else:
            m = _PDS_RULE.match(line)
            if m is None:
                raise FormatError(f"cannot parse line {line!r}", source, n)
            top = _word(m.group(2))
            if len(top) != 1:
                raise FormatError("a rule reads exactly one stack symbol", source, n)
            rules.append(PDSRule(m.group(1), top[0], m.group("sym"), m.group(4), _word(m.group(5))))
    if not initial:
        raise FormatError("missing 'init' line", source, None)
    if alphabet is None:
        if visibly:
            raise FormatError("a visibly PDS needs an alphabet line with call/ret classes",
                              source, None)
        alphabet = Alphabet.plain({r.label for r in rules})
    if stack is None:
        stack = {r.top for r in rules} | {x for r in rules for x in r.push}
        stack |= {x for _, w in initial for x in w}
    if locations is None:
        locations = {r.src for r in rules} | {r.dst for r in rules} | {p for p, _ in initial}
    return PDS(name, frozenset(locations), frozenset(stack), tuple(rules), alphabet,
               initial=tuple(initial), labels=labels, visibly=visibly,
               finals=None if finals is None else frozenset(finals))


def parse_system(text, source="<system>"):
    """KTS or PDS depending on the first header line."""
    for n, line in _lines(text):
        if line.startswith("kts"):
            return parse_kts(text, source)
        if line.startswith("pds"):
            return parse_pds(text, source)
        raise FormatError("expected a 'kts' or 'pds' header", source, n)
    raise FormatError("empty system file", source, None)


def dump_kts(k):
    lines = [f"kts {k.name}", f"props {{{', '.join(sorted(k.props))}}}",
             f"alphabet {k.alphabet.describe()}"]
    for s in k.states:
        lines.append(f"state {s} {{{', '.join(sorted(k.label(s)))}}}")
    lines.append(f"init {k.initial}")
    lines += [f"{s} -{a}-> {t}" for s, a, t in k.transitions]
    return "\n".join(lines) + "\n"


def _show_word(w):
    return " ".join(map(str, w)) if w else "eps"


def dump_pds(p):
    lines = [f"pds {p.name}" + (" visibly" if p.visibly else ""),
             f"alphabet {p.alphabet.describe()}",
             f"locations {{{', '.join(sorted(map(str, p.locations)))}}}",
             f"stack {{{', '.join(sorted(map(str, p.stack)))}}}"]
    for (q, g), lab in sorted(p.labels.items(), key=repr):
        lines.append(f"label ({q},{g}) {{{', '.join(sorted(lab))}}}")
    for q, w in p.initial:
        lines.append(f"init ({q}, {_show_word(w)})")
    if p.finals is not None:
        lines.append(f"final {{{', '.join(sorted(map(str, p.finals)))}}}")
    for r in p.rules:
        lines.append(f"({r.src},{r.top}) -{r.label}-> ({r.dst}, {_show_word(r.push)})")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ formulas etc

def read_formula(text):
    """Formula text with comments removed and lines joined."""
    return " ".join(line for _, line in _lines(text))


def load_automata(paths):
    library = {}
    for path in paths or ():
        with open(path, encoding="utf-8") as fh:
            for name, a in parse_automata(fh.read(), path).items():
                if name in library:
                    raise FormatError(f"automaton {name!r} defined twice", path, None)
                library[name] = a
    return library


def load_system(path):
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read(), path)


def load_formula(arg, library, purpose="check"):
    """``arg`` is a path to a ``.etl`` file or the formula text itself.
    Syntax errors in a file are reported as ``path:line``."""
    try:
        with open(arg, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError:
        return parse_formula(arg, library, purpose=purpose)
    parts, starts, pos = [], [], 0
    for n, line in _lines(raw):
        starts.append((pos, n))
        parts.append(line)
        pos += len(line) + 1
    try:
        return parse_formula(" ".join(parts), library, purpose=purpose)
    except FormulaSyntaxError as e:
        line = max((n for off, n in starts if off <= e.position), default=None)
        raise FormatError(str(e), arg, line) from None
    except UnresolvedAutomatonError as e:
        raise FormatError(str(e), arg, starts[0][1] if starts else None) from None


# ------------------------------------------------------------------- dumps

_MAX_LETTER_LINES = 4096


def dump_alt(a, letters=None):
    """Omega-automaton dump: one line per state and letter, formulas in
    prefix notation, colours on a ``colors`` line."""
    if letters is None:
        letters = all_letters(a.props, a.alphabet)
    lines = [f"{a.kind.lower()} {a.name}",
             f"props {{{', '.join(sorted(a.props))}}}",
             f"alphabet {a.alphabet.describe()}",
             f"states {{{', '.join(map(str, a.states))}}}",
             f"initial {a.initial}",
             "colors " + " ".join(f"{q}={a.colour_of(q)}" for q in a.states)]
    symbolic = len(letters) * len(a.states) > _MAX_LETTER_LINES
    for q in a.states:
        if symbolic:
            lines.append(f"{q} -*-> {pbf.to_prefix(a.delta[q])}")
            continue
        for props, act in letters:
            f = a.step(q, (props, act))
            if f == pbf.FALSE:
                continue
            lines.append(f"{q} -({{{','.join(sorted(props))}}},{act})-> {pbf.to_prefix(f)}")
    return "\n".join(lines) + "\n"


def dump_config_nfa(nfa, name="certificate"):
    return nfa.dump(name, show=str)
