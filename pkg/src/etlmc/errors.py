"""Exception hierarchy shared by every module."""


class EtlmcError(Exception):
    """Base class for all errors raised by etlmc."""


class AlphabetMismatchError(EtlmcError, ValueError):
    pass


class UnsupportedKindError(EtlmcError, ValueError):
    pass


class PreconditionError(EtlmcError, ValueError):
    pass


class FormatError(EtlmcError, ValueError):
    """Malformed input text. Carries an optional ``source:line`` location."""

    def __init__(self, message, source=None, line=None):
        self.source = source
        self.line = line
        where = ""
        if source is not None and line is not None:
            where = f"{source}:{line}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class FormulaSyntaxError(FormatError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at offset {position})")


class UnresolvedAutomatonError(EtlmcError, KeyError):
    def __str__(self):
        return f"unresolved automaton reference: {self.args[0]!r}"


class UndecidableFragmentError(EtlmcError):
    """Requests that fall into a class with undecidable model checking or satisfiability."""


class UnknownAtBoundError(EtlmcError):
    """An exact answer could not be certified within the exploration bound."""


class NotWeakError(EtlmcError, ValueError):
    """The alternating automaton is not weak; dealternation needs weakness."""


# Diagnostics quoted by the undecidability guards.
CITE_DPDA_MC = (
    "undecidable: LTL[DPDA] model checking against KTS is undecidable "
    "(and so is CTL*/CTL+[DPDA]); DPDA/PDA parameters are rejected"
)
CITE_DPDA_SAT = (
    "undecidable: LTL[DPDA] satisfiability is undecidable, since "
    "F^{L1 t} true & F^{L2 t} true is satisfiable iff L1 and L2 intersect"
)
CITE_VPL_PDS = (
    "undecidable: LTL[VPL] model checking against PDS is undecidable "
    "(and so is CTL*/CTL+[VPL] against PDS); use a visibly pushdown system"
)
