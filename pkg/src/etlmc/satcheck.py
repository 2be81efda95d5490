"""Satisfiability of LTL[U] formulas.

A formula is satisfiable iff its automaton (ABA for regular parameters, AJA
for visibly pushdown ones) accepts some word over all letters
``2^AP x Sigma``.  Regular case: emptiness of the breakpoint Büchi automaton,
with an ultimately periodic witness.  Visibly pushdown case: the dealternated
Büchi VPS has an accepting run from its initial configuration, decided by
saturation; a witness lasso is extracted when one repeats a head within the
search bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .automata import Alphabet, VP_KINDS
from .errors import CITE_DPDA_SAT, PreconditionError, UndecidableFragmentError
from .logic import (SIGMA, STAR, atoms_of, classify_fragment, has_quantifier,
                    params, to_nnf)
from .modelcheck import DEFAULT_BUDGET, pds_lasso
from .omega import LassoWord, aba_to_ba, aja_to_bvps, all_letters, buchi_emptiness
from .saturation import ConfigNFA, bpds_accepting_configs
from .systems import KTS
from .translation import ltl_reg_to_aba, ltl_vpl_to_aja

__all__ = ["SatResult", "sat_linear", "lasso_to_kts", "sat_complexity",
           "SAT", "UNSAT", "UNKNOWN"]

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"


@dataclass
class SatResult:
    status: str
    fragment: str = ""
    complexity: str = ""
    witness: LassoWord = None
    certificate: ConfigNFA = None
    alphabet: Alphabet = None
    stats: dict = field(default_factory=dict)

    @property
    def satisfiable(self):
        return self.status == SAT


def sat_complexity(fragment):
    return "EXPTIME-complete" if fragment.languages == "VPL" else "PSPACE-complete"


def _alphabet_of(f, alphabet):
    if alphabet is not None:
        return alphabet
    user = [p.alphabet for p in params(f) if p is not STAR and p is not SIGMA]
    if not user:
        return Alphabet.plain({"a"})
    calls, rets, symbols = set(), set(), set()
    for a in user:
        symbols |= a.symbols
        if a.pushdown:
            calls |= a.calls
            rets |= a.returns
    if not (calls or rets) and not any(a.pushdown for a in user):
        return Alphabet.plain(symbols)
    return Alphabet.visibly(calls, symbols - calls - rets, rets)


def sat_linear(f, alphabet=None, inclusive=False, budget=DEFAULT_BUDGET,
               witness_height=8):
    """Decide satisfiability of a quantifier-free formula."""
    if has_quantifier(f):
        raise PreconditionError("sat_linear expects a formula without path quantifiers")
    frag = classify_fragment(f)
    if frag.kinds & {"DPDA", "PDA"}:
        raise UndecidableFragmentError(CITE_DPDA_SAT)
    alphabet = _alphabet_of(f, alphabet)
    props = frozenset(atoms_of(f))
    letters = all_letters(props, alphabet)
    result = SatResult(UNSAT, str(frag), sat_complexity(frag), alphabet=alphabet)
    vpl = any(p.kind in VP_KINDS for p in params(f) if p is not STAR and p is not SIGMA)
    if not vpl:
        aba = ltl_reg_to_aba(to_nnf(f), props, alphabet, inclusive=inclusive)
        ba = aba_to_ba(aba, letters)
        result.stats = {"automaton_states": aba.size, "buchi_states": len(ba.states)}
        empty, witness = buchi_emptiness(ba)
        if not empty:
            result.status = SAT
            result.witness = witness
        return result
    if inclusive:
        raise PreconditionError("the inclusive reading is only available for "
                                "regular parameters")
    aja = ltl_vpl_to_aja(f, props, alphabet)
    bp = aja_to_bvps(aja, letters, max_heads=budget)
    result.stats = {"automaton_states": aja.size, "bvps_locations": len(bp.locations),
                    "bvps_rules": len(bp.rules)}
    cfg = bpds_accepting_configs(bp)
    result.certificate = cfg
    if any(cfg.accepts(c) for c in bp.initial):
        result.status = SAT
        found = pds_lasso(bp, height=witness_height)
        if found is not None:
            stem, loop = found
            result.witness = LassoWord([r.label for _, r in stem], [r.label for _, r in loop])
    return result


def lasso_to_kts(w, alphabet, name="model"):
    """Single-path KTS whose only run has trace ``w``."""
    n = len(w)
    states = tuple(f"w{i}" for i in range(n))
    trans = [(states[i], w[i][1], states[w.norm(i + 1)]) for i in range(n)]
    labels = {states[i]: frozenset(w[i][0]) for i in range(n)}
    props = frozenset(x for i in range(n) for x in w[i][0])
    return KTS(name, states, alphabet, trans, labels, states[0], props=props)
