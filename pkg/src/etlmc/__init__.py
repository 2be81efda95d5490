"""Model checking and satisfiability for temporal logics whose modalities are
constrained by finite-word automata (DFA, NFA, DVPA, VPA), against Kripke
transition systems, visibly pushdown systems and pushdown systems."""

from .automata import (Alphabet, FiniteAutomaton, Rule, fa_membership, fa_product,
                       vpa_validate)
from .errors import (EtlmcError, FormatError, UndecidableFragmentError,
                     UnknownAtBoundError)
from .logic import (SIGMA, STAR, classify_fragment, parse_formula, to_nnf, to_str)
from .modelcheck import (HOLDS, UNKNOWN, VIOLATED, Verdict, mc_branching, mc_linear,
                         regular_valuation_label)
from .omega import LassoWord, aba_to_ba, aja_to_bvps, lasso_membership
from .pushdown import BOTTOM, PDS, PDSRule
from .satcheck import SAT, UNSAT, sat_linear
from .systems import KTS, universal_generator, validate_system
from .textio import load_automata, load_formula, load_system
from .translation import ltl_reg_to_aba, ltl_vpl_to_aja

__version__ = "0.1.0"
