"""Approximation-fixpoint semantics for propositional choice logic programs."""
from .errors import (
    AssumptionViolation, ChoiceAftError, DialectError, InconsistentPairError, ParseError,
    ResourceCapExceeded, SignatureMismatch, UnsupportedProgram,
)
from .evaluation import (
    FourValue, eval4, eval_formula4, is_3v_model, is_3v_supported, is_model,
    is_supported_model, satisfies,
)
from .groundedness import (
    GroundednessReport, LevelMap, Notion, erdem_grounded, grounded, grounded_bruteforce,
    groundedness_of_cstable, is_a_grounded, is_d_grounded, is_s_grounded, is_trigger,
)
from .lattice import (
    AtomSet, AtomSetFamily, Pair, Signature, ai_leq, hoare_leq, interval, leq_i, leq_t,
    smyth_leq,
)
from .limits import Limits, current_limits, using_limits
from .operators import (
    NdaoOutput, OperatorKind, applicable, apply_ndao, d2c, hd_lower, ic, ic_d, ic_lower,
    ic_upper,
)
from .parser import parse_program
from .semantics import (
    Flavor, StableResult, WfsTrace, c_complete_lower, c_complete_upper, c_stable_fixpoints,
    fixpoints, prefixpoint_models, stable_fixpoints, supported_models, wfs_reach,
)
from .syntax import (
    ChoiceAtom, ChoiceProgram, ChoiceRule, DisjunctiveProgram, DisjunctiveRule, extensionalize,
    is_aggregate, is_convex, is_monotone, is_normal, mk_cardinality, mk_count_eq,
    mk_count_neq, mk_literal,
)

__version__ = "0.1.0"
