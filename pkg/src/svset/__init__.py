"""Canonical symbolic vector sets for global CTL model checking of
capacity Petri nets.

Sets of markings are finite unions of generalized intervals on the
vector partial order, kept in a unique canonical form; CTL answer sets
are computed entirely on this symbolic representation.
"""

from .ctl import (
    CtlSyntaxError,
    Formula,
    desugar,
    is_core,
    parse_formula,
    reduce_formula,
)
from .evaluator import (
    EvalOptions,
    EvalStats,
    NonConvergenceError,
    eval_extended_saturated,
    evaluate,
    evaluate_with_stats,
    saturated_reach,
    weak_pre,
)
from .petrinet import (
    PetriNet,
    PnmlError,
    build_net,
    load_capacity_config,
    parse_pnml,
)
from .svs import (
    CanonicalLimitError,
    SymbolicVectorSet,
    empty_svs,
    full_svs,
)
from .symbolic import SymbolicVector, full, sentinel
from .vectors import (
    Vector,
    as_vector,
    format_vector,
    join,
    leq,
    lex_leq,
    parse_vector,
    zero,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalLimitError",
    "CtlSyntaxError",
    "EvalOptions",
    "EvalStats",
    "Formula",
    "NonConvergenceError",
    "PetriNet",
    "PnmlError",
    "SymbolicVector",
    "SymbolicVectorSet",
    "Vector",
    "as_vector",
    "build_net",
    "desugar",
    "empty_svs",
    "eval_extended_saturated",
    "evaluate",
    "evaluate_with_stats",
    "format_vector",
    "full",
    "full_svs",
    "is_core",
    "join",
    "leq",
    "lex_leq",
    "load_capacity_config",
    "parse_formula",
    "parse_pnml",
    "parse_vector",
    "reduce_formula",
    "saturated_reach",
    "sentinel",
    "weak_pre",
    "zero",
]
