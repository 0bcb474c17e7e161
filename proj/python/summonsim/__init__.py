"""Feasibility toolkit for summoning and signalling tasks on a 1+1-D lattice."""

from summonsim._core import (
    ECHO_LOCAL_INDEX,
    CallMode,
    CallPattern,
    CallReturnPair,
    CausalClass,
    InputError,
    OriginalSignalTask,
    PairCheck,
    Point,
    Promise,
    RefinedBitTask,
    Report,
    ResourceError,
    SummoningTask,
    SweepReport,
    TokenPlan,
    TokenWindow,
    ValidationReport,
    admissible_patterns,
    classify,
    demo_names,
    earliest_arrival,
    monotonicity_sweep,
    precedes,
    pt,
    refined_local_search,
    run_demo,
    run_text,
    search_text,
    strictly_precedes,
    token_feasible,
    token_text,
    validate_summoning,
    validate_text,
)

__all__ = [
    "ECHO_LOCAL_INDEX",
    "CallMode",
    "CallPattern",
    "CallReturnPair",
    "CausalClass",
    "InputError",
    "OriginalSignalTask",
    "PairCheck",
    "Point",
    "Promise",
    "RefinedBitTask",
    "Report",
    "ResourceError",
    "SummoningTask",
    "SweepReport",
    "TokenPlan",
    "TokenWindow",
    "ValidationReport",
    "admissible_patterns",
    "classify",
    "demo_names",
    "earliest_arrival",
    "monotonicity_sweep",
    "precedes",
    "pt",
    "refined_local_search",
    "run_demo",
    "run_text",
    "search_text",
    "strictly_precedes",
    "token_feasible",
    "token_text",
    "validate_summoning",
    "validate_text",
]
