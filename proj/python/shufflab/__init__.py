"""Ball-shuffling oracles, strategies, index simulation and the trace reduction."""

from ._shufflab import (
    ApplicabilityError,
    BudgetError,
    Error,
    IllegalOpError,
    ReplayError,
    ValidationError,
    ShuffleOp,
    apply_ops,
    check_constraints,
    optimal_cost,
    optimal_cost_table,
    reduce,
    run_index,
    run_strategy,
    theorem_bounds,
    tradeoff_region,
)

__all__ = [
    "ApplicabilityError",
    "BudgetError",
    "Error",
    "IllegalOpError",
    "ReplayError",
    "ValidationError",
    "ShuffleOp",
    "apply_ops",
    "check_constraints",
    "optimal_cost",
    "optimal_cost_table",
    "reduce",
    "run_index",
    "run_strategy",
    "theorem_bounds",
    "tradeoff_region",
]
