from .dp import CapExceeded, DPInfeasible, SlotSpec, dp_place_tall_vertical, dp_rotations, orientation_options
from .moldable import Job, MoldableEstimate, dp_moldable, moldable_estimate, moldable_oracle, psi, schedule_allotment
from .oracle import LimitExceeded, OracleLimits, exact_oracle
from .search import SearchResult, binary_search, dual_approx_search, guess_range
from .structured import (
    Exhaustive,
    GuessRejected,
    Heuristic,
    Hint,
    Provenance,
    SolveResult,
    StructureGuess,
    normalize_epsilon,
    place_with_structure,
    solve_structured,
)

__all__ = [
    "CapExceeded", "DPInfeasible", "SlotSpec", "dp_place_tall_vertical", "dp_rotations", "orientation_options",
    "Job", "MoldableEstimate", "dp_moldable", "moldable_estimate", "moldable_oracle", "psi", "schedule_allotment",
    "LimitExceeded", "OracleLimits", "exact_oracle",
    "SearchResult", "binary_search", "dual_approx_search", "guess_range",
    "Exhaustive", "GuessRejected", "Heuristic", "Hint", "Provenance", "SolveResult", "StructureGuess",
    "normalize_epsilon", "place_with_structure", "solve_structured",
]
