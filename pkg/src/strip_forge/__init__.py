"""Strip packing: baselines, item classification, box restructuring, the
configuration LP placement and a structure-guided solver."""

from .baselines import Infeasible, ffdh, nfdh, steinberg, upper_bound_pack
from .classify import ItemClass, Params, classify, find_delta_mu, round_height
from .core import Instance, Item, Packing, Placement, lower_bound, packing_height, validate_packing
from .solver import Exhaustive, Heuristic, Hint, exact_oracle, solve_structured

__version__ = "0.1.0"

__all__ = [
    "Instance", "Item", "Packing", "Placement", "lower_bound", "packing_height", "validate_packing",
    "Infeasible", "nfdh", "ffdh", "steinberg", "upper_bound_pack",
    "ItemClass", "Params", "classify", "find_delta_mu", "round_height",
    "Exhaustive", "Heuristic", "Hint", "exact_oracle", "solve_structured",
]
