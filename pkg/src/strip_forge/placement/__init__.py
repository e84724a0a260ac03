from .horizontal import HorizontalPlacement, group_widths, place_horizontal
from .lp import (
    ConfigSolution,
    Configuration,
    LPBox,
    LPInfeasible,
    UniverseOverflow,
    enumerate_configurations,
    residuals,
    solve_config_lp,
)
from .small import SmallPlacement, min_steinberg_height, place_medium, place_small
from .vertical import PlacementError, SubBox, VerticalPlacement, place_vertical, stack_overflow

__all__ = [
    "ConfigSolution", "Configuration", "LPBox", "LPInfeasible", "UniverseOverflow",
    "enumerate_configurations", "residuals", "solve_config_lp",
    "VerticalPlacement", "SubBox", "PlacementError", "place_vertical", "stack_overflow",
    "HorizontalPlacement", "group_widths", "place_horizontal",
    "SmallPlacement", "min_steinberg_height", "place_small", "place_medium",
]
