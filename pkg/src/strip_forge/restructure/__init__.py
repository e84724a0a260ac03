from .boxes import Box, BoxKind, ContainerSet
from .grid import AlignmentError, GridPacking, Slice, TallPlacement, grid_resolution, make_grid_packing
from .reorder import (
    BorderViolation,
    BoxContents,
    ReorderResult,
    ShapeError,
    reorder_medium_box,
    reorder_small_box,
    reorder_tall_box,
    simple_reorder,
    two_shelf_reorder,
)
from .structure import (
    BoxPartition,
    ConstructionFailed,
    GapNotFound,
    RoundedPacking,
    StructuredPacking,
    build_structure,
    check_partition,
    check_structure,
    partition_into_boxes,
)

__all__ = [
    "Box", "BoxKind", "ContainerSet",
    "AlignmentError", "GridPacking", "Slice", "TallPlacement", "grid_resolution", "make_grid_packing",
    "BorderViolation", "BoxContents", "ReorderResult", "ShapeError",
    "simple_reorder", "reorder_tall_box", "reorder_medium_box", "reorder_small_box", "two_shelf_reorder",
    "BoxPartition", "ConstructionFailed", "GapNotFound", "RoundedPacking", "StructuredPacking",
    "build_structure", "check_partition", "check_structure", "partition_into_boxes",
]
