"""fracproj: a computational laboratory for projections of planar fractals.

Exact finite-scale models of covering/packing numbers, projection
cardinalities of structured point sets, and the explicit constructions whose
projections have prescribed box/packing behaviour — together with the
closed-form exceptional-set bound formulas and a CLI that renders sweep
reports as CSV and SVG.
"""

from .bounds import FORMULAS, DomainError
from .covering import (
    ScaleProfile,
    covering_number_1d,
    covering_number_2d,
    estimate_box_dimension,
    packing_number_1d,
    packing_number_2d,
)
from .geometry import (
    HORIZONTAL,
    VERTICAL,
    Arc,
    BallUnion,
    Direction,
    IntervalUnion,
    PointSet,
    SquareUnion,
    direction_from_angle,
    direction_from_pair,
    exact_project,
    project,
    rational_direction,
    rotate_to,
)

__version__ = "1.0.0"

__all__ = [
    "Arc", "BallUnion", "Direction", "DomainError", "FORMULAS",
    "HORIZONTAL", "IntervalUnion", "PointSet", "ScaleProfile", "SquareUnion",
    "VERTICAL", "covering_number_1d", "covering_number_2d",
    "direction_from_angle", "direction_from_pair", "estimate_box_dimension",
    "exact_project", "packing_number_1d", "packing_number_2d", "project",
    "rational_direction", "rotate_to",
]
