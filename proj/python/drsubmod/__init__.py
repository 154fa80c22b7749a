"""Minimize DR-submodular functions over mixed-integer sets with forest precedences."""

from ._core import (
    DrsubError,
    Instance,
    Oracle,
    check_dr,
    decompose,
    extreme_point,
    hull_rows,
    linopt,
    load,
    min_over_extreme_points,
    minimize,
    minimize_set_function,
    normalize,
    separate,
)

__all__ = [
    "DrsubError",
    "Instance",
    "Oracle",
    "check_dr",
    "decompose",
    "extreme_point",
    "hull_rows",
    "linopt",
    "load",
    "min_over_extreme_points",
    "minimize",
    "minimize_set_function",
    "normalize",
    "separate",
]
