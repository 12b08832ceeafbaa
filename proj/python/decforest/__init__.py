"""Decremental forest structures with tree-sum and subtree-sum queries."""

from ._decforest import (
    DecforestError,
    Structure,
    make_structure,
    optimal_depth,
    parity_trace,
    random_trace,
    replay,
    spine_trace,
    structure_names,
)

__all__ = [
    "DecforestError",
    "Structure",
    "make_structure",
    "optimal_depth",
    "parity_trace",
    "random_trace",
    "replay",
    "spine_trace",
    "structure_names",
]
