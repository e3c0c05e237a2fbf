"""KVol on the staircase square-tiled surfaces St(2s-1) and their Teichmueller disks."""

from staircase.origami import (
    HomologyClass,
    IntersectionForm,
    StaircaseSurface,
    build_staircase,
    coords_from_pairings,
    intersection_form,
    named_class,
    pair,
)

__all__ = [
    "HomologyClass",
    "IntersectionForm",
    "StaircaseSurface",
    "build_staircase",
    "coords_from_pairings",
    "intersection_form",
    "named_class",
    "pair",
]
