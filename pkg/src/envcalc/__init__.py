"""Numerical envelope calculus on boxes: lsc/level-convex/convex envelopes,
Lp power-biconjugate ladders, and 1D supremal-functional demonstrations."""

from .core import (
    INF,
    BoxGrid,
    DimensionError,
    FunctionSpec,
    SampledFunction,
    coercify,
    compose_phi,
    grid1d,
    grid2d,
    interp_spec,
    sample,
    truncate_below,
)
from .convex_geometry import Polytope, contains, convex_hull, lower_hull_epigraph

__version__ = "0.1.0"
