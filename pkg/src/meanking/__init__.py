"""Maximally entangled line states of two prime-dimension qudits and the
Mean King and basis-tracking protocols built on them."""
from .finitefield import InvalidDimensionError, ModInt, PrimeDim, as_dim, is_valid_dim
from .geometry import Line, Point, line, point
from .mub import CB, Shifted, parse_basis
from .protocol import EXHAUSTIVE, Sampled, Undetermined, run_channel, run_mkp, run_tracking

__version__ = "0.1.0"

__all__ = [
    "CB", "EXHAUSTIVE", "InvalidDimensionError", "Line", "ModInt", "Point", "PrimeDim",
    "Sampled", "Shifted", "Undetermined", "as_dim", "is_valid_dim", "line", "parse_basis",
    "point", "run_channel", "run_mkp", "run_tracking",
]
