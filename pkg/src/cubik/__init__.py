"""Finite CAT(0) cube complexes: pocsets, cubings, quarterspace reduction,
halfspace refinement and development of square complexes."""
from ._kernels import BACKEND
from .errors import CubikError
from .median import Graph, MedianGraph, validate_median, wall_labels
from .pocset import Pocset, cubing, enumerate_ultrafilters, find_ultrafilter

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CubikError",
    "Graph",
    "MedianGraph",
    "Pocset",
    "cubing",
    "enumerate_ultrafilters",
    "find_ultrafilter",
    "validate_median",
    "wall_labels",
]
