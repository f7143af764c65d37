"""Fiberwise Nielsen-type periodic invariants of the torus maps ``f_{r,s}``."""

from .reidemeister import FiberTorusMap

__version__ = "0.1.0"
__all__ = ["FiberTorusMap"]
