"""Deterministic SVG figures from emotion-contagion sweep tables."""

from .io import FigureInputError, load_sweep, load_vitality
from .render import FIGURE_KINDS, FigureSpec, render

__all__ = [
    "FigureInputError",
    "load_sweep",
    "load_vitality",
    "FIGURE_KINDS",
    "FigureSpec",
    "render",
]
