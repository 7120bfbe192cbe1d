"""Projectivity groups of simply laced spherical buildings."""

from .classify import Verdict, n_of
from .diagram import Diagram, make_diagram
from .roots import opposition, polar_type

__version__ = "0.1.0"

__all__ = ["Diagram", "Verdict", "make_diagram", "n_of", "opposition", "polar_type"]
