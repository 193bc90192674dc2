"""Exact integral Khovanov homology of braid closures via enhanced Kauffman states."""

__version__ = "0.1.0"

from .braid import BraidWord, closure, parse_braid, torus_word, w_word
from .diagram import LinkDiagram
from .homology import HomologyTable, compute, torsion_summary
from .polynomial import bracket, graded_euler

__all__ = [
    "BraidWord", "LinkDiagram", "HomologyTable", "bracket", "closure", "compute",
    "graded_euler", "parse_braid", "torsion_summary", "torus_word", "w_word",
]
