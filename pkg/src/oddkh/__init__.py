"""Odd Khovanov homology from planar diagrams and linking matrices."""

from .chords import LinkingData, certify_mutant_seed, linking_data
from .complex import build_geometric, build_thrifty, edge_assignment
from .diagram import LinkDiagram, parse_pd, resolve
from .homology import BigradedHomology, compute_homology, jones_oracle

__version__ = "0.1.0"

__all__ = [
    "LinkDiagram",
    "LinkingData",
    "BigradedHomology",
    "parse_pd",
    "resolve",
    "linking_data",
    "certify_mutant_seed",
    "build_thrifty",
    "build_geometric",
    "edge_assignment",
    "compute_homology",
    "jones_oracle",
]
