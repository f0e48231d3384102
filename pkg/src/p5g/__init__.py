"""Distance-2 coloring and discharging toolkit for planar graphs of girth at least five."""

__version__ = "0.1.0"

from .coloring import Coloring, dsatur, exact_chi2, extend_light, greedy_square, validate_coloring
from .corpus import gen_cycle, gen_dodecahedron, gen_girth5_random, gen_spider, read_p5g, write_p5g
from .discharge import apply_rules, audit, initial_charges, r7_share, settle
from .graph import (
    UNBOUNDED,
    FaceSet,
    RotationGraph,
    build_graph,
    girth,
    square,
    trace_faces,
    validate_planar_embedding,
)
from .structure import check_reducible, poor_vertices, profile, weak_neighbors

__all__ = [
    "UNBOUNDED",
    "Coloring",
    "FaceSet",
    "RotationGraph",
    "apply_rules",
    "audit",
    "build_graph",
    "check_reducible",
    "dsatur",
    "exact_chi2",
    "extend_light",
    "gen_cycle",
    "gen_dodecahedron",
    "gen_girth5_random",
    "gen_spider",
    "girth",
    "greedy_square",
    "initial_charges",
    "poor_vertices",
    "profile",
    "r7_share",
    "read_p5g",
    "settle",
    "square",
    "trace_faces",
    "validate_coloring",
    "validate_planar_embedding",
    "weak_neighbors",
    "write_p5g",
]
