"""Inflations of finite posets along set-valued diagrams, with exact homology checks.

The main entry points are re-exported here; see the submodules for the rest.
"""
from __future__ import annotations

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import InflateKitError, InvariantViolation, ParseError, TooLarge
from .homology import (
    HomologyReport,
    cm_check,
    complex_homology,
    euler_characteristic,
    homology,
    poset_homology,
    wedge_certificate,
)
from .inflation import complexity, completion, etale_check, inflate
from .poset import Poset, build_poset, dual, enumerate_opens, is_isomorphic, order_complex
from .sheaf import Diagram, build_diagram, is_flabby, is_inhabited, is_trivial, sections, trivial_diagram
from .simplicial import (
    SimplicialComplex,
    SimplicialPoset,
    build_multigraph,
    build_simplicial_map,
    diagram_from_map,
    face_poset,
    forbidden_subcomplex,
    link,
    multiclique_diagram,
    vertex_inflation_diagram,
)
from .verify import predicted_betti, sphere_count_over_simplex, verify_inflation

__all__ = [name for name in dir() if not name.startswith("_") and name != "annotations"]
