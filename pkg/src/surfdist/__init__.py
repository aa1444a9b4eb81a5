"""Subgroup distortion of clean surfaces in non-geometric 3-manifolds."""

from .classifier import ClassificationReport, ComponentVerdict, InvalidInput, classify_component, classify_surface
from .document import Document, DocumentError, export_dot, parse_input, serialize
from .growth import GrowthClass, dominates, equivalent, join, representative, superadditive_closure
from .model import (
    AFComponent,
    Block,
    Curve,
    Geometry,
    JsjTorus,
    ManifoldGraph,
    Piece,
    PieceKind,
    SurfaceGraph,
    Violation,
    almost_fiber,
    validate,
)
from .spirality import (
    DirectedCycle,
    Traversal,
    cycle_basis,
    governor,
    is_trivial,
    lambda_bound,
    lambda_by_enumeration,
    spirality,
    supercritical_cycle_through_gi,
    vertex_potential,
    weight,
)
from .witness import Crossing, TraceConfig, XiPeriod, build_witness, trace_bounds, verify_witness

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "ComponentVerdict",
    "InvalidInput",
    "classify_component",
    "classify_surface",
    "Document",
    "DocumentError",
    "export_dot",
    "parse_input",
    "serialize",
    "GrowthClass",
    "dominates",
    "equivalent",
    "join",
    "representative",
    "superadditive_closure",
    "AFComponent",
    "Block",
    "Curve",
    "Geometry",
    "JsjTorus",
    "ManifoldGraph",
    "Piece",
    "PieceKind",
    "SurfaceGraph",
    "Violation",
    "almost_fiber",
    "validate",
    "DirectedCycle",
    "Traversal",
    "cycle_basis",
    "governor",
    "is_trivial",
    "lambda_bound",
    "lambda_by_enumeration",
    "spirality",
    "supercritical_cycle_through_gi",
    "vertex_potential",
    "weight",
    "Crossing",
    "TraceConfig",
    "XiPeriod",
    "build_witness",
    "trace_bounds",
    "verify_witness",
]
