"""Distortion class of a clean surface from its almost fiber part."""

from __future__ import annotations

from dataclasses import dataclass

from .growth import GrowthClass, join_all, superadditive_closure
from .model import AFComponent, ManifoldGraph, SurfaceGraph, Violation, almost_fiber, validate
from .spirality import SpiralityHom, spirality

__all__ = [
    "InvalidInput",
    "ComponentVerdict",
    "ClassificationReport",
    "classify_component",
    "classify_surface",
]


class InvalidInput(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(f"{v.code}({v.id})" for v in violations))


@dataclass(frozen=True)
class ComponentVerdict:
    component: AFComponent
    has_gi: bool
    piece_count: int
    separable: bool
    distortion: GrowthClass
    hom: SpiralityHom


@dataclass(frozen=True)
class ClassificationReport:
    components: tuple[ComponentVerdict, ...]
    surface_separable: bool
    overall: GrowthClass
    lower: GrowthClass
    upper: GrowthClass


def classify_component(s: SurfaceGraph, c: AFComponent) -> ComponentVerdict:
    """Distortion of one almost fiber component.

    ==========================  ==========  ===================
    pieces                      spirality   class
    ==========================  ==========  ===================
    some geometrically infinite nontrivial  double exponential
    some geometrically infinite trivial     exponential
    >= 2, all horizontal        nontrivial  exponential
    >= 2, all horizontal        trivial     quadratic
    one horizontal              any         linear
    ==========================  ==========  ===================
    """
    hom = spirality(s, c)
    has_gi = c.has_gi
    n = len(c.pieces)
    if has_gi:
        cls = GrowthClass.EXPONENTIAL if hom.trivial else GrowthClass.DOUBLE_EXPONENTIAL
    elif n >= 2:
        cls = GrowthClass.QUADRATIC if hom.trivial else GrowthClass.EXPONENTIAL
    else:
        # one horizontal piece is undistorted whatever its loops carry
        cls = GrowthClass.LINEAR
    return ComponentVerdict(c, has_gi, n, hom.trivial, cls, hom)


def classify_surface(m: ManifoldGraph, s: SurfaceGraph) -> ClassificationReport:
    violations = validate(m, s)
    if violations:
        raise InvalidInput(violations)
    verdicts = tuple(classify_component(s, c) for c in almost_fiber(s))
    overall = join_all(v.distortion for v in verdicts)
    return ClassificationReport(
        components=verdicts,
        surface_separable=all(v.separable for v in verdicts),
        overall=overall,
        lower=overall,
        upper=superadditive_closure(overall),
    )
