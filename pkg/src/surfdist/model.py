"""Block graph of the manifold, dual graph of the surface, and validation.

Everything here is plain data.  A ``SurfaceGraph`` is a multigraph whose
vertices are pieces and whose edges are the curves where the surface meets
the JSJ tori; loops and parallel edges are allowed.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "Geometry",
    "PieceKind",
    "Block",
    "JsjTorus",
    "ManifoldGraph",
    "Piece",
    "Curve",
    "SurfaceGraph",
    "AFComponent",
    "Violation",
    "validate",
    "almost_fiber",
]


class Geometry(str, enum.Enum):
    SEIFERT = "seifert"
    HYPERBOLIC = "hyperbolic"


class PieceKind(str, enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    GEOMETRICALLY_FINITE = "geometrically_finite"
    GEOMETRICALLY_INFINITE = "geometrically_infinite"

    @property
    def geometry(self) -> Geometry:
        if self in (PieceKind.HORIZONTAL, PieceKind.VERTICAL):
            return Geometry.SEIFERT
        return Geometry.HYPERBOLIC

    @property
    def almost_fiber(self) -> bool:
        return self in (PieceKind.HORIZONTAL, PieceKind.GEOMETRICALLY_INFINITE)


@dataclass(frozen=True)
class Block:
    id: str
    geometry: Geometry


@dataclass(frozen=True)
class JsjTorus:
    id: str
    block_a: str
    block_b: str


@dataclass(frozen=True)
class ManifoldGraph:
    blocks: tuple[Block, ...] = ()
    tori: tuple[JsjTorus, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "tori", tuple(self.tori))

    @cached_property
    def block_map(self) -> dict[str, Block]:
        return {b.id: b for b in self.blocks}

    @cached_property
    def torus_map(self) -> dict[str, JsjTorus]:
        return {t.id: t for t in self.tori}


@dataclass(frozen=True)
class Piece:
    id: str
    block: str
    kind: PieceKind


@dataclass(frozen=True)
class Curve:
    """A curve of the surface on a JSJ torus.

    ``h_a`` and ``h_b`` are the covering degrees on the ``piece_a`` and
    ``piece_b`` sides; traversing the curve from ``piece_a`` to ``piece_b``
    has ratio ``h_a / h_b``.
    """

    id: str
    piece_a: str
    piece_b: str
    torus: str
    h_a: int
    h_b: int

    @property
    def is_loop(self) -> bool:
        return self.piece_a == self.piece_b


@dataclass(frozen=True)
class SurfaceGraph:
    pieces: tuple[Piece, ...] = ()
    curves: tuple[Curve, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "curves", tuple(self.curves))

    @cached_property
    def piece_map(self) -> dict[str, Piece]:
        return {p.id: p for p in self.pieces}

    @cached_property
    def curve_map(self) -> dict[str, Curve]:
        return {c.id: c for c in self.curves}

    @cached_property
    def incident(self) -> dict[str, list[Curve]]:
        """Curves at each piece, sorted by curve id; a loop is listed once."""
        out: dict[str, list[Curve]] = {p.id: [] for p in self.pieces}
        for c in sorted(self.curves, key=lambda c: c.id):
            out.setdefault(c.piece_a, []).append(c)
            if not c.is_loop:
                out.setdefault(c.piece_b, []).append(c)
        return out


@dataclass(frozen=True)
class AFComponent:
    """A connected component of the almost fiber part."""

    pieces: tuple[str, ...]
    curves: tuple[str, ...]
    surface: SurfaceGraph = field(repr=False, compare=False)

    @property
    def kinds(self) -> list[PieceKind]:
        return [self.surface.piece_map[p].kind for p in self.pieces]

    @property
    def has_gi(self) -> bool:
        return PieceKind.GEOMETRICALLY_INFINITE in self.kinds

    def curve_objects(self) -> list[Curve]:
        cm = self.surface.curve_map
        return [cm[c] for c in self.curves]


@dataclass(frozen=True, order=True)
class Violation:
    code: str
    id: str
    message: str = field(default="", compare=False)

    def as_dict(self) -> dict:
        return {"code": self.code, "id": self.id, "message": self.message}


def _duplicates(ids) -> list[str]:
    return sorted(i for i, n in Counter(ids).items() if n > 1)


def validate(m: ManifoldGraph, s: SurfaceGraph) -> list[Violation]:
    """Return every invariant violation of ``(m, s)``; empty means valid.

    Codes: ``DuplicateId``, ``DanglingReference``, ``GeometryMismatch``,
    ``TorusMismatch``, ``NonPositiveDegree``.  The result is sorted, so it
    does not depend on the order of the input lists.
    """
    out: list[Violation] = []
    for kind, ids in (
        ("block", [b.id for b in m.blocks]),
        ("torus", [t.id for t in m.tori]),
        ("piece", [p.id for p in s.pieces]),
        ("curve", [c.id for c in s.curves]),
    ):
        for d in _duplicates(ids):
            out.append(Violation("DuplicateId", d, f"{kind} id {d!r} is not unique"))

    blocks = {b.id: b for b in m.blocks}
    tori = {t.id: t for t in m.tori}
    pieces = {p.id: p for p in s.pieces}

    for t in m.tori:
        for ref in (t.block_a, t.block_b):
            if ref not in blocks:
                out.append(Violation("DanglingReference", t.id, f"torus references unknown block {ref!r}"))

    for p in s.pieces:
        b = blocks.get(p.block)
        if b is None:
            out.append(Violation("DanglingReference", p.id, f"piece references unknown block {p.block!r}"))
        elif b.geometry is not p.kind.geometry:
            out.append(
                Violation("GeometryMismatch", p.id, f"{p.kind.value} piece on {b.geometry.value} block {b.id!r}")
            )

    for c in s.curves:
        dangling = False
        for ref in (c.piece_a, c.piece_b):
            if ref not in pieces:
                out.append(Violation("DanglingReference", c.id, f"curve references unknown piece {ref!r}"))
                dangling = True
        t = tori.get(c.torus)
        if t is None:
            out.append(Violation("DanglingReference", c.id, f"curve references unknown torus {c.torus!r}"))
            dangling = True
        if c.h_a < 1 or c.h_b < 1:
            out.append(Violation("NonPositiveDegree", c.id, f"covering degrees must be positive, got {c.h_a}:{c.h_b}"))
        if not dangling:
            sides = sorted((pieces[c.piece_a].block, pieces[c.piece_b].block))
            if sides != sorted((t.block_a, t.block_b)):
                out.append(
                    Violation("TorusMismatch", c.id, f"torus {t.id!r} does not join blocks {sides[0]!r} and {sides[1]!r}")
                )
    return sorted(out)


def almost_fiber(s: SurfaceGraph) -> list[AFComponent]:
    """Connected components of the horizontal/geometrically infinite pieces.

    Components are returned sorted by their smallest piece id; pieces and
    curves inside a component are sorted by id.
    """
    keep = sorted(p.id for p in s.pieces if p.kind.almost_fiber)
    keep_set = set(keep)
    parent = {p: p for p in keep}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    inner = [c for c in s.curves if c.piece_a in keep_set and c.piece_b in keep_set]
    for c in inner:
        ra, rb = find(c.piece_a), find(c.piece_b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    groups: dict[str, list[str]] = {}
    for p in keep:
        groups.setdefault(find(p), []).append(p)
    curves_by_root: dict[str, list[str]] = {r: [] for r in groups}
    for c in inner:
        curves_by_root[find(c.piece_a)].append(c.id)

    comps = [
        AFComponent(tuple(sorted(ps)), tuple(sorted(curves_by_root[r])), s)
        for r, ps in groups.items()
    ]
    return sorted(comps, key=lambda c: c.pieces[0])
