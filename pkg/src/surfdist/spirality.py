"""Spirality of the almost fiber part.

Each directed curve ``e`` carries the ratio ``xi_e = h_e / h_{-e}`` of
covering degrees.  The spirality of a closed walk is the product of these
ratios; it defines a homomorphism from the first homology of a component
to the positive rationals, which is trivial exactly when the surface
subgroup is separable.  All arithmetic is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .model import AFComponent, PieceKind, SurfaceGraph

__all__ = [
    "NonTrivialSpirality",
    "NoSupercriticalCycle",
    "NoGeometricallyInfinitePiece",
    "Traversal",
    "DirectedCycle",
    "SpiralityHom",
    "Potential",
    "xi",
    "cycle_basis",
    "weight",
    "spirality",
    "is_trivial",
    "governor",
    "vertex_potential",
    "lambda_bound",
    "lambda_by_enumeration",
    "max_closed_walk_weight",
    "supercritical_cycle_through_gi",
    "surface_lambda",
]


class NonTrivialSpirality(ValueError):
    pass


class NoSupercriticalCycle(ValueError):
    pass


class NoGeometricallyInfinitePiece(ValueError):
    pass


class Traversal(NamedTuple):
    curve: str
    forward: bool = True

    def reversed(self) -> "Traversal":
        return Traversal(self.curve, not self.forward)

    def __str__(self) -> str:
        return f"{self.curve}:{'fwd' if self.forward else 'rev'}"


def _ends(s: SurfaceGraph, t: Traversal) -> tuple[str, str]:
    c = s.curve_map[t.curve]
    return (c.piece_a, c.piece_b) if t.forward else (c.piece_b, c.piece_a)


def xi(s: SurfaceGraph, t: Traversal) -> Fraction:
    c = s.curve_map[t.curve]
    return Fraction(c.h_a, c.h_b) if t.forward else Fraction(c.h_b, c.h_a)


@dataclass(frozen=True)
class DirectedCycle:
    """A closed walk in the dual graph, as a sequence of directed curves."""

    edges: tuple[Traversal, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(Traversal(*e) for e in self.edges))
        if not self.edges:
            raise ValueError("a directed cycle needs at least one edge")

    def __len__(self) -> int:
        return len(self.edges)

    def reversed(self) -> "DirectedCycle":
        return DirectedCycle(tuple(e.reversed() for e in reversed(self.edges)))

    def vertices(self, s: SurfaceGraph) -> list[str]:
        """Tail of every edge, in order."""
        return [_ends(s, e)[0] for e in self.edges]

    def check(self, s: SurfaceGraph) -> None:
        """Raise ``ValueError`` unless this is a closed walk in ``s``."""
        for e in self.edges:
            if e.curve not in s.curve_map:
                raise ValueError(f"unknown curve {e.curve!r}")
        for prev, nxt in zip(self.edges, self.edges[1:] + self.edges[:1]):
            if _ends(s, prev)[1] != _ends(s, nxt)[0]:
                raise ValueError(f"walk is not closed at {prev} -> {nxt}")

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.edges)


@dataclass(frozen=True)
class SpiralityHom:
    component: AFComponent
    basis: tuple[tuple[DirectedCycle, Fraction], ...]
    trivial: bool

    @property
    def values(self) -> list[Fraction]:
        return [w for _, w in self.basis]


@dataclass(frozen=True)
class Potential:
    values: dict[str, Fraction] = field(hash=False)
    root: str


def _walk_weight(s: SurfaceGraph, edges: Iterable[Traversal]) -> Fraction:
    out = Fraction(1)
    for e in edges:
        out *= xi(s, e)
    return out


def weight(s: SurfaceGraph, gamma: DirectedCycle) -> Fraction:
    gamma.check(s)
    return _walk_weight(s, gamma.edges)


def _spanning_tree(c: AFComponent) -> tuple[dict[str, Traversal | None], dict[str, int], set[str]]:
    """BFS tree from the smallest piece, scanning curves in id order.

    Returns the traversal entering each piece (``None`` at the root), depth
    of each piece, and the set of tree curve ids.
    """
    s = c.surface
    allowed = set(c.curves)
    root = c.pieces[0]
    parent: dict[str, Traversal | None] = {root: None}
    depth = {root: 0}
    tree: set[str] = set()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for cv in s.incident.get(u, ()):
            if cv.id not in allowed or cv.is_loop:
                continue
            t = Traversal(cv.id, cv.piece_a == u)
            v = _ends(s, t)[1]
            if v not in parent:
                parent[v] = t
                depth[v] = depth[u] + 1
                tree.add(cv.id)
                queue.append(v)
    return parent, depth, tree


def _tree_path(s: SurfaceGraph, parent, depth, a: str, b: str) -> list[Traversal]:
    """Tree path from ``a`` to ``b``."""
    up: list[Traversal] = []  # a up to the meeting point
    down: list[Traversal] = []  # meeting point down to b, reversed
    while a != b:
        if depth[a] >= depth[b]:
            t = parent[a]
            up.append(t.reversed())
            a = _ends(s, t)[0]
        else:
            t = parent[b]
            down.append(t)
            b = _ends(s, t)[0]
    return up + down[::-1]


def cycle_basis(c: AFComponent) -> list[DirectedCycle]:
    """Fundamental cycles of ``c``, one per non-tree curve, in curve-id order.

    The cycle of a non-tree curve from ``a`` to ``b`` runs along the tree
    from ``a`` to ``b`` and returns through the curve reversed.  A loop is
    its own cycle, traversed forward.
    """
    s = c.surface
    parent, depth, tree = _spanning_tree(c)
    out = []
    for cid in c.curves:
        if cid in tree:
            continue
        cv = s.curve_map[cid]
        if cv.is_loop:
            out.append(DirectedCycle((Traversal(cid, True),)))
            continue
        path = _tree_path(s, parent, depth, cv.piece_a, cv.piece_b)
        out.append(DirectedCycle(tuple(path) + (Traversal(cid, False),)))
    return out


def spirality(s: SurfaceGraph, c: AFComponent) -> SpiralityHom:
    basis = tuple((g, weight(s, g)) for g in cycle_basis(c))
    return SpiralityHom(c, basis, all(w == 1 for _, w in basis))


def is_trivial(h: SpiralityHom) -> bool:
    return h.trivial


def governor(s: SurfaceGraph, c: AFComponent) -> Fraction:
    """Largest ratio over all directed curves of ``c``; 1 if there are none."""
    best = Fraction(1)
    for cv in c.curve_objects():
        r = Fraction(cv.h_a, cv.h_b)
        best = max(best, r, 1 / r)
    return best


def vertex_potential(s: SurfaceGraph, c: AFComponent) -> Potential:
    """Positive function on pieces whose ratios reproduce every ``xi``.

    Exists exactly when the spirality of ``c`` is trivial.
    """
    if not spirality(s, c).trivial:
        raise NonTrivialSpirality(f"spirality of component {c.pieces[0]!r} is nontrivial")
    parent, depth, _ = _spanning_tree(c)
    root = c.pieces[0]
    phi = {root: Fraction(1)}
    for p in sorted(depth, key=lambda p: depth[p]):
        t = parent[p]
        if t is not None:
            phi[p] = phi[_ends(s, t)[0]] * xi(s, t)
    return Potential(phi, root)


def lambda_bound(s: SurfaceGraph, c: AFComponent) -> Fraction:
    """Uniform bound on partial products of ``xi`` along closed walks.

    Equals ``max phi / min phi`` for the potential ``phi``; the bound is
    attained by a closed walk from the minimum to the maximum and back.
    """
    phi = vertex_potential(s, c).values.values()
    return max(phi) / min(phi)


def surface_lambda(s: SurfaceGraph, components: Sequence[AFComponent]) -> Fraction:
    """Largest ``lambda_bound`` over components; 1 if there are none."""
    return max((lambda_bound(s, c) for c in components), default=Fraction(1))


def _directed_edges(s: SurfaceGraph, c: AFComponent) -> list[tuple[str, str, Fraction]]:
    out = []
    for cv in c.curve_objects():
        for fwd in (True, False):
            t = Traversal(cv.id, fwd)
            a, b = _ends(s, t)
            out.append((a, b, xi(s, t)))
    return out


def _max_products(s: SurfaceGraph, c: AFComponent, max_len: int) -> list[dict[tuple[str, str], Fraction]]:
    """``best[l][(u, v)]``: largest product over walks of length exactly ``l`` from u to v."""
    edges = _directed_edges(s, c)
    best: list[dict[tuple[str, str], Fraction]] = [{(p, p): Fraction(1) for p in c.pieces}]
    for _ in range(max_len):
        nxt: dict[tuple[str, str], Fraction] = {}
        for (u, v), val in best[-1].items():
            for a, b, r in edges:
                if a == v:
                    cand = val * r
                    key = (u, b)
                    if key not in nxt or cand > nxt[key]:
                        nxt[key] = cand
        best.append(nxt)
    return best


def max_closed_walk_weight(s: SurfaceGraph, c: AFComponent, max_len: int) -> Fraction | None:
    """Largest weight of a closed walk of length ``1..max_len``; ``None`` if none exists.

    Spirality is trivial iff this is 1 for large enough ``max_len``, since
    reversing a walk inverts its weight.
    """
    best = _max_products(s, c, max_len)
    vals = [v for layer in best[1:] for (a, b), v in layer.items() if a == b]
    return max(vals) if vals else None


def _shortest_lengths(s: SurfaceGraph, c: AFComponent) -> dict[tuple[str, str], int]:
    out = {}
    for src in c.pieces:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for cv in s.incident.get(u, ()):
                for v in (cv.piece_a, cv.piece_b):
                    if v not in dist and v in c.pieces:
                        dist[v] = dist[u] + 1
                        queue.append(v)
        for v, d in dist.items():
            out[(src, v)] = d
    return out


def lambda_by_enumeration(s: SurfaceGraph, c: AFComponent, max_len: int) -> Fraction:
    """Largest partial product ``xi_{e_j} ... xi_{e_k}`` over closed walks of length <= ``max_len``.

    A walk ``W`` from ``u`` to ``v`` is a contiguous piece of some closed
    walk of length at most ``max_len`` iff ``len(W) + dist(v, u) <= max_len``,
    so the search runs over all walks by max-product dynamic programming
    instead of listing every closed walk.  Never touches the potential.
    Returns 1 when the component has no closed walks of the allowed length.
    """
    best = _max_products(s, c, max_len)
    dist = _shortest_lengths(s, c)
    out = None
    for length in range(1, max_len + 1):
        for (u, v), val in best[length].items():
            back = dist.get((v, u))
            if back is not None and length + back <= max_len and (out is None or val > out):
                out = val
    return Fraction(1) if out is None else out


def _gi_pieces(s: SurfaceGraph, c: AFComponent) -> set[str]:
    return {p for p in c.pieces if s.piece_map[p].kind is PieceKind.GEOMETRICALLY_INFINITE}


def supercritical_cycle_through_gi(s: SurfaceGraph, c: AFComponent) -> DirectedCycle:
    """Closed walk of weight > 1 through a geometrically infinite piece.

    Takes the basis cycle with the largest ``|log w|`` (first in curve-id
    order on ties), orients it so ``w > 1``, and if it misses every
    geometrically infinite piece, splices in a back-and-forth detour to the
    nearest one.  The detour contributes ``xi_e * xi_{-e} = 1`` per edge.
    """
    gi = _gi_pieces(s, c)
    if not gi:
        raise NoGeometricallyInfinitePiece(f"component {c.pieces[0]!r} has no geometrically infinite piece")
    hom = spirality(s, c)
    best: tuple[DirectedCycle, Fraction] | None = None
    for g, w in hom.basis:
        if w == 1:
            continue
        strength = max(w, 1 / w)
        if best is None or strength > max(best[1], 1 / best[1]):
            best = (g, w)
    if best is None:
        raise NoSupercriticalCycle(f"spirality of component {c.pieces[0]!r} is trivial")
    alpha = best[0] if best[1] > 1 else best[0].reversed()

    verts = alpha.vertices(s)
    if gi.intersection(verts):
        return alpha

    # multi-source BFS from the cycle's vertices, in cycle order
    allowed = set(c.curves)
    came: dict[str, Traversal | None] = {}
    queue = deque()
    for v in verts:
        if v not in came:
            came[v] = None
            queue.append(v)
    target = None
    while queue and target is None:
        u = queue.popleft()
        for cv in s.incident.get(u, ()):
            if cv.id not in allowed or cv.is_loop:
                continue
            t = Traversal(cv.id, cv.piece_a == u)
            v = _ends(s, t)[1]
            if v in came:
                continue
            came[v] = t
            if v in gi:
                target = v
                break
            queue.append(v)
    # c is connected and contains a gi piece, so target is set
    path: list[Traversal] = []
    v = target
    while came[v] is not None:
        t = came[v]
        path.append(t)
        v = _ends(s, t)[0]
    path.reverse()
    detour = path + [t.reversed() for t in reversed(path)]
    i = verts.index(v)
    edges = alpha.edges[:i] + tuple(detour) + alpha.edges[i:]
    return DirectedCycle(edges)
