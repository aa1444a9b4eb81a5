"""Builders and random instance generators shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from surfdist.model import Block, Curve, JsjTorus, ManifoldGraph, Piece, PieceKind, SurfaceGraph
from surfdist.document import Document
from surfdist.spirality import Traversal, xi

H, V, GF, GI = "horizontal", "vertical", "geometrically_finite", "geometrically_infinite"


def build(pieces: dict[str, str], curves=()) -> tuple[ManifoldGraph, SurfaceGraph]:
    """One block per piece (geometry from the kind) and one torus per curve.

    ``curves`` holds ``(id, piece_a, piece_b, h_a, h_b)`` tuples.
    """
    blocks, ps = [], []
    for pid, kind in pieces.items():
        k = PieceKind(kind)
        blocks.append(Block("B" + pid, k.geometry))
        ps.append(Piece(pid, "B" + pid, k))
    tori, cs = [], []
    for cid, a, b, ha, hb in curves:
        tori.append(JsjTorus("T" + cid, "B" + a, "B" + b))
        cs.append(Curve(cid, a, b, "T" + cid, ha, hb))
    return ManifoldGraph(blocks, tori), SurfaceGraph(ps, cs)


def build_doc(pieces, curves=(), trace_defaults=None) -> Document:
    m, s = build(pieces, curves)
    return Document(m, s, trace_defaults)


def random_instance(rng: random.Random, max_pieces=6, max_curves=10, hmax=6, kinds=(H,)):
    n = rng.randint(1, max_pieces)
    k = rng.randint(0, max_curves)
    names = [f"p{i}" for i in range(n)]
    pieces = {p: rng.choice(kinds) for p in names}
    curves = [
        (f"c{j:02d}", rng.choice(names), rng.choice(names), rng.randint(1, hmax), rng.randint(1, hmax))
        for j in range(k)
    ]
    return build(pieces, curves)


def random_trivial_instance(rng: random.Random, max_pieces=6, max_curves=10, kinds=(H,), connected=False):
    """Random surface whose covering degrees come from a random potential."""
    n = rng.randint(1, max_pieces)
    names = [f"p{i}" for i in range(n)]
    phi = {p: Fraction(rng.randint(1, 6), rng.randint(1, 6)) for p in names}
    pairs = []
    if connected:
        for i in range(1, n):
            pairs.append((names[rng.randrange(i)], names[i]))
    k = rng.randint(len(pairs), max(len(pairs), max_curves))
    while len(pairs) < k:
        pairs.append((rng.choice(names), rng.choice(names)))
    rng.shuffle(pairs)
    curves = []
    for j, (a, b) in enumerate(pairs):
        r = phi[b] / phi[a]
        mult = rng.randint(1, 3)
        curves.append((f"c{j:02d}", a, b, r.numerator * mult, r.denominator * mult))
    return build({p: rng.choice(kinds) for p in names}, curves), phi


def directed_edges(s: SurfaceGraph, curve_ids):
    out = []
    for cid in curve_ids:
        c = s.curve_map[cid]
        out.append((Traversal(cid, True), c.piece_a, c.piece_b))
        out.append((Traversal(cid, False), c.piece_b, c.piece_a))
    return out


def brute_force_closed_walks(s: SurfaceGraph, curve_ids, max_len: int):
    """Every closed walk of length 1..max_len, listed literally."""
    edges = directed_edges(s, curve_ids)
    out_of: dict[str, list] = {}
    for e in edges:
        out_of.setdefault(e[1], []).append(e)

    def extend(start, at, walk):
        if walk and at == start:
            yield list(walk)
        if len(walk) == max_len:
            return
        for t, _, b in out_of.get(at, ()):
            walk.append(t)
            yield from extend(start, b, walk)
            walk.pop()

    for start in sorted(out_of):
        yield from extend(start, start, [])


def brute_force_lambda(s: SurfaceGraph, curve_ids, max_len: int) -> Fraction:
    best = Fraction(1)
    found = False
    for walk in brute_force_closed_walks(s, curve_ids, max_len):
        rs = [xi(s, t) for t in walk]
        for j in range(len(rs)):
            prod = Fraction(1)
            for k in range(j, len(rs)):
                prod *= rs[k]
                best = prod if not found else max(best, prod)
                found = True
    return best
