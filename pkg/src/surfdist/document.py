"""JSON document format, canonical serialization, reports and DOT export."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .classifier import InvalidInput, classify_surface
from .model import (
    Block,
    Curve,
    Geometry,
    JsjTorus,
    ManifoldGraph,
    Piece,
    PieceKind,
    SurfaceGraph,
    almost_fiber,
)
from .spirality import DirectedCycle, Traversal, governor, lambda_bound
from .witness import Crossing, TraceConfig

__all__ = [
    "DocumentError",
    "DocumentSyntaxError",
    "UnknownField",
    "DuplicateId",
    "DanglingReference",
    "BadEnumValue",
    "Document",
    "parse_input",
    "serialize",
    "parse_rational",
    "parse_cycle",
    "parse_trace_config",
    "trace_config_to_json",
    "export_dot",
    "build_report",
    "format_report_text",
]

FORMAT_VERSION = 1


class DocumentError(ValueError):
    kind = "DocumentError"

    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{self.kind} at {location}: {message}")

    def as_dict(self) -> dict:
        return {"kind": self.kind, "location": self.location, "message": self.message}


class DocumentSyntaxError(DocumentError):
    kind = "SyntaxError"


class UnknownField(DocumentError):
    kind = "UnknownField"


class DuplicateId(DocumentError):
    kind = "DuplicateId"


class DanglingReference(DocumentError):
    kind = "DanglingReference"


class BadEnumValue(DocumentError):
    kind = "BadEnumValue"


def _canonical_manifold(m: ManifoldGraph) -> ManifoldGraph:
    return ManifoldGraph(
        tuple(sorted(m.blocks, key=lambda b: b.id)),
        tuple(sorted(m.tori, key=lambda t: t.id)),
    )


def _canonical_surface(s: SurfaceGraph) -> SurfaceGraph:
    return SurfaceGraph(
        tuple(sorted(s.pieces, key=lambda p: p.id)),
        tuple(sorted(s.curves, key=lambda c: c.id)),
    )


@dataclass(frozen=True)
class Document:
    """A manifold, a surface in it, and optional defaults for the tracer.

    Lists are kept sorted by id so equal documents compare equal.
    """

    manifold: ManifoldGraph
    surface: SurfaceGraph
    trace_defaults: dict[str, Any] | None = field(default=None, hash=False)
    version: int = FORMAT_VERSION

    def __post_init__(self):
        object.__setattr__(self, "manifold", _canonical_manifold(self.manifold))
        object.__setattr__(self, "surface", _canonical_surface(self.surface))


# ---------------------------------------------------------------- parsing

_RATIONAL = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str, location: str = "$") -> Fraction:
    """Parse a positive rational written ``"p/q"`` or ``"p"``."""
    if not isinstance(text, str):
        raise DocumentSyntaxError(location, f"expected a rational string 'p/q', got {text!r}")
    mt = _RATIONAL.match(text)
    if not mt or (mt.group(2) is not None and int(mt.group(2)) == 0):
        raise DocumentSyntaxError(location, f"malformed rational {text!r}")
    value = Fraction(int(mt.group(1)), int(mt.group(2) or 1))
    if value <= 0:
        raise DocumentSyntaxError(location, f"rational must be positive, got {text!r}")
    return value


def _object(value, location: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
    if not isinstance(value, dict):
        raise DocumentSyntaxError(location, f"expected an object, got {type(value).__name__}")
    for key in value:
        if key not in required and key not in optional:
            raise UnknownField(f"{location}.{key}", f"unknown field {key!r}")
    for key in required:
        if key not in value:
            raise DocumentSyntaxError(location, f"missing field {key!r}")
    return value


def _array(value, location: str) -> list:
    if not isinstance(value, list):
        raise DocumentSyntaxError(location, f"expected an array, got {type(value).__name__}")
    return value


def _string(value, location: str) -> str:
    if not isinstance(value, str) or not value:
        raise DocumentSyntaxError(location, f"expected a nonempty string, got {value!r}")
    return value


def _integer(value, location: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentSyntaxError(location, f"expected an integer, got {value!r}")
    return value


def _enum(enum_cls, value, location: str):
    try:
        return enum_cls(_string(value, location))
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise BadEnumValue(location, f"{value!r} is not one of: {allowed}") from None


def _unique(items, location: str) -> None:
    seen = set()
    for i, item in enumerate(items):
        if item.id in seen:
            raise DuplicateId(f"{location}[{i}].id", f"duplicate id {item.id!r}")
        seen.add(item.id)


def _reference(ref: str, table, location: str, what: str) -> None:
    if ref not in table:
        raise DanglingReference(location, f"unknown {what} {ref!r}")


_TRACE_FIELDS = ("crossings", "L_prime", "rho", "Lambda", "epsilon")
_CROSSING_FIELDS = ("xi", "lambda_in", "lambda_out", "step")


def _parse_trace_fragment(value, location: str) -> dict[str, Any]:
    obj = _object(value, location, (), _TRACE_FIELDS)
    out: dict[str, Any] = {}
    for key in ("L_prime", "rho", "Lambda", "epsilon"):
        if key in obj:
            out[key] = parse_rational(obj[key], f"{location}.{key}")
    if "crossings" in obj:
        crossings = []
        for i, item in enumerate(_array(obj["crossings"], f"{location}.crossings")):
            loc = f"{location}.crossings[{i}]"
            raw = _object(item, loc, ("xi",), _CROSSING_FIELDS[1:])
            crossings.append(Crossing(**{k: parse_rational(v, f"{loc}.{k}") for k, v in raw.items()}))
        out["crossings"] = tuple(crossings)
    return out


def parse_input(text: bytes | str) -> Document:
    """Parse a UTF-8 JSON document; raises a ``DocumentError`` subclass."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"byte {exc.start}", "input is not valid UTF-8") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None

    top = _object(raw, "$", ("version", "manifold", "surface"), ("trace_defaults",))
    version = _integer(top["version"], "$.version")
    if version != FORMAT_VERSION:
        raise BadEnumValue("$.version", f"unsupported version {version}, expected {FORMAT_VERSION}")

    man = _object(top["manifold"], "$.manifold", ("blocks", "tori"))
    blocks = []
    for i, item in enumerate(_array(man["blocks"], "$.manifold.blocks")):
        loc = f"$.manifold.blocks[{i}]"
        obj = _object(item, loc, ("id", "geometry"))
        blocks.append(Block(_string(obj["id"], f"{loc}.id"), _enum(Geometry, obj["geometry"], f"{loc}.geometry")))
    _unique(blocks, "$.manifold.blocks")
    block_ids = {b.id for b in blocks}

    tori = []
    for i, item in enumerate(_array(man["tori"], "$.manifold.tori")):
        loc = f"$.manifold.tori[{i}]"
        obj = _object(item, loc, ("id", "block_a", "block_b"))
        t = JsjTorus(
            _string(obj["id"], f"{loc}.id"),
            _string(obj["block_a"], f"{loc}.block_a"),
            _string(obj["block_b"], f"{loc}.block_b"),
        )
        _reference(t.block_a, block_ids, f"{loc}.block_a", "block")
        _reference(t.block_b, block_ids, f"{loc}.block_b", "block")
        tori.append(t)
    _unique(tori, "$.manifold.tori")
    torus_ids = {t.id for t in tori}

    surf = _object(top["surface"], "$.surface", ("pieces", "curves"))
    pieces = []
    for i, item in enumerate(_array(surf["pieces"], "$.surface.pieces")):
        loc = f"$.surface.pieces[{i}]"
        obj = _object(item, loc, ("id", "block", "kind"))
        p = Piece(
            _string(obj["id"], f"{loc}.id"),
            _string(obj["block"], f"{loc}.block"),
            _enum(PieceKind, obj["kind"], f"{loc}.kind"),
        )
        _reference(p.block, block_ids, f"{loc}.block", "block")
        pieces.append(p)
    _unique(pieces, "$.surface.pieces")
    piece_ids = {p.id for p in pieces}

    curves = []
    for i, item in enumerate(_array(surf["curves"], "$.surface.curves")):
        loc = f"$.surface.curves[{i}]"
        obj = _object(item, loc, ("id", "piece_a", "piece_b", "torus", "h_a", "h_b"))
        c = Curve(
            _string(obj["id"], f"{loc}.id"),
            _string(obj["piece_a"], f"{loc}.piece_a"),
            _string(obj["piece_b"], f"{loc}.piece_b"),
            _string(obj["torus"], f"{loc}.torus"),
            _integer(obj["h_a"], f"{loc}.h_a"),
            _integer(obj["h_b"], f"{loc}.h_b"),
        )
        _reference(c.piece_a, piece_ids, f"{loc}.piece_a", "piece")
        _reference(c.piece_b, piece_ids, f"{loc}.piece_b", "piece")
        _reference(c.torus, torus_ids, f"{loc}.torus", "torus")
        curves.append(c)
    _unique(curves, "$.surface.curves")

    trace = None
    if "trace_defaults" in top:
        trace = _parse_trace_fragment(top["trace_defaults"], "$.trace_defaults")

    return Document(ManifoldGraph(blocks, tori), SurfaceGraph(pieces, curves), trace, version)


def parse_trace_config(text: bytes | str, doc: Document | None = None) -> TraceConfig:
    """Parse a tracer config file and merge it over ``doc.trace_defaults``."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    merged = dict(doc.trace_defaults or {}) if doc is not None else {}
    merged.update(_parse_trace_fragment(raw, "$"))
    return TraceConfig(**merged)


def _trace_fragment_to_json(frag: dict[str, Any]) -> dict:
    out: dict[str, Any] = {}
    for key, value in frag.items():
        if value is None:
            continue
        if key == "crossings":
            out[key] = [{k: str(getattr(c, k)) for k in _CROSSING_FIELDS} for c in value]
        else:
            out[key] = str(value)
    return out


def trace_config_to_json(cfg: TraceConfig) -> dict:
    return _trace_fragment_to_json({k: getattr(cfg, k) for k in _TRACE_FIELDS})


def parse_cycle(spec: str) -> DirectedCycle:
    """Parse ``"c1:fwd,c2:rev,c3"`` (orientation defaults to ``fwd``)."""
    edges = []
    for part in spec.split(","):
        part = part.strip()
        name, _, orient = part.partition(":")
        if not name or orient not in ("", "fwd", "rev"):
            raise ValueError(f"bad cycle entry {part!r}")
        edges.append(Traversal(name, orient != "rev"))
    return DirectedCycle(tuple(edges))


# ---------------------------------------------------------- serialization


def _to_json(doc: Document) -> dict:
    out = {
        "version": doc.version,
        "manifold": {
            "blocks": [{"id": b.id, "geometry": b.geometry.value} for b in doc.manifold.blocks],
            "tori": [{"id": t.id, "block_a": t.block_a, "block_b": t.block_b} for t in doc.manifold.tori],
        },
        "surface": {
            "pieces": [{"id": p.id, "block": p.block, "kind": p.kind.value} for p in doc.surface.pieces],
            "curves": [
                {"id": c.id, "piece_a": c.piece_a, "piece_b": c.piece_b, "torus": c.torus, "h_a": c.h_a, "h_b": c.h_b}
                for c in doc.surface.curves
            ],
        },
    }
    if doc.trace_defaults is not None:
        out["trace_defaults"] = _trace_fragment_to_json(doc.trace_defaults)
    return out


def serialize(doc: Document) -> str:
    return json.dumps(_to_json(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -------------------------------------------------------------------- DOT


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(doc: Document) -> str:
    """Undirected DOT multigraph of the surface dual graph.

    Almost fiber components become ``cluster_af<i>`` subgraphs; every curve
    is its own edge with an ``id`` attribute, so parallel curves stay apart.
    """
    s = doc.surface
    lines = ["graph surface {", "  node [shape=box];"]

    def node(p: Piece, indent: str) -> str:
        label = f"{p.id}\\n{p.kind.value}\\n{p.block}"
        return f"{indent}{_q(p.id)} [label=\"{label}\"];"

    grouped = set()
    for i, comp in enumerate(almost_fiber(s)):
        lines.append(f"  subgraph cluster_af{i} {{")
        lines.append(f"    label={_q('almost fiber ' + str(i))};")
        lines.append("    style=dashed;")
        for pid in comp.pieces:
            lines.append(node(s.piece_map[pid], "    "))
            grouped.add(pid)
        lines.append("  }")
    for p in s.pieces:
        if p.id not in grouped:
            lines.append(node(p, "  "))
    for c in s.curves:
        lines.append(f"  {_q(c.piece_a)} -- {_q(c.piece_b)} [id={_q(c.id)}, label=\"{c.h_a}:{c.h_b}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------- report


def build_report(doc: Document) -> tuple[dict, int]:
    """Classify ``doc``; returns the machine-readable report and an exit status."""
    try:
        cls = classify_surface(doc.manifold, doc.surface)
    except InvalidInput as exc:
        return {"status": "invalid", "violations": [v.as_dict() for v in exc.violations]}, 1
    s = doc.surface
    comps = []
    for v in cls.components:
        c = v.component
        comps.append(
            {
                "pieces": list(c.pieces),
                "curves": list(c.curves),
                "has_gi": v.has_gi,
                "piece_count": v.piece_count,
                "separable": v.separable,
                "distortion": v.distortion.label,
                "basis": [{"cycle": str(g), "weight": str(w)} for g, w in v.hom.basis],
                "governor": str(governor(s, c)),
                "lambda": str(lambda_bound(s, c)) if v.separable else None,
            }
        )
    report = {
        "status": "ok",
        "overall": cls.overall.label,
        "lower": cls.lower.label,
        "upper": cls.upper.label,
        "surface_separable": cls.surface_separable,
        "components": comps,
    }
    return report, 0


def _text_value(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ",".join(str(x) for x in v) if v else "-"
    return str(v)


def format_report_text(report: dict) -> str:
    """Human-readable report of ``key = value`` lines."""
    lines = []
    for key, value in report.items():
        if key == "components":
            lines.append(f"component_count = {len(value)}")
            for i, comp in enumerate(value):
                for ck, cv in comp.items():
                    if ck == "basis":
                        lines.append(f"component[{i}].basis_size = {len(cv)}")
                        for k, item in enumerate(cv):
                            lines.append(f"component[{i}].basis[{k}] = {item['cycle']} -> {item['weight']}")
                    else:
                        lines.append(f"component[{i}].{ck} = {_text_value(cv)}")
        elif key == "violations":
            lines.append(f"violation_count = {len(value)}")
            for i, item in enumerate(value):
                lines.append(f"violation[{i}] = {item['code']} {item['id']}: {item['message']}")
        elif key == "error":
            for ek, ev in value.items():
                lines.append(f"error.{ek} = {ev}")
        else:
            lines.append(f"{key} = {_text_value(value)}")
    return "\n".join(lines) + "\n"
