"""Reading and writing diagram documents.

A document is JSON of the form::

    {"context": {...},
     "diagrams": [{"name": "merge_after_cut", "kind": "sewing", "edges": [["I", "J"], ["K", "L"]],
                   "moves": [{"type": "II", "edge": 0, "at": "1/2", "label": "K"},
                             {"type": "III", "end": [1, "tail"], "edge": 0, "at": "1/2"}]}]}

Positions are exact rationals written "p/q". Rendering is canonical, so
parsing a rendered document and rendering it again gives the same bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import jsonschema

from .branes import BraneContext
from .errors import ParseError, SchemaError, SemanticError, SewcalcError
from .graph import Move, TypeI, TypeII, TypeIII, end_point, make_edge_union, replay, side_of
from .saddle import InteractionPoint, SaddleDiagram, build_saddle
from .sewing import SewingDiagram, extend

_LABEL = {"type": "string", "minLength": 1}
_RATIONAL = {"type": "string", "minLength": 1}
_END = {"type": "array", "prefixItems": [{"type": "integer"}, {"enum": ["tail", "head"]}], "minItems": 2, "maxItems": 2}

CONTEXT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["ambient_dim", "branes"],
    "properties": {
        "ambient_dim": {"type": "integer", "minimum": 1},
        "branes": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "dim"],
                "properties": {
                    "id": _LABEL,
                    "dim": {"type": "integer", "minimum": 0},
                    "betti": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                },
            },
        },
        "empty_intersections": {"type": "array", "items": {"type": "array", "items": _LABEL}},
    },
}

_MOVE = {
    "type": "object",
    "required": ["type"],
    "properties": {"type": {"enum": ["I", "II", "III"]}},
    "allOf": [
        {
            "if": {"properties": {"type": {"const": "I"}}},
            "then": {"additionalProperties": False, "required": ["a", "b"],
                     "properties": {"type": True, "a": _END, "b": _END}},
        },
        {
            "if": {"properties": {"type": {"const": "II"}}},
            "then": {"additionalProperties": False, "required": ["edge", "at", "label"],
                     "properties": {"type": True, "edge": {"type": "integer"}, "at": _RATIONAL, "label": _LABEL}},
        },
        {
            "if": {"properties": {"type": {"const": "III"}}},
            "then": {"additionalProperties": False, "required": ["end", "edge", "at"],
                     "properties": {"type": True, "end": _END, "edge": {"type": "integer"}, "at": _RATIONAL}},
        },
    ],
}

_EDGES = {"type": "array", "items": {"type": "array", "items": _LABEL, "minItems": 2, "maxItems": 2}}

_DIAGRAM = {
    "type": "object",
    "required": ["name", "kind"],
    "properties": {"name": {"type": "string", "minLength": 1}, "kind": {"enum": ["sewing", "saddle", "disc"]}},
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "sewing"}}},
            "then": {
                "additionalProperties": False,
                "required": ["edges", "moves"],
                "properties": {
                    "name": True, "kind": True, "edges": _EDGES, "moves": {"type": "array", "items": _MOVE},
                    "fundamental_inputs": {
                        "type": "array",
                        "items": {
                            "type": "object", "additionalProperties": False, "required": ["edge", "class"],
                            "properties": {"edge": {"type": "integer"},
                                           "class": {"type": "array", "items": _LABEL, "minItems": 1}},
                        },
                    },
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "saddle"}}},
            "then": {
                "additionalProperties": False,
                "required": ["edges", "points"],
                "properties": {
                    "name": True, "kind": True, "edges": _EDGES,
                    "points": {
                        "type": "array",
                        "items": {
                            "type": "object", "additionalProperties": False, "required": ["participants", "perm"],
                            "properties": {
                                "participants": {"type": "array", "items": {
                                    "type": "array", "prefixItems": [{"type": "integer"}, _RATIONAL],
                                    "minItems": 2, "maxItems": 2}},
                                "perm": {"type": "array", "items": {
                                    "type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}},
                            },
                        },
                    },
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "disc"}}},
            "then": {
                "additionalProperties": False,
                "required": ["arc_labels"],
                "properties": {"name": True, "kind": True, "arc_labels": {"type": "array", "items": _LABEL}},
            },
        },
    ],
}

DOCUMENT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["diagrams"],
    "properties": {"context": CONTEXT_SCHEMA, "diagrams": {"type": "array", "items": _DIAGRAM}},
}

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")
_HALF_RE = re.compile(r"^e(\d+)([+-])$")


@dataclass(frozen=True)
class DiagramEntry:
    name: str
    kind: str
    edges: tuple[tuple[str, str], ...] = ()
    moves: tuple[Move, ...] = ()
    points: tuple[InteractionPoint, ...] = ()
    arc_labels: tuple[str, ...] = ()
    fundamental_inputs: tuple[tuple[int, tuple[str, ...]], ...] = ()

    def sewing(self) -> SewingDiagram:
        return extend(make_edge_union(self.edges), self.moves)

    def saddle(self, ctx: BraneContext | None = None) -> SaddleDiagram:
        return build_saddle(ctx, make_edge_union(self.edges), self.points)

    @property
    def inputs(self) -> dict[int, tuple[str, ...]]:
        return dict(self.fundamental_inputs)


@dataclass(frozen=True)
class InputDocument:
    context: BraneContext | None
    diagrams: tuple[DiagramEntry, ...]

    def get(self, name: str) -> DiagramEntry:
        for d in self.diagrams:
            if d.name == name:
                return d
        raise SemanticError(f"no diagram named {name!r}", "$.diagrams", code="unknown-diagram")


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _rational(text: str, where: str) -> Fraction:
    if not _RATIONAL_RE.match(text):
        raise SemanticError(f"{text!r} is not an exact rational 'p/q'", where)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise SemanticError(f"{text!r} has a zero denominator", where) from None


def load_json(data: bytes | str, what: str = "document") -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{what} is not UTF-8: {exc.reason}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, "$", exc.lineno, exc.colno) from None


def _check_schema(obj, schema):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(obj), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise SchemaError(err.message, _path(err.absolute_path))


def parse_context(data: bytes | str | dict) -> BraneContext:
    obj = data if isinstance(data, dict) else load_json(data, "context")
    _check_schema(obj, CONTEXT_SCHEMA)
    return _context(obj, "$")


def _context(obj, where) -> BraneContext:
    try:
        return BraneContext.from_dict(obj)
    except SewcalcError as exc:
        raise SemanticError(str(exc), where, code=exc.code) from None


def parse(data: bytes | str) -> InputDocument:
    obj = load_json(data)
    _check_schema(obj, DOCUMENT_SCHEMA)
    ctx = _context(obj["context"], "$.context") if "context" in obj else None
    seen = set()
    entries = []
    for i, raw in enumerate(obj["diagrams"]):
        where = f"$.diagrams[{i}]"
        if raw["name"] in seen:
            raise SemanticError(f"duplicate diagram name {raw['name']!r}", where + ".name")
        seen.add(raw["name"])
        entries.append(_entry(raw, where, ctx))
    return InputDocument(ctx, tuple(entries))


def _known(ctx, labels, where):
    if ctx is None:
        return
    for x in labels:
        if x not in ctx.branes:
            raise SemanticError(f"unknown brane label {x!r}", where, code="unknown-label")


def _entry(raw, where, ctx) -> DiagramEntry:
    kind = raw["kind"]
    if kind == "disc":
        labels = tuple(raw["arc_labels"])
        if not labels or len(labels) % 2:
            raise SemanticError(f"arc_labels needs a positive even count, got {len(labels)}",
                                where + ".arc_labels", code="odd-arc-count")
        _known(ctx, labels, where + ".arc_labels")
        return DiagramEntry(raw["name"], kind, arc_labels=labels)

    edges = tuple((t, h) for t, h in raw["edges"])
    _known(ctx, [x for e in edges for x in e], where + ".edges")
    n = len(edges)

    def edge_index(e, at):
        if not 0 <= e < n:
            raise SemanticError(f"edge index {e} out of range (0..{n - 1})", at)
        return e

    if kind == "sewing":
        moves = []
        for k, m in enumerate(raw["moves"]):
            at = f"{where}.moves[{k}]"
            if m["type"] == "I":
                a = end_point(edge_index(m["a"][0], at + ".a"), m["a"][1])
                b = end_point(edge_index(m["b"][0], at + ".b"), m["b"][1])
                moves.append(TypeI(a, b))
            elif m["type"] == "II":
                pos = _rational(m["at"], at + ".at")
                if not 0 < pos < 1:
                    raise SemanticError(f"position {m['at']} outside (0, 1)", at + ".at")
                _known(ctx, [m["label"]], at + ".label")
                moves.append(TypeII(edge_index(m["edge"], at + ".edge"), pos, m["label"]))
            else:
                pos = _rational(m["at"], at + ".at")
                if not 0 < pos < 1:
                    raise SemanticError(f"position {m['at']} outside (0, 1)", at + ".at")
                end = end_point(edge_index(m["end"][0], at + ".end"), m["end"][1])
                moves.append(TypeIII(end, edge_index(m["edge"], at + ".edge"), pos))
        base = make_edge_union(edges)
        for k in range(len(moves)):
            try:
                replay(base, moves[: k + 1])
            except SewcalcError as exc:
                raise SemanticError(str(exc), f"{where}.moves[{k}]", code=exc.code) from None
        inputs = []
        for k, item in enumerate(raw.get("fundamental_inputs", [])):
            at = f"{where}.fundamental_inputs[{k}]"
            e = edge_index(item["edge"], at + ".edge")
            labels = tuple(item["class"])
            _known(ctx, labels, at + ".class")
            missing = {x for x in edges[e] if x not in labels}
            if missing:
                raise SemanticError(f"class must contain the edge labels {sorted(missing)}", at + ".class")
            inputs.append((e, labels))
        if len({e for e, _ in inputs}) != len(inputs):
            raise SemanticError("at most one fundamental input per edge", where + ".fundamental_inputs")
        return DiagramEntry(raw["name"], kind, edges, tuple(moves), fundamental_inputs=tuple(sorted(inputs)))

    points = []
    for k, p in enumerate(raw["points"]):
        at = f"{where}.points[{k}]"
        parts = []
        for q, (e, pos) in enumerate(p["participants"]):
            value = _rational(pos, f"{at}.participants[{q}]")
            if not 0 <= value <= 1:
                raise SemanticError(f"position {pos} outside [0, 1]", f"{at}.participants[{q}]")
            parts.append((edge_index(e, f"{at}.participants[{q}]"), value))
        perm = []
        for q, (src, dst) in enumerate(p["perm"]):
            ms, md = _HALF_RE.match(src), _HALF_RE.match(dst)
            if not ms or not md or ms.group(2) != "-" or md.group(2) != "+":
                raise SemanticError("perm pairs map an incoming half 'e<i>-' to an outgoing half 'e<i>+'",
                                    f"{at}.perm[{q}]")
            perm.append((int(ms.group(1)), int(md.group(1))))
        points.append(InteractionPoint.make(parts, perm))
    try:
        build_saddle(ctx, make_edge_union(edges), points)
    except SewcalcError as exc:
        raise SemanticError(str(exc), where + ".points", code=exc.code) from None
    return DiagramEntry(raw["name"], kind, edges, points=tuple(points))


def move_to_json(m: Move) -> dict:
    if isinstance(m, TypeI):
        return {"type": "I", "a": [m.a.edge, side_of(m.a)], "b": [m.b.edge, side_of(m.b)]}
    if isinstance(m, TypeII):
        return {"type": "II", "edge": m.edge, "at": str(Fraction(m.at)), "label": m.label}
    return {"type": "III", "end": [m.end.edge, side_of(m.end)], "edge": m.edge, "at": str(Fraction(m.at))}


def entry_to_json(d: DiagramEntry) -> dict:
    out: dict[str, Any] = {"name": d.name, "kind": d.kind}
    if d.kind == "disc":
        out["arc_labels"] = list(d.arc_labels)
        return out
    out["edges"] = [list(e) for e in d.edges]
    if d.kind == "sewing":
        out["moves"] = [move_to_json(m) for m in d.moves]
        if d.fundamental_inputs:
            out["fundamental_inputs"] = [{"edge": e, "class": list(c)} for e, c in d.fundamental_inputs]
    else:
        out["points"] = [
            {"participants": [[e, str(t)] for e, t in p.participants],
             "perm": [[f"e{a}-", f"e{b}+"] for a, b in p.perm]}
            for p in d.points
        ]
    return out


def sewing_entry(name: str, t: SewingDiagram) -> DiagramEntry:
    return DiagramEntry(name, "sewing", t.source.label_pairs(), t.moves)


def document_to_json(doc: InputDocument) -> dict:
    out: dict[str, Any] = {"diagrams": [entry_to_json(d) for d in doc.diagrams]}
    if doc.context is not None:
        out["context"] = doc.context.to_dict()
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render(doc: InputDocument) -> str:
    return dumps(document_to_json(doc))
