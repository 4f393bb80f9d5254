"""Edge unions, sewing graphs and the three elementary moves.

A sewing graph H is stored as a quotient of its source edge union G: every
vertex of H is a class of points of G. A point is an (edge id, position) pair,
where position 0 is the tail of the edge, 1 is its head and anything strictly
between is an inserted interior vertex. Edges of H are the segments into which
the interior vertices cut the edges of G.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Union

from .errors import IllegalMove

ZERO = Fraction(0)
ONE = Fraction(1)


class Point(NamedTuple):
    edge: int
    pos: Fraction

    @property
    def is_end(self) -> bool:
        return self.pos == 0 or self.pos == 1


def tail(edge: int) -> Point:
    return Point(edge, ZERO)


def head(edge: int) -> Point:
    return Point(edge, ONE)


def end_point(edge: int, side: str) -> Point:
    if side not in ("tail", "head"):
        raise ValueError(f"end side must be 'tail' or 'head', not {side!r}")
    return tail(edge) if side == "tail" else head(edge)


def side_of(p: Point) -> str:
    return "tail" if p.pos == 0 else "head"


@dataclass(frozen=True)
class Edge:
    id: int
    tail: str
    head: str
    length: Fraction = ONE


@dataclass(frozen=True)
class EdgeUnion:
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("edge ids must be unique")

    @cached_property
    def _by_id(self):
        return {e.id: e for e in self.edges}

    def __getitem__(self, edge_id: int) -> Edge:
        return self._by_id[edge_id]

    def __contains__(self, edge_id) -> bool:
        return edge_id in self._by_id

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.edges)

    def label_pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple((e.tail, e.head) for e in self.edges)

    def label_of(self, p: Point) -> str:
        e = self[p.edge]
        return e.tail if p.pos == 0 else e.head

    def subset(self, ids: Iterable[int]) -> EdgeUnion:
        keep = set(ids)
        return EdgeUnion(tuple(e for e in self.edges if e.id in keep))


def make_edge_union(pairs: Iterable[tuple[str, str]]) -> EdgeUnion:
    edges = []
    for i, (t, h) in enumerate(pairs):
        if not t or not h:
            raise ValueError("edge labels must be nonempty")
        edges.append(Edge(i, t, h))
    return EdgeUnion(tuple(edges))


@dataclass(frozen=True)
class TypeI:
    """Identify a head end vertex with a tail end vertex of another component."""

    a: Point
    b: Point


@dataclass(frozen=True)
class TypeII:
    """Insert a labeled degree-2 vertex at an interior position of an edge."""

    edge: int
    at: Fraction
    label: str


@dataclass(frozen=True)
class TypeIII:
    """Identify an end vertex with a previously inserted degree-2 vertex."""

    end: Point
    edge: int
    at: Fraction

    @property
    def interior(self) -> Point:
        return Point(self.edge, self.at)


Move = Union[TypeI, TypeII, TypeIII]

KINDS = ("end", "I", "II", "III")


@dataclass(frozen=True)
class Vertex:
    id: int
    label: str
    points: tuple[Point, ...]
    kind: str

    @property
    def interior(self) -> Point | None:
        for p in self.points:
            if not p.is_end:
                return p
        return None

    @property
    def ends(self) -> tuple[Point, ...]:
        return tuple(p for p in self.points if p.is_end)

    @property
    def in_degree(self) -> int:
        return sum(1 for p in self.points if p.pos != 0)

    @property
    def out_degree(self) -> int:
        return sum(1 for p in self.points if p.pos != 1)

    @property
    def degree(self) -> int:
        return self.in_degree + self.out_degree


class Segment(NamedTuple):
    edge: int
    start: Fraction
    end: Fraction


@dataclass(frozen=True)
class SewingGraph:
    base: EdgeUnion
    vertices: tuple[Vertex, ...]
    next_id: int

    @classmethod
    def initial(cls, base: EdgeUnion) -> SewingGraph:
        verts = []
        for i, e in enumerate(base.edges):
            verts.append(Vertex(2 * i, e.tail, (tail(e.id),), "end"))
            verts.append(Vertex(2 * i + 1, e.head, (head(e.id),), "end"))
        return cls(base, tuple(verts), 2 * len(base))

    @cached_property
    def _at(self) -> dict:
        table = {}
        for v in self.vertices:
            for p in v.points:
                table[p] = v
        return table

    def vertex_at(self, p: Point) -> Vertex | None:
        return self._at.get(p)

    @cached_property
    def cuts(self) -> dict[int, tuple[Fraction, ...]]:
        """Sorted interior vertex positions on each source edge."""
        out = {e.id: [] for e in self.base}
        for v in self.vertices:
            for p in v.points:
                if not p.is_end and p.edge in out:
                    out[p.edge].append(p.pos)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @cached_property
    def _segments(self) -> dict[int, tuple[Segment, ...]]:
        out = {}
        for e in self.base:
            marks = (ZERO,) + self.cuts[e.id] + (ONE,)
            out[e.id] = tuple(Segment(e.id, a, b) for a, b in zip(marks, marks[1:]))
        return out

    def segments_of(self, edge: int) -> tuple[Segment, ...]:
        return self._segments[edge]

    @cached_property
    def segments(self) -> tuple[Segment, ...]:
        return tuple(s for e in self.base for s in self._segments[e.id])

    def start_vertex(self, s: Segment) -> Vertex:
        return self._at[Point(s.edge, s.start)]

    def end_vertex(self, s: Segment) -> Vertex:
        return self._at[Point(s.edge, s.end)]

    @cached_property
    def component_of(self) -> dict[int, int]:
        """Map vertex id to the smallest vertex id of its connected component."""
        parent = {v.id: v.id for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in self.segments:
            a, b = find(self.start_vertex(s).id), find(self.end_vertex(s).id)
            if a != b:
                parent[max(a, b)] = min(a, b)
        return {x: find(x) for x in parent}

    def components(self) -> list[list[Vertex]]:
        groups: dict[int, list[Vertex]] = {}
        for v in self.vertices:
            groups.setdefault(self.component_of[v.id], []).append(v)
        return [groups[k] for k in sorted(groups)]

    def same_component(self, u: Vertex, v: Vertex) -> bool:
        return self.component_of[u.id] == self.component_of[v.id]

    def code(self, exact: bool = True) -> tuple:
        """Canonical coding of H relative to the edge order of G.

        With ``exact=False`` interior positions are replaced by their rank on
        the edge, so isotopic graphs get equal codes.
        """
        def key(p: Point):
            if exact or p.is_end:
                return (p.edge, p.pos)
            return (p.edge, Fraction(self.cuts[p.edge].index(p.pos) + 1, len(self.cuts[p.edge]) + 1))

        return tuple(sorted((v.kind, v.label, tuple(sorted(key(p) for p in v.points))) for v in self.vertices))


def _end_vertex(g: SewingGraph, p: Point, role: str) -> Vertex:
    if p.edge not in g.base:
        raise IllegalMove(f"{role}: no edge {p.edge}")
    if not p.is_end:
        raise IllegalMove(f"{role}: position must be 0 (tail) or 1 (head)")
    v = g.vertex_at(p)
    if v.kind != "end":
        raise IllegalMove(f"{role}: vertex at edge {p.edge} {side_of(p)} is not an end vertex (degree overflow)")
    return v


def apply_move(g: SewingGraph, m: Move) -> SewingGraph:
    if isinstance(m, TypeI):
        va = _end_vertex(g, m.a, "first vertex")
        vb = _end_vertex(g, m.b, "second vertex")
        if {m.a.pos, m.b.pos} != {ZERO, ONE}:
            raise IllegalMove("type I needs one head vertex and one tail vertex")
        if va.label != vb.label:
            raise IllegalMove(f"label mismatch: {va.label!r} vs {vb.label!r}")
        if g.same_component(va, vb):
            raise IllegalMove("vertices lie in the same component")
        new = Vertex(g.next_id, va.label, tuple(sorted(va.points + vb.points)), "I")
        keep = tuple(v for v in g.vertices if v.id not in (va.id, vb.id))
        return SewingGraph(g.base, keep + (new,), g.next_id + 1)
    if isinstance(m, TypeII):
        if m.edge not in g.base:
            raise IllegalMove(f"no edge {m.edge}")
        at = Fraction(m.at)
        if not 0 < at < 1:
            raise IllegalMove("insertion position must lie strictly inside (0, 1)")
        if at in g.cuts[m.edge]:
            raise IllegalMove("insertion position coincides with an existing vertex")
        if not m.label:
            raise IllegalMove("inserted vertex needs a label")
        new = Vertex(g.next_id, m.label, (Point(m.edge, at),), "II")
        return SewingGraph(g.base, g.vertices + (new,), g.next_id + 1)
    if isinstance(m, TypeIII):
        ve = _end_vertex(g, m.end, "end vertex")
        vi = g.vertex_at(Point(m.edge, Fraction(m.at)))
        if vi is None or vi.kind != "II":
            raise IllegalMove("type III needs a degree-2 vertex inserted by a type II move")
        if ve.label != vi.label:
            raise IllegalMove(f"label mismatch: {ve.label!r} vs {vi.label!r}")
        if g.same_component(ve, vi):
            raise IllegalMove("vertices lie in the same component")
        new = Vertex(g.next_id, ve.label, tuple(sorted(ve.points + vi.points)), "III")
        keep = tuple(v for v in g.vertices if v.id not in (ve.id, vi.id))
        return SewingGraph(g.base, keep + (new,), g.next_id + 1)
    raise TypeError(f"not a move: {m!r}")


def replay(base: EdgeUnion, moves: Iterable[Move]) -> SewingGraph:
    g = SewingGraph.initial(base)
    for m in moves:
        g = apply_move(g, m)
    return g


def _expected_kind(v: Vertex) -> str | None:
    ends = [p for p in v.points if p.is_end]
    inner = [p for p in v.points if not p.is_end]
    if len(v.points) == 1:
        return "end" if ends else "II"
    if len(v.points) == 2 and len(ends) == 2:
        return "I"
    if len(v.points) == 2 and len(ends) == 1:
        return "III"
    return None


def validate(g: SewingGraph) -> list[str]:
    """Return the list of violated sewing-graph invariants (empty when valid)."""
    problems = []
    seen: dict[Point, int] = {}
    for v in g.vertices:
        for p in v.points:
            if p.edge not in g.base:
                problems.append(f"vertex {v.id}: refers to missing edge {p.edge}")
            elif not 0 <= p.pos <= 1:
                problems.append(f"vertex {v.id}: position {p.pos} outside [0, 1]")
            if p in seen:
                problems.append(f"point {p} belongs to vertices {seen[p]} and {v.id}")
            seen[p] = v.id
    for e in g.base:
        for p in (tail(e.id), head(e.id)):
            if p not in seen:
                problems.append(f"edge {e.id} {side_of(p)} is not attached to any vertex")
    if problems:
        return problems
    for v in g.vertices:
        if v.degree > 3:
            problems.append(f"vertex {v.id}: degree {v.degree} exceeds 3")
        if v.degree >= 2 and v.in_degree == 0:
            problems.append(f"vertex {v.id}: degree-{v.degree} source")
        if v.degree >= 2 and v.out_degree == 0:
            problems.append(f"vertex {v.id}: degree-{v.degree} sink")
        expected = _expected_kind(v)
        if expected != v.kind:
            problems.append(f"vertex {v.id}: provenance {v.kind!r} does not match its shape")
        for p in v.ends:
            if g.base.label_of(p) != v.label:
                problems.append(f"vertex {v.id}: label {v.label!r} differs from edge {p.edge} label")
    # forest check: a graph is a forest iff edges = vertices - components
    parent = {v.id: v.id for v in g.vertices}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for s in g.segments:
        a, b = find(g.start_vertex(s).id), find(g.end_vertex(s).id)
        if a == b:
            problems.append(f"cycle through segment {tuple(s)}")
            break
        parent[a] = b
    return problems


def vertex_census(g: SewingGraph) -> tuple[int, int, int]:
    """Counts of type-I degree-2, type-II degree-2 and degree-3 vertices."""
    p1 = sum(1 for v in g.vertices if v.kind == "I")
    p2 = sum(1 for v in g.vertices if v.kind == "II")
    p3 = sum(1 for v in g.vertices if v.degree == 3)
    return p1, p2, p3
