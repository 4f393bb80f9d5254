"""Sewing diagrams G -> H <- G'.

The target G' is read off from H by re-joining segments at each vertex:

* an end vertex starts or stops a string;
* a type-I vertex is erased, joining its two segments;
* a type-II vertex is cut into a head and a tail carrying its label;
* a degree-3 vertex joins the end edge with one half of the edge it sits
  on, and cuts the other half there.

Coordinates on G' are inherited from G by arc length, so every point of G'
corresponds to exactly one point of G. Lengths are carried on ``Edge.length``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import IllegalMove, NotComposable
from .graph import (
    ONE,
    ZERO,
    Edge,
    EdgeUnion,
    Move,
    Point,
    Segment,
    SewingGraph,
    TypeI,
    TypeII,
    TypeIII,
    Vertex,
    head,
    replay,
    tail,
    vertex_census,
)


def _join_rules(h: SewingGraph):
    """Return (next segment map, segments that begin a target string)."""
    first = {e.id: h.segments_of(e.id)[0] for e in h.base}
    last = {e.id: h.segments_of(e.id)[-1] for e in h.base}
    ending_at, starting_at = {}, {}
    for s in h.segments:
        ending_at[Point(s.edge, s.end)] = s
        starting_at[Point(s.edge, s.start)] = s
    nxt: dict[Segment, Segment] = {}
    starts: list[Segment] = []
    for v in h.vertices:
        if v.kind == "end":
            p = v.points[0]
            if p.pos == 0:
                starts.append(first[p.edge])
        elif v.kind == "I":
            (hd,) = [p for p in v.points if p.pos == 1]
            (tl,) = [p for p in v.points if p.pos == 0]
            nxt[last[hd.edge]] = first[tl.edge]
        elif v.kind == "II":
            starts.append(starting_at[v.interior])
        else:
            w, (q,) = v.interior, v.ends
            incoming, outgoing = ending_at[w], starting_at[w]
            if q.pos == 1:
                nxt[last[q.edge]] = outgoing
            else:
                nxt[incoming] = first[q.edge]
                starts.append(outgoing)
    return nxt, starts


def _seg_length(base: EdgeUnion, s: Segment) -> Fraction:
    return (s.end - s.start) * base[s.edge].length


@dataclass(frozen=True)
class SewingDiagram:
    source: EdgeUnion
    moves: tuple[Move, ...]
    mid: SewingGraph
    target: EdgeUnion
    back_map: tuple[tuple[Segment, ...], ...]

    @cached_property
    def _where(self) -> dict[Segment, tuple[int, Fraction]]:
        """Segment -> (target edge id, arc length before it on that edge)."""
        out = {}
        for j, chain in enumerate(self.back_map):
            acc = ZERO
            for s in chain:
                out[s] = (j, acc)
                acc += _seg_length(self.source, s)
        return out

    def to_source(self, j: int, at) -> Point:
        """The point of G under position ``at`` of target edge ``j``."""
        at = Fraction(at)
        arc = at * self.target[j].length
        acc = ZERO
        for s in self.back_map[j]:
            length = _seg_length(self.source, s)
            if arc <= acc + length:
                return Point(s.edge, s.start + (arc - acc) / self.source[s.edge].length)
            acc += length
        raise ValueError(f"position {at} outside target edge {j}")

    def to_target(self, p: Point) -> tuple[int, Fraction]:
        """Target coordinates of a point of G lying strictly inside a segment of H."""
        for s in self.mid.segments_of(p.edge):
            if s.start < p.pos < s.end:
                j, acc = self._where[s]
                arc = acc + (p.pos - s.start) * self.source[p.edge].length
                return j, arc / self.target[j].length
        raise ValueError(f"{p} is a vertex of H or lies off G")

    def vertex_at_target_end(self, p: Point) -> Vertex:
        """The vertex of H onto which an end of a target edge maps."""
        chain = self.back_map[p.edge]
        return self.mid.start_vertex(chain[0]) if p.pos == 0 else self.mid.end_vertex(chain[-1])

    def target_end_at(self, v: Vertex, side: str) -> Point:
        """The target end of the given side sitting at vertex ``v`` of H."""
        for j, chain in enumerate(self.back_map):
            if side == "tail" and self.mid.start_vertex(chain[0]).id == v.id:
                return tail(j)
            if side == "head" and self.mid.end_vertex(chain[-1]).id == v.id:
                return head(j)
        raise ValueError(f"no target {side} at vertex {v.id}")

    def code(self, exact: bool = True) -> tuple:
        return (self.source.label_pairs(), self.mid.code(exact), self.target.label_pairs())


def extend(source: EdgeUnion, moves: Iterable[Move] = ()) -> SewingDiagram:
    moves = tuple(moves)
    h = replay(source, moves)
    nxt, starts = _join_rules(h)
    order = {e.id: i for i, e in enumerate(source.edges)}
    starts.sort(key=lambda s: (order[s.edge], s.start))
    chains = []
    for s in starts:
        chain = [s]
        while chain[-1] in nxt:
            chain.append(nxt[chain[-1]])
        chains.append(tuple(chain))
    covered = sum(len(c) for c in chains)
    if covered != len(h.segments):
        raise IllegalMove("extension rules do not cover H; the graph is not a valid sewing graph")
    edges = []
    for j, chain in enumerate(chains):
        length = sum((_seg_length(source, s) for s in chain), ZERO)
        edges.append(Edge(j, h.start_vertex(chain[0]).label, h.end_vertex(chain[-1]).label, length))
    return SewingDiagram(source, moves, h, EdgeUnion(tuple(edges)), tuple(chains))


def trivial(source: EdgeUnion) -> SewingDiagram:
    return extend(source, ())


def is_elementary(t: SewingDiagram) -> bool:
    return len(t.moves) == 1 and isinstance(t.moves[0], (TypeI, TypeII))


def mirror(t: SewingDiagram) -> tuple[Move, ...]:
    """Moves on G' whose extension has target G (the reverse diagram)."""
    h = t.mid
    inserts, joins, merges = [], [], []
    for v in h.vertices:
        if v.kind == "I":
            (hd,) = [p for p in v.points if p.pos == 1]
            s = h.segments_of(hd.edge)[-1]
            j, acc = t._where[s]
            at = (acc + _seg_length(t.source, s)) / t.target[j].length
            inserts.append(TypeII(j, at, v.label))
        elif v.kind == "II":
            joins.append(TypeI(t.target_end_at(v, "head"), t.target_end_at(v, "tail")))
        elif v.kind == "III":
            w, (q,) = v.interior, v.ends
            # the segment that runs straight through v in G'
            through = h.segments_of(q.edge)[-1] if q.pos == 1 else _ending_at(h, w)
            j, acc = t._where[through]
            at = (acc + _seg_length(t.source, through)) / t.target[j].length
            cut = t.target_end_at(v, "head" if q.pos == 1 else "tail")
            inserts.append(TypeII(j, at, v.label))
            merges.append(TypeIII(cut, j, at))
    inserts.sort(key=lambda m: (m.edge, m.at))
    joins.sort(key=lambda m: (m.a, m.b))
    merges.sort(key=lambda m: (m.edge, m.at))
    return tuple(inserts + joins + merges)


def _ending_at(h: SewingGraph, p: Point) -> Segment:
    for s in h.segments_of(p.edge):
        if s.end == p.pos:
            return s
    raise ValueError(p)


def _lift(t: SewingDiagram, m: Move) -> Move:
    """Express a move on the target of ``t`` as a move on its source."""
    if isinstance(m, TypeII):
        p = _lift_interior(t, m.edge, m.at)
        return TypeII(p.edge, p.pos, m.label)
    if isinstance(m, TypeI):
        va, vb = (_lift_end(t, x) for x in (m.a, m.b))
        if va.id == vb.id:
            raise NotComposable("both ends map to the same vertex of H")
        kinds = (va.kind, vb.kind)
        if kinds == ("end", "end"):
            return TypeI(va.points[0], vb.points[0])
        if kinds == ("end", "II"):
            return TypeIII(va.points[0], vb.interior.edge, vb.interior.pos)
        if kinds == ("II", "end"):
            return TypeIII(vb.points[0], va.interior.edge, va.interior.pos)
        raise NotComposable(f"identifying a {kinds[0]} vertex with a {kinds[1]} vertex is neither type I nor III")
    if isinstance(m, TypeIII):
        ve = _lift_end(t, m.end)
        if ve.kind != "end":
            raise NotComposable("the end vertex maps to an inner vertex of H")
        p = _lift_interior(t, m.edge, m.at)
        return TypeIII(ve.points[0], p.edge, p.pos)
    raise TypeError(f"not a move: {m!r}")


def _lift_end(t: SewingDiagram, p: Point) -> Vertex:
    if p.edge not in t.target or not p.is_end:
        raise NotComposable(f"{p} is not an end of the target")
    return t.vertex_at_target_end(p)


def _lift_interior(t: SewingDiagram, j: int, at) -> Point:
    if j not in t.target or not 0 < Fraction(at) < 1:
        raise NotComposable(f"position {at} on edge {j} is not an interior target point")
    p = t.to_source(j, at)
    if t.mid.vertex_at(p) is not None:
        raise NotComposable(f"target point ({j}, {at}) maps onto a vertex of H")
    return p


def compose(t: SewingDiagram, second: SewingDiagram) -> SewingDiagram:
    """The diagram ``second`` after ``t``; ``second`` must start on ``t``'s target.

    Any diagram may be given as ``second``; elementary ones are the usual case.
    """
    if second.source.label_pairs() != t.target.label_pairs():
        raise NotComposable("source of the second diagram does not match the target of the first")
    lifted = tuple(_lift(t, m) for m in second.moves)
    try:
        result = extend(t.source, t.moves + lifted)
    except IllegalMove as exc:
        raise NotComposable(f"lifted move is illegal: {exc.reason}") from None
    # number the composite's strings as ``second`` numbers its target
    rank = {}
    for j, chain in enumerate(result.back_map):
        s = chain[0]
        k, at = t.to_target(Point(s.edge, (s.start + s.end) / 2))
        rank[j] = second.to_target(Point(k, at))[0]
    return _renumber(result, sorted(rank, key=rank.get))


def _renumber(t: SewingDiagram, order: list[int]) -> SewingDiagram:
    """Reorder the target strings of ``t``; ``order[i]`` is the old index of new string i."""
    edges = tuple(Edge(i, t.target[j].tail, t.target[j].head, t.target[j].length) for i, j in enumerate(order))
    return SewingDiagram(t.source, t.moves, t.mid, EdgeUnion(edges), tuple(t.back_map[j] for j in order))


def _localize(prefix: SewingDiagram, m: Move) -> Move:
    """Express a move on G in the coordinates of ``prefix``'s target."""
    def local_end(p: Point) -> Point:
        return prefix.target_end_at(prefix.mid.vertex_at(p), "tail" if p.pos == 0 else "head")

    if isinstance(m, TypeII):
        j, at = prefix.to_target(Point(m.edge, Fraction(m.at)))
        return TypeII(j, at, m.label)
    if isinstance(m, TypeI):
        return TypeI(local_end(m.a), local_end(m.b))
    u = local_end(m.end)
    w = prefix.mid.vertex_at(m.interior)
    partner = prefix.target_end_at(w, "head" if m.end.pos == 0 else "tail")
    return TypeI(u, partner)


def decompose(t: SewingDiagram) -> list[SewingDiagram]:
    """One elementary diagram per move; folding them with ``compose`` rebuilds ``t``."""
    out = []
    prefix = trivial(t.source)
    for m in t.moves:
        part = extend(prefix.target, (_localize(prefix, m),))
        out.append(part)
        prefix = compose(prefix, part)
    return out


def fold(start: SewingDiagram, parts: Iterable[SewingDiagram]) -> SewingDiagram:
    for p in parts:
        start = compose(start, p)
    return start


def canonical_decomposition(t: SewingDiagram) -> tuple[SewingDiagram, SewingDiagram, SewingDiagram]:
    """Split ``t`` into products, then degree-3 saddles, then coproducts.

    Returns (T1, T3, T2) with T = T2 after T3 after T1.
    """
    h = t.mid
    by_point = lambda v: v.points
    glued = sorted((v for v in h.vertices if v.kind == "I"), key=by_point)
    t1 = extend(t.source, [TypeI(*sorted(v.points, key=lambda p: -p.pos)) for v in glued])

    inserts, merges = [], []
    for v in sorted((v for v in h.vertices if v.kind == "III"), key=by_point):
        j, at = t1.to_target(v.interior)
        (q,) = v.ends
        end = t1.target_end_at(t1.mid.vertex_at(q), "tail" if q.pos == 0 else "head")
        inserts.append(TypeII(j, at, v.label))
        merges.append(TypeIII(end, j, at))
    t3 = extend(t1.target, inserts + merges)

    splits = []
    for v in sorted((v for v in h.vertices if v.kind == "II"), key=by_point):
        j, at = t1.to_target(v.interior)
        k, at3 = t3.to_target(Point(j, at))
        splits.append(TypeII(k, at3, v.label))
    t2 = extend(t3.target, splits)
    return t1, t3, t2


class EdgeCount(NamedTuple):
    e: int
    e_prime: int
    p1: int
    p2: int
    p3: int
    holds: bool


def edge_count_relation(t: SewingDiagram) -> EdgeCount:
    """Census of ``t`` and whether e' = e + p2 - p1 holds."""
    p1, p2, p3 = vertex_census(t.mid)
    e, e2 = len(t.source), len(t.target)
    return EdgeCount(e, e2, p1, p2, p3, e2 == e + p2 - p1)


def same_structure(a: SewingDiagram, b: SewingDiagram, exact: bool = True) -> bool:
    """Equal source, equal H (as classes of source points) and equal target labels.

    Target strings are compared as a multiset; their numbering is a convention.
    """
    ca, cb = a.code(exact), b.code(exact)
    return ca[:2] == cb[:2] and sorted(ca[2]) == sorted(cb[2])
