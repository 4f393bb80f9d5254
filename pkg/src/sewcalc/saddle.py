"""Saddle interaction diagrams and the degree calculus.

An interaction point is a set of (edge, position) participants together with a
half-edge permutation: ``perm`` maps the edge whose incoming half arrives at
the point to the edge whose outgoing half leaves it. A participant at position
0 or 1 is an end vertex of its edge; its missing half is a degenerate segment,
which is how constant strings arise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .branes import BraneContext, FormalIntersection, intersect
from .errors import FixedString, LoopCreated, SaddleError
from .graph import ONE, ZERO, Edge, EdgeUnion, Segment
from .sewing import SewingDiagram


@dataclass(frozen=True)
class InteractionPoint:
    participants: tuple[tuple[int, Fraction], ...]
    perm: tuple[tuple[int, int], ...]

    def __post_init__(self):
        parts = tuple(sorted((int(e), Fraction(t)) for e, t in self.participants))
        object.__setattr__(self, "participants", parts)
        object.__setattr__(self, "perm", tuple(sorted((int(a), int(b)) for a, b in self.perm)))

    @classmethod
    def make(cls, participants: Iterable, perm: Mapping[int, int] | Iterable) -> InteractionPoint:
        pairs = perm.items() if isinstance(perm, Mapping) else perm
        return cls(tuple(participants), tuple(pairs))

    @property
    def sigma(self) -> dict[int, int]:
        return dict(self.perm)

    @property
    def interior_count(self) -> int:
        return sum(1 for _, t in self.participants if 0 < t < 1)

    @property
    def vertex_count(self) -> int:
        return len(self.participants) - self.interior_count


@dataclass(frozen=True)
class OutString:
    """A string of the recombined target, with the source segments it runs along."""

    tail: FormalIntersection
    head: FormalIntersection
    path: tuple[Segment, ...]

    @property
    def constant(self) -> bool:
        return all(s.start == s.end for s in self.path)

    @property
    def first_edge(self) -> int:
        return self.path[0].edge

    @property
    def last_edge(self) -> int:
        return self.path[-1].edge


@dataclass(frozen=True)
class SaddleDiagram:
    source: EdgeUnion
    points: tuple[InteractionPoint, ...]
    point_labels: tuple[FormalIntersection, ...]
    strings: tuple[OutString, ...]

    @property
    def target(self) -> EdgeUnion:
        return EdgeUnion(tuple(Edge(i, str(s.tail), str(s.head)) for i, s in enumerate(self.strings)))

    @property
    def simple(self) -> bool:
        return all(len(p.participants) == 2 and p.interior_count == 2 for p in self.points)

    @property
    def all_interior(self) -> bool:
        return all(p.interior_count == len(p.participants) for p in self.points)

    @property
    def configuration(self) -> tuple[tuple[int, int], ...]:
        """Edge-point incidences (edge id, point index) of the configuration H."""
        return tuple((e, i) for i, p in enumerate(self.points) for e, _ in p.participants)


def _check(source: EdgeUnion, points: tuple[InteractionPoint, ...]):
    used: dict[tuple[int, Fraction], int] = {}
    parent = {("e", e.id): ("e", e.id) for e in source}
    parent.update({("p", i): ("p", i) for i in range(len(points))})

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, p in enumerate(points):
        edges = [e for e, _ in p.participants]
        if len(edges) < 2:
            raise SaddleError(f"point {i}: needs at least two participants")
        for e, t in p.participants:
            if e not in source:
                raise SaddleError(f"point {i}: no edge {e}")
            if not 0 <= t <= 1:
                raise SaddleError(f"point {i}: position {t} outside [0, 1]")
            if (e, t) in used:
                raise SaddleError(f"point {i}: edge {e} position {t} already used by point {used[(e, t)]}")
            used[(e, t)] = i
            a, b = find(("e", e)), find(("p", i))
            if a == b:
                raise LoopCreated(f"point {i}: configuration acquires a loop through edge {e}")
            parent[a] = b
        sigma = p.sigma
        if len(sigma) != len(p.perm) or set(sigma) != set(edges) or set(sigma.values()) != set(edges):
            raise SaddleError(f"point {i}: perm must be a bijection on the participating edges")
        for e in edges:
            if sigma[e] == e:
                raise FixedString(f"point {i}: perm sends edge {e} back to itself")


def build_saddle(ctx: BraneContext | None, source: EdgeUnion, points: Iterable[InteractionPoint]) -> SaddleDiagram:
    """Recombine the edges of ``source`` at ``points``.

    Without a context, labels are treated symbolically and nothing is empty.
    """
    points = tuple(points)
    if ctx is None:
        ctx = BraneContext.permissive(x for e in source for x in (e.tail, e.head))
    _check(source, points)

    marks: dict[int, list[tuple[Fraction, int]]] = {e.id: [] for e in source}
    for i, p in enumerate(points):
        for e, t in p.participants:
            marks[e].append((t, i))
    bounds, where = {}, {}
    for e in source:
        ms = sorted(marks[e.id])
        bounds[e.id] = [ZERO] + [t for t, _ in ms] + [ONE]
        where[e.id] = [i for _, i in ms]

    labels = []
    for p in points:
        names = []
        for e, t in p.participants:
            if t == 0:
                names.append(source[e].tail)
            elif t == 1:
                names.append(source[e].head)
        labels.append(intersect(ctx, names))

    def seg(e, k):
        b = bounds[e]
        return Segment(e, b[k], b[k + 1])

    strings = []
    limit = sum(len(b) for b in bounds.values())
    for e in source:
        path = [seg(e.id, 0)]
        tail_label = labels[where[e.id][0]] if path[0].start == path[0].end and where[e.id] else intersect(ctx, [e.tail])
        edge, k = e.id, 0
        while k < len(where[edge]):
            i = where[edge][k]
            nxt = points[i].sigma[edge]
            k = where[nxt].index(i) + 1
            edge = nxt
            path.append(seg(edge, k))
            if len(path) > limit:
                raise LoopCreated("recombination does not terminate")
        last = path[-1]
        if last.start == last.end and where[edge]:
            head_label = labels[where[edge][-1]]
        else:
            head_label = intersect(ctx, [source[edge].head])
        strings.append(OutString(tail_label, head_label, tuple(path)))
    return SaddleDiagram(source, points, tuple(labels), tuple(strings))


def components(d: SaddleDiagram) -> list[tuple[int, ...]]:
    """Edge ids of each connected component of the configuration, in source order."""
    parent = {e.id: e.id for e in d.source}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for p in d.points:
        edges = [e for e, _ in p.participants]
        for e in edges[1:]:
            a, b = find(edges[0]), find(e)
            if a != b:
                parent[b] = a
    groups: dict[int, list[int]] = {}
    for e in d.source:
        groups.setdefault(find(e.id), []).append(e.id)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: d.source.ids.index(g[0]))


def restrict(ctx: BraneContext | None, d: SaddleDiagram, edge_ids: Iterable[int]) -> SaddleDiagram:
    keep = set(edge_ids)
    pts = [p for p in d.points if p.participants[0][0] in keep]
    return build_saddle(ctx, d.source.subset(keep), pts)


def interaction_codimension(ctx: BraneContext, p: InteractionPoint) -> int:
    return ctx.ambient_dim * (p.interior_count + p.vertex_count - 1)


def saddle_degree_shift(ctx: BraneContext, d: SaddleDiagram) -> int:
    return -sum(interaction_codimension(ctx, p) for p in d.points)


def sewing_degree_shift(ctx: BraneContext, t: SewingDiagram) -> int:
    d = ctx.ambient_dim
    total = 0
    for v in t.mid.vertices:
        if v.kind == "I":
            total += ctx.dim(v.label)
        elif v.kind == "II":
            total += d - ctx.dim(v.label)
        elif v.kind == "III":
            ctx.dim(v.label)  # unknown labels still raise
            total += d
    return -total
