"""Normal forms of disc diagrams.

Every connected sewing diagram is pushed through the same pipeline: products
first, then its degree-3 block is slid into a simple saddle configuration and
collapsed into one simultaneous interaction of m strings, then coproducts. The
collapsed interaction is recorded as a cyclic word of 2m arc labels, each
incoming string carrying the run of source edges merged into it and each
outgoing string carrying the labels it is later split at.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .branes import BraneContext
from .errors import Disconnected, NoOutgoing, OddArcCount, ShapeError
from .graph import Edge, EdgeUnion, SewingGraph
from .saddle import InteractionPoint, SaddleDiagram, build_saddle, components, restrict
from .sewing import SewingDiagram, canonical_decomposition

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Strand:
    """One incoming string of a core interaction and the outgoing string that follows it.

    ``merge`` lists the labels along the incoming string (tail, glue labels,
    head) and ``edges`` the source edges glued into it. ``split`` lists the
    labels along the outgoing string (tail, split labels, head).
    """

    edges: tuple[int, ...]
    merge: tuple[str, ...]
    split: tuple[str, ...]


@dataclass(frozen=True)
class CoreComponent:
    strands: tuple[Strand, ...]

    @property
    def m(self) -> int:
        return len(self.strands)

    @property
    def word(self) -> tuple[str, ...]:
        return tuple(x for s in self.strands for x in (s.merge[0], s.merge[-1]))

    def rotations(self):
        for k in range(self.m):
            yield CoreComponent(self.strands[k:] + self.strands[:k])

    def sort_key(self):
        s = self.strands
        return (self.word, tuple(x.edges for x in s), tuple(x.merge for x in s), tuple(x.split for x in s))

    def canonical(self) -> CoreComponent:
        return min(self.rotations(), key=CoreComponent.sort_key)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "word": list(self.word),
            "strands": [{"edges": list(s.edges), "merge": list(s.merge), "split": list(s.split)} for s in self.strands],
        }


@dataclass(frozen=True)
class NormalForm:
    components: tuple[CoreComponent, ...]

    @classmethod
    def of(cls, comps: Iterable[CoreComponent]) -> NormalForm:
        return cls(tuple(sorted((c.canonical() for c in comps), key=CoreComponent.sort_key)))

    def to_dict(self) -> dict:
        return {"components": [c.to_dict() for c in self.components]}

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def relabel_edges(self, mapping: dict[int, int]) -> NormalForm:
        return NormalForm.of(
            CoreComponent(tuple(Strand(tuple(mapping[e] for e in s.edges), s.merge, s.split) for s in c.strands))
            for c in self.components
        )


def deform_to_saddle(t3: SewingDiagram, ctx: BraneContext | None = None) -> SaddleDiagram:
    """Slide the end edge off every degree-3 vertex, leaving a simple crossing."""
    h = t3.mid
    if any(v.kind in ("I", "II") for v in h.vertices):
        raise ShapeError("deformation to a saddle needs a graph with only degree-1 and degree-3 vertices")
    points = []
    for v in h.vertices:
        if v.kind != "III":
            continue
        w, (q,) = v.interior, v.ends
        cuts = h.cuts[q.edge]
        if q.pos == 0:
            slide = cuts[0] / 2 if cuts else Fraction(1, 3)
        else:
            slide = (cuts[-1] + 1) / 2 if cuts else Fraction(2, 3)
        points.append(InteractionPoint.make([(w.edge, w.pos), (q.edge, slide)], {w.edge: q.edge, q.edge: w.edge}))
    return build_saddle(ctx, t3.source, points)


def collapse_simultaneous(d: SaddleDiagram) -> CoreComponent:
    """Bring all crossings of a connected saddle diagram to one point.

    Every participant must sit at an interior position. String k+1 is the one
    whose outgoing continuation ends on the head of string k, so the k-th
    outgoing string runs from the tail of string k+1 to the head of string k.
    """
    if not d.all_interior:
        raise ShapeError("collapse needs every interaction at interior points")
    if len(components(d)) != 1:
        raise Disconnected("collapse needs a connected configuration")
    starts_into = {s.last_edge: s.first_edge for s in d.strings}
    order = [d.source.edges[0].id]
    while len(order) < len(d.source):
        nxt = starts_into[order[-1]]
        if nxt == order[0]:
            raise ShapeError("recombination is not a single cycle; the configuration is not a disc")
        order.append(nxt)
    if starts_into[order[-1]] != order[0]:
        raise ShapeError("recombination is not a single cycle; the configuration is not a disc")
    strands = []
    for k, e in enumerate(order):
        after = d.source[order[(k + 1) % len(order)]]
        edge = d.source[e]
        strands.append(Strand((e,), (edge.tail, edge.head), (after.tail, edge.head)))
    return CoreComponent(tuple(strands))


def _core_source(comp: CoreComponent) -> EdgeUnion:
    return EdgeUnion(tuple(Edge(k, s.merge[0], s.merge[-1]) for k, s in enumerate(comp.strands)))


def corner_specialize(ctx: BraneContext | None, comp: CoreComponent, eps: Sequence[int]) -> SaddleDiagram:
    """All strings meet at one of their ends: string k at its tail if eps[k] == 0, else its head."""
    m = comp.m
    if len(eps) != m or any(x not in (0, 1) for x in eps):
        raise ValueError(f"corner must be a 0/1 vector of length {m}")
    return _single_point(ctx, comp, [Fraction(x) for x in eps])


def collapsed_saddle(ctx: BraneContext | None, comp: CoreComponent) -> SaddleDiagram:
    """The generic simultaneous interaction: every string crossed at its midpoint."""
    return _single_point(ctx, comp, [HALF] * comp.m)


def _single_point(ctx, comp, positions) -> SaddleDiagram:
    m = comp.m
    source = _core_source(comp)
    if m == 1:
        return build_saddle(ctx, source, ())
    point = InteractionPoint.make([(k, positions[k]) for k in range(m)], {(k + 1) % m: k for k in range(m)})
    return build_saddle(ctx, source, (point,))


def disc_component(arc_labels: Sequence[str]) -> CoreComponent:
    """The core of a bare disc whose boundary arcs carry ``arc_labels`` (K_1 ... K_2m)."""
    if len(arc_labels) % 2:
        raise OddArcCount(f"{len(arc_labels)} arc labels; a disc needs an even number")
    if not arc_labels:
        raise NoOutgoing("a disc needs at least one incoming and one outgoing string")
    m = len(arc_labels) // 2
    ks = list(arc_labels)
    return CoreComponent(
        tuple(Strand((), (ks[2 * k], ks[2 * k + 1]), (ks[(2 * k + 2) % (2 * m)], ks[2 * k + 1])) for k in range(m))
    )


def _head_owner(t3: SewingDiagram, j: int) -> int:
    """The source edge whose head the j-th target string ends on (before any cut)."""
    v = t3.mid.end_vertex(t3.back_map[j][-1])
    (q,) = [p for p in v.points if p.pos == 1]
    return q.edge


def normal_form(t: SewingDiagram) -> NormalForm:
    t1, t3, t2 = canonical_decomposition(t)
    g = t.source
    runs = {}
    for j, chain in enumerate(t1.back_map):
        ids = tuple(s.edge for s in chain)
        runs[j] = (ids, (g[ids[0]].tail,) + tuple(g[i].head for i in ids))
    splits: dict[int, list[str]] = {k: [e.tail] for k, e in enumerate(t2.source)}
    for chain, out in zip(t2.back_map, t2.target):
        splits[chain[0].edge].append(out.head)
    owned = {_head_owner(t3, k): k for k in range(len(t3.target))}

    saddle = deform_to_saddle(t3)
    comps = []
    for ids in components(saddle):
        core = collapse_simultaneous(restrict(None, saddle, ids))
        strands = []
        for s in core.strands:
            (gamma,) = s.edges
            merged, labels = runs[gamma]
            strands.append(Strand(merged, labels, tuple(splits[owned[gamma]])))
        comps.append(CoreComponent(tuple(strands)))
    if any(c.m == 0 for c in comps):
        raise NoOutgoing("a component has no outgoing string")
    return NormalForm.of(comps)


def saddle_normal_form(d: SaddleDiagram) -> NormalForm:
    return NormalForm.of(collapse_simultaneous(restrict(None, d, ids)) for ids in components(d))


def disc_normal_form(arc_labels: Sequence[str]) -> NormalForm:
    return NormalForm.of([disc_component(arc_labels)])


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    ambiguous: bool
    reason: str = ""


def equivalence(a: SewingDiagram, b: SewingDiagram) -> Equivalence:
    """Compare normal forms, matching source edges by label when the orders differ."""
    pa, pb = a.source.label_pairs(), b.source.label_pairs()
    na, nb = normal_form(a), normal_form(b)
    if pa == pb:
        return Equivalence(na == nb, False)
    if sorted(pa) != sorted(pb):
        return Equivalence(False, False, "source edge unions differ")
    groups: dict[tuple[str, str], tuple[list[int], list[int]]] = {}
    for e in a.source:
        groups.setdefault((e.tail, e.head), ([], []))[0].append(e.id)
    for e in b.source:
        groups[(e.tail, e.head)][1].append(e.id)
    choices = [[list(zip(ib, p)) for p in itertools.permutations(ia)] for ia, ib in groups.values()]
    matches = 0
    for combo in itertools.product(*choices):
        mapping = dict(pair for part in combo for pair in part)
        if nb.relabel_edges(mapping) == na:
            matches += 1
    total = 1
    for c in choices:
        total *= len(c)
    note = "source edges matched by label" + ("; several matchings exist" if total > 1 else "")
    return Equivalence(matches > 0, True, note)


def equivalent(a: SewingDiagram, b: SewingDiagram) -> bool:
    return equivalence(a, b).equivalent


@dataclass(frozen=True)
class DeformationStep:
    kind: str  # "1" slide off a degree-3 vertex, "2" collapse, "3" corner specialization
    before: str
    after: str


@dataclass(frozen=True)
class DeformationTrace:
    steps: tuple[DeformationStep, ...]


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()[:16]


def saddle_digest(d: SaddleDiagram) -> str:
    return _digest([d.source.label_pairs(), [[p.participants, p.perm] for p in d.points], sorted(d.target.label_pairs())])


def graph_digest(g: SewingGraph) -> str:
    return _digest([g.base.label_pairs(), g.code()])


def deformation_trace(t3: SewingDiagram, corners: bool = False) -> DeformationTrace:
    """Record the deformations taking a degree-3 block to its simultaneous form."""
    steps = []
    before = graph_digest(t3.mid)
    saddle = deform_to_saddle(t3)
    if saddle.points:
        steps.append(DeformationStep("1", before, saddle_digest(saddle)))
    for ids in components(saddle):
        part = restrict(None, saddle, ids)
        core = collapse_simultaneous(part)
        collapsed = collapsed_saddle(None, core)
        steps.append(DeformationStep("2", saddle_digest(part), saddle_digest(collapsed)))
        if corners:
            for eps in itertools.product((0, 1), repeat=core.m):
                steps.append(DeformationStep("3", saddle_digest(collapsed), saddle_digest(corner_specialize(None, core, eps))))
    return DeformationTrace(tuple(steps))
