"""Shared generators and an independent boundary oracle for the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from pathlib import Path

from sewcalc.branes import BraneContext
from sewcalc.errors import IllegalMove
from sewcalc.graph import EdgeUnion, Point, SewingGraph, TypeI, TypeII, TypeIII, apply_move, make_edge_union
from sewcalc.sewing import SewingDiagram, extend

FIXTURES = Path(__file__).parent / "fixtures"
ALPHABET = ("A", "B", "C")


def candidate_moves(g: SewingGraph, labels=ALPHABET):
    """Every legal move on ``g``, with insertions at segment midpoints."""
    ends = [v for v in g.vertices if v.kind == "end"]
    heads = [v for v in ends if v.points[0].pos == 1]
    tails = [v for v in ends if v.points[0].pos == 0]
    out = []
    for a in heads:
        for b in tails:
            if a.label == b.label and not g.same_component(a, b):
                out.append(TypeI(a.points[0], b.points[0]))
    for s in g.segments:
        mid = (s.start + s.end) / 2
        for x in labels:
            out.append(TypeII(s.edge, mid, x))
    for w in (v for v in g.vertices if v.kind == "II"):
        for u in ends:
            if u.label == w.label and not g.same_component(u, w):
                out.append(TypeIII(u.points[0], w.points[0].edge, w.points[0].pos))
    return out


def random_source(rng: random.Random, max_edges=5, labels=ALPHABET) -> EdgeUnion:
    n = rng.randint(1, max_edges)
    return make_edge_union((rng.choice(labels), rng.choice(labels)) for _ in range(n))


def random_moves(rng: random.Random, source: EdgeUnion, max_moves=6, labels=ALPHABET):
    g = SewingGraph.initial(source)
    moves = []
    for _ in range(rng.randint(0, max_moves)):
        options = candidate_moves(g, labels)
        # bias toward joins so that degree-3 vertices show up often
        joins = [m for m in options if not isinstance(m, TypeII)]
        pool = joins if joins and rng.random() < 0.6 else options
        m = rng.choice(pool)
        g = apply_move(g, m)
        moves.append(m)
    return tuple(moves)


def random_diagram(rng: random.Random, max_edges=5, max_moves=6, labels=ALPHABET) -> SewingDiagram:
    source = random_source(rng, max_edges, labels)
    return extend(source, random_moves(rng, source, max_moves, labels))


def corpus(seed=0, size=1000, max_edges=5, max_moves=6):
    rng = random.Random(seed)
    return [random_diagram(rng, max_edges, max_moves) for _ in range(size)]


def random_context(rng: random.Random, labels=ALPHABET, d=None) -> BraneContext:
    d = d if d is not None else rng.randint(2, 4)
    return BraneContext.build(d, {x: rng.randint(0, d) for x in labels})


def legal_orderings(source: EdgeUnion, moves):
    """All orderings of ``moves`` that replay without error."""
    seen = set()
    for perm in itertools.permutations(moves):
        if perm in seen:
            continue
        seen.add(perm)
        g = SewingGraph.initial(source)
        try:
            for m in perm:
                g = apply_move(g, m)
        except IllegalMove:
            continue
        yield perm


def enumerate_diagrams(source: EdgeUnion, max_moves: int, labels, exact=True):
    """Distinct sewing graphs reachable in at most ``max_moves`` moves, with one witness move list each."""
    found = {}
    frontier = {SewingGraph.initial(source).code(exact): ()}
    found.update(frontier)
    for _ in range(max_moves):
        nxt = {}
        for moves in frontier.values():
            g = SewingGraph.initial(source)
            for m in moves:
                g = apply_move(g, m)
            for m in candidate_moves(g, labels):
                key = apply_move(g, m).code(exact)
                if key not in found and key not in nxt:
                    nxt[key] = moves + (m,)
        found.update(nxt)
        frontier = nxt
    return list(found.values())


# --- boundary oracle --------------------------------------------------------
#
# Walk the boundary of the thickened graph: incoming strings tail to head,
# outgoing strings head to tail, and one free arc at every vertex of H joining
# the string we leave to the string we enter next.


def boundary_cycles(t: SewingDiagram):
    h = t.mid
    starts_at, ends_at = {}, {}
    for j, chain in enumerate(t.back_map):
        starts_at.setdefault(h.start_vertex(chain[0]).id, []).append(j)
        ends_at.setdefault(h.end_vertex(chain[-1]).id, []).append(j)

    def out_token(j):
        e = t.target[j]
        return ("out", e.tail, e.head)

    def after_in(edge):
        """Leaving source edge ``edge`` at its head."""
        v = h.vertex_at(Point(edge, Fraction(1)))
        if v.kind == "I":
            (tl,) = [p for p in v.points if p.pos == 0]
            return v.label, ("in", tl.edge)
        (j,) = ends_at[v.id]
        return v.label, ("outj", j)

    def after_out(j):
        """Leaving outgoing string ``j`` at its tail."""
        v = h.start_vertex(t.back_map[j][0])
        if v.kind == "end":
            return v.label, ("in", v.points[0].edge)
        if v.kind == "II":
            (k,) = ends_at[v.id]
            return v.label, ("outj", k)
        assert v.kind == "III"
        (q,) = v.ends
        assert q.pos == 0, "a string starting at a degree-3 vertex must come from a merged tail"
        return v.label, ("in", q.edge)

    seen_in, cycles = set(), []
    for e in t.source:
        if e.id in seen_in:
            continue
        word, cur = [], ("in", e.id)
        while True:
            if cur[0] == "in":
                if cur[1] in seen_in:
                    assert cur[1] == e.id, "boundary walk re-entered another cycle"
                    break
                seen_in.add(cur[1])
                word.append(("in", cur[1]))
                label, cur = after_in(cur[1])
            else:
                word.append(out_token(cur[1]))
                label, cur = after_out(cur[1])
            word.append(("arc", label))
            if len(word) > 4 * (len(t.source) + len(t.target)) + 4:
                raise AssertionError("boundary walk does not close")
        cycles.append(_min_rotation(word))
    return tuple(sorted(cycles))


def _min_rotation(word):
    return min(tuple(word[k:] + word[:k]) for k in range(len(word)))


def boundary_signature(t: SewingDiagram):
    """Source plus boundary cycles; equal exactly for equivalent diagrams."""
    return t.source.label_pairs(), boundary_cycles(t)


def returns_edgewise(t: SewingDiagram, back: SewingDiagram) -> bool:
    """Whether ``back`` (built on t's target) carries each of its strings onto one source edge of ``t``, point for point."""
    used = set()
    for j, e in enumerate(back.target):
        if e.length != 1:
            return False
        hits = set()
        for x in (Fraction(1, 5), Fraction(1, 2), Fraction(6, 7)):
            k, y = back.to_source(j, x)
            p = t.to_source(k, y)
            hits.add(p.edge)
            if p.pos != x:
                return False
        if len(hits) != 1:
            return False
        (edge,) = hits
        if t.source[edge].tail != e.tail or t.source[edge].head != e.head:
            return False
        used.add(edge)
    return used == set(t.source.ids)


# lines printed by the acceptance suite, echoed again in the pytest summary
ACCEPTANCE: list[str] = []
