import random
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from helpers import ALPHABET, boundary_signature, returns_edgewise, random_context, random_diagram, random_moves
from sewcalc.analyzer import analyze, disc_operation_target
from sewcalc.branes import BraneContext
from sewcalc.document import parse, render, sewing_entry, InputDocument
from sewcalc.errors import NotComposable
from sewcalc.graph import Point
from sewcalc.normalizer import normal_form
from sewcalc.saddle import saddle_degree_shift, sewing_degree_shift
from sewcalc.normalizer import deform_to_saddle
from sewcalc.sewing import (
    canonical_decomposition,
    compose,
    decompose,
    edge_count_relation,
    extend,
    fold,
    mirror,
    same_structure,
    trivial,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
fast = settings(max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def diagram(seed):
    return random_diagram(random.Random(seed))


@fast
@given(seeds)
def test_edge_count_law(seed):
    assert edge_count_relation(diagram(seed)).holds


@fast
@given(seeds)
def test_mirror_is_an_involution(seed):
    t = diagram(seed)
    back = extend(t.target, mirror(t))
    assert returns_edgewise(t, back)


@fast
@given(seeds)
def test_decompose_fold(seed):
    t = diagram(seed)
    assert same_structure(fold(trivial(t.source), decompose(t)), t)


@fast
@given(seeds)
def test_canonical_decomposition_recomposes(seed):
    t = diagram(seed)
    t1, t3, t2 = canonical_decomposition(t)
    assert same_structure(compose(t1, compose(t3, t2)), t)
    assert normal_form(compose(compose(t1, t3), t2)) == normal_form(t)


@fast
@given(seeds)
def test_coordinates_round_trip(seed):
    t = diagram(seed)
    for j, e in enumerate(t.target):
        for at in (Fraction(1, 7), Fraction(1, 2), Fraction(5, 6)):
            p = t.to_source(j, at)
            if t.mid.vertex_at(p) is None:
                assert t.to_target(p) == (j, at)


@fast
@given(seeds)
def test_analyze_shift_matches_sewing_shift(seed):
    rng = random.Random(seed)
    t = random_diagram(rng)
    ctx = random_context(rng)
    assert analyze(ctx, t).degree_shift == sewing_degree_shift(ctx, t)


@fast
@given(seeds)
def test_deformation_keeps_the_shift(seed):
    rng = random.Random(seed)
    t = random_diagram(rng)
    ctx = random_context(rng)
    _, t3, _ = canonical_decomposition(t)
    assert saddle_degree_shift(ctx, deform_to_saddle(t3, ctx)) == sewing_degree_shift(ctx, t3)


@fast
@given(seeds)
def test_normal_form_depends_only_on_boundary(seed):
    rng = random.Random(seed)
    t = random_diagram(rng, max_edges=3, max_moves=4)
    # replaying the same moves in reverse-compatible order cannot change anything
    moves = list(t.moves)
    rng.shuffle(moves)
    try:
        u = extend(t.source, moves)
    except Exception:
        return
    assert normal_form(u) == normal_form(t)
    assert boundary_signature(u) == boundary_signature(t)


@fast
@given(seeds)
def test_shift_is_additive_under_compose(seed):
    rng = random.Random(seed)
    a = random_diagram(rng, max_edges=4, max_moves=3)
    b = extend(a.target, random_moves(rng, a.target, 3))
    ctx = random_context(rng)
    try:
        ab = compose(a, b)
    except NotComposable:
        return
    assert sewing_degree_shift(ctx, ab) == sewing_degree_shift(ctx, a) + sewing_degree_shift(ctx, b)
    assert ab.target.label_pairs() == b.target.label_pairs()


@fast
@given(seeds)
def test_document_round_trip(seed):
    t = diagram(seed)
    doc = InputDocument(None, (sewing_entry("t", t),))
    again = parse(render(doc))
    assert same_structure(again.get("t").sewing(), t)


labels6 = [f"K{i}" for i in range(1, 7)]


@st.composite
def disc_setups(draw):
    m = draw(st.integers(1, 3))
    d = draw(st.integers(1, 4))
    dims = {x: draw(st.integers(0, d)) for x in labels6}
    pairs = draw(st.lists(st.tuples(st.sampled_from(labels6), st.sampled_from(labels6)).filter(lambda p: p[0] != p[1]), max_size=3))
    ctx = BraneContext.build(d, dims, empty=pairs)
    arcs = draw(st.lists(st.sampled_from(labels6), min_size=2 * m, max_size=2 * m))
    return ctx, arcs


@settings(max_examples=200, deadline=None)
@given(disc_setups())
def test_disc_rotation_permutes_factors(setup):
    ctx, arcs = setup
    m = len(arcs) // 2
    base = disc_operation_target(ctx, arcs)
    turned = disc_operation_target(ctx, arcs[2:] + arcs[:2])
    assert turned.degree_shift == base.degree_shift == -(m - 1) * ctx.ambient_dim
    assert turned.vanishes == base.vanishes
    factors = base.target.factors
    assert turned.target.factors == factors[1:] + factors[:1]


@settings(max_examples=200, deadline=None)
@given(disc_setups(), st.sampled_from(labels6), st.sampled_from(labels6))
def test_more_empty_facts_never_revive(setup, a, b):
    ctx, arcs = setup
    if a == b:
        return
    before = disc_operation_target(ctx, arcs)
    after = disc_operation_target(ctx.with_empty(a, b), arcs)
    if before.vanishes:
        assert after.vanishes


def test_alphabet_is_small():
    assert len(ALPHABET) <= 3
