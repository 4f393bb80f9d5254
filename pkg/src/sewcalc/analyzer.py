"""Constancy targets, vanishing verdicts and constant-class values.

Targets are descriptors of subgroups of H_*(P_IJ) that the image of an
operation is contained in; nothing here computes homology. A target of the
form ConstIm(N) is the image of H_*(N) under the inclusion of N as constant
paths.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .branes import TOP, BraneContext, FormalIntersection, degree_range, intersect
from .errors import OddArcCount
from .normalizer import collapse_simultaneous, normal_form
from .saddle import SaddleDiagram, components, restrict, saddle_degree_shift, sewing_degree_shift
from .sewing import SewingDiagram

FULL, CONST, MEET, ZERO_KIND = "full", "const", "meet", "zero"


def _path_labels(path: tuple[str, str]) -> Counter:
    names = Counter()
    for part in path:
        names.update({x for x in part.split("∩") if x != TOP})
    return names


@dataclass(frozen=True)
class SubgroupDescriptor:
    kind: str
    path: tuple[str, str]
    members: tuple[FormalIntersection, ...] = ()
    reason: str = field(default="", compare=False)

    @classmethod
    def full(cls, path) -> SubgroupDescriptor:
        return cls(FULL, tuple(path))

    @classmethod
    def zero(cls, path, reason="") -> SubgroupDescriptor:
        return cls(ZERO_KIND, tuple(path), (), reason)

    @classmethod
    def const_im(cls, n: FormalIntersection, path) -> SubgroupDescriptor:
        path = tuple(path)
        if set(_path_labels(path)) - set(n.labels):
            raise ValueError(f"constant strings in {n} cannot lie in P_{path}")
        if n.empty:
            return cls.zero(path, f"{n} is empty")
        return cls(CONST, path, (n,))

    @classmethod
    def meet(cls, ns: Iterable[FormalIntersection], path) -> SubgroupDescriptor:
        path = tuple(path)
        uniq = sorted(set(ns), key=lambda n: n.labels)
        if not uniq:
            return cls.full(path)
        for n in uniq:
            if n.empty:
                return cls.zero(path, f"{n} is empty")
        if len(uniq) == 1:
            return cls.const_im(uniq[0], path)
        for n in uniq:
            cls.const_im(n, path)
        return cls(MEET, path, tuple(uniq))

    @property
    def is_zero(self) -> bool:
        return self.kind == ZERO_KIND

    def __str__(self):
        space = f"H*(P_{{{self.path[0]},{self.path[1]}}})"
        if self.kind == FULL:
            return space
        if self.kind == ZERO_KIND:
            return f"0 ⊂ {space}"
        images = " ∩ ".join(f"s*H*({n})" for n in self.members)
        return f"{images} ⊂ {space}"

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "path": list(self.path)}
        if self.members:
            out["members"] = [{"labels": list(n.labels), "dim": n.dim} for n in self.members]
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class Tensor:
    """A tensor product of descriptors, one per outgoing string."""

    factors: tuple[SubgroupDescriptor, ...]
    flags: tuple[str, ...] = ()

    @property
    def is_zero(self) -> bool:
        return any(f.is_zero for f in self.factors)

    def __str__(self):
        return " ⊗ ".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class ConstClassValue:
    """The diagonal image of the fundamental class of ``base`` into ``factors`` path spaces."""

    base: FormalIntersection
    paths: tuple[tuple[str, str], ...]

    @property
    def factors(self) -> int:
        return len(self.paths)

    @property
    def degree(self) -> int:
        return self.base.dim

    @property
    def is_zero(self) -> bool:
        return self.base.empty

    def to_dict(self) -> dict:
        return {
            "base": list(self.base.labels),
            "degree": self.degree,
            "factors": self.factors,
            "paths": [list(p) for p in self.paths],
            "zero": self.is_zero,
        }


CASE_I, CASE_II_III, CASE_IV_V, VANISHES = "CaseI", "CaseII_III", "CaseIV_V", "Vanishes"


@dataclass(frozen=True)
class AnalysisReport:
    degree_shift: int
    target: Tensor
    reasons: tuple[str, ...] = ()
    value: ConstClassValue | None = None
    classification: str = CASE_IV_V
    flags: tuple[str, ...] = ()

    @property
    def vanishes(self) -> bool:
        return bool(self.reasons)

    def to_dict(self) -> dict:
        out = {
            "classification": self.classification,
            "degree_shift": self.degree_shift,
            "target": [f.to_dict() for f in self.target.factors],
            "vanishing": {"verdict": "yes" if self.vanishes else "no", "reasons": list(self.reasons)},
        }
        if self.value is not None:
            out["value"] = self.value.to_dict()
        flags = tuple(self.flags) + tuple(self.target.flags)
        if flags:
            out["flags"] = list(flags)
        return out


def coproduct_target(ctx: BraneContext, i: str, j: str, k: str) -> Tensor:
    """Where the coproduct splitting P_JK along I lands: P_JI ⊗ P_IK."""
    if i == TOP:
        for x in (j, k):
            ctx.dim(x)
        return Tensor(
            (SubgroupDescriptor.full((j, TOP)), SubgroupDescriptor.full((TOP, k))),
            ("splitting along the ambient manifold is outside the brane family; no constancy claim",),
        )
    return Tensor(
        (
            SubgroupDescriptor.const_im(intersect(ctx, [i, j]), (j, i)),
            SubgroupDescriptor.const_im(intersect(ctx, [i, k]), (i, k)),
        )
    )


class ProductResult(NamedTuple):
    target: SubgroupDescriptor
    out_degree: int


def product_with_fundamental(ctx: BraneContext, side: str, i: str, j: str, k: str, input_degree: int) -> ProductResult:
    """Product along J of a fundamental class with an arbitrary class.

    ``side="left"`` multiplies [I∩J] in P_IJ by a class of P_JK;
    ``side="right"`` multiplies a class of P_IJ by [J∩K] in P_JK.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    fundamental = intersect(ctx, [i, j] if side == "left" else [j, k])
    out_degree = input_degree + fundamental.dim - ctx.dim(j)
    base = intersect(ctx, [i, k])
    path = (i, k)
    if fundamental.empty:
        return ProductResult(SubgroupDescriptor.zero(path, f"{fundamental} is empty"), out_degree)
    if base.empty:
        return ProductResult(SubgroupDescriptor.zero(path, f"{base} is empty"), out_degree)
    if out_degree not in degree_range(ctx, base):
        return ProductResult(
            SubgroupDescriptor.zero(path, f"degree {out_degree} outside [0, {base.dim}] for {base}"), out_degree
        )
    return ProductResult(SubgroupDescriptor.const_im(base, path), out_degree)


def iterated_coproduct_target(ctx: BraneContext, i: str, j: str, ks: Sequence[str]) -> Tensor:
    """Where splitting P_IJ successively along K_1, ..., K_r lands."""
    ks = list(ks)
    if not ks:
        raise ValueError("at least one splitting label is needed")
    left = intersect(ctx, [i] + ks)
    right = intersect(ctx, ks + [j])
    factors = [SubgroupDescriptor.const_im(left, (i, ks[0]))]
    for a, b in zip(ks, ks[1:]):
        factors.append(SubgroupDescriptor.meet([left, right], (a, b)))
    factors.append(SubgroupDescriptor.const_im(right, (ks[-1], j)))
    return Tensor(tuple(factors))


def coproduct_shift(ctx: BraneContext, ks: Iterable[str]) -> int:
    return -sum(ctx.ambient_dim - ctx.dim(k) for k in ks)


def theorem_A_value(ctx: BraneContext, i: str, ks: Sequence[str]) -> ConstClassValue:
    """The value on the unit [I] of the operation splitting P_II along K_1, ..., K_r."""
    ks = list(ks)
    base = intersect(ctx, [i] + ks)
    stops = [i] + ks + [i]
    return ConstClassValue(base, tuple(zip(stops, stops[1:])))


def corners(m: int):
    return itertools.product((0, 1), repeat=m)


def corner_intersection(ctx: BraneContext, ks: Sequence[str], eps: Sequence[int]) -> FormalIntersection:
    """K_eps: string j contributes label K_{2j-1+eps_j} (1-based)."""
    return intersect(ctx, [ks[2 * j + e] for j, e in enumerate(eps)])


def corner_set(m: int, k: int) -> list[tuple[int, ...]]:
    """Corners with eps_k = 1 and eps_{k+1} = 0 (k is 0-based, indices cyclic)."""
    return [eps for eps in corners(m) if eps[k] == 1 and eps[(k + 1) % m] == 0]


def disc_operation_target(ctx: BraneContext, arc_labels: Sequence[str]) -> AnalysisReport:
    """Target of the operation of a disc whose boundary arcs read K_1, ..., K_2m."""
    ks = list(arc_labels)
    if len(ks) % 2 or not ks:
        raise OddArcCount(f"{len(ks)} arc labels; a disc needs a positive even number")
    for x in ks:
        ctx.dim(x)
    m = len(ks) // 2
    if m == 1:
        return AnalysisReport(0, Tensor((SubgroupDescriptor.full((ks[0], ks[1])),)))
    factors = []
    for k in range(m):
        path = (ks[(2 * k + 2) % (2 * m)], ks[2 * k + 1])
        members = [corner_intersection(ctx, ks, eps) for eps in corner_set(m, k)]
        factors.append(SubgroupDescriptor.meet(members, path))
    reasons = []
    for eps in corners(m):
        n = corner_intersection(ctx, ks, eps)
        if n.empty:
            reasons.append(f"K_eps = {n} is empty at eps = {''.join(map(str, eps))}")
    return AnalysisReport(-(m - 1) * ctx.ambient_dim, Tensor(tuple(factors)), tuple(reasons))


@dataclass(frozen=True)
class Signature:
    """Shape of an open-closed cobordism.

    ``open_boundaries`` has one entry per boundary component carrying open
    strings, listing each string on it as "in" or "out".
    """

    genus: int = 0
    windows: int = 0
    closed_in: int = 0
    closed_out: int = 0
    open_boundaries: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        bounds = tuple(tuple(b) for b in self.open_boundaries)
        object.__setattr__(self, "open_boundaries", bounds)
        if min(self.genus, self.windows, self.closed_in, self.closed_out) < 0:
            raise ValueError("counts must be nonnegative")
        for b in bounds:
            if not b or any(x not in ("in", "out") for x in b):
                raise ValueError("each open boundary lists one or more strings, each 'in' or 'out'")
        if self.closed_out == 0 and not any("out" in b for b in bounds):
            raise ValueError("a cobordism needs at least one outgoing string")


def classify_cobordism(sig: Signature) -> str:
    has_open = any(sig.open_boundaries)
    out_bounds = [b for b in sig.open_boundaries if "out" in b]
    if sig.genus > 0:
        return VANISHES
    if sig.windows == 1 and not has_open and sig.closed_out == 1:
        return CASE_I
    if sig.windows == 0 and not out_bounds and sig.closed_out in (1, 2):
        return CASE_II_III
    if sig.windows == 0 and sig.closed_out == 0 and len(out_bounds) == 1:
        return CASE_IV_V
    return VANISHES


# --- analysis of whole diagrams -------------------------------------------


@dataclass(frozen=True)
class _Fund:
    n: FormalIntersection


def _max_union(ctx, parts: Iterable[FormalIntersection]) -> FormalIntersection:
    total = Counter()
    for p in parts:
        total |= Counter(p.labels)
    return intersect(ctx, list(total.elements()))


def _remove(labels: Iterable[str], drop: Iterable[str]) -> list[str]:
    rest = Counter(labels)
    rest.subtract(Counter(drop))
    return list((+rest).elements())


def _run_input(ctx, edges, merge, inputs: Mapping[int, FormalIntersection]):
    """Class carried by a run of edges glued by products, given fundamental inputs."""
    path = (merge[0], merge[-1])
    if not any(e in inputs for e in edges):
        return SubgroupDescriptor.full(path)
    if all(e in inputs for e in edges):
        return _Fund(_max_union(ctx, (inputs[e] for e in edges)))
    # group adjacent fundamental inputs; each group acts as one fundamental class
    blocks = []
    for key, grp in itertools.groupby(range(len(edges)), key=lambda i: edges[i] in inputs):
        idx = list(grp)
        blocks.append((key, idx[0], idx[-1]))
    derived = []
    for is_fund, lo, hi in blocks:
        if not is_fund:
            continue
        n = _max_union(ctx, (inputs[edges[i]] for i in range(lo, hi + 1)))
        left, right = lo > 0, hi < len(edges) - 1
        start, stop = merge[lo], merge[hi + 1]
        if left and right:
            rest = _remove(n.labels, [start, stop])
            if rest:
                derived.append(intersect(ctx, [path[0]] + rest + [path[1]]))
        elif right:
            derived.append(intersect(ctx, _remove(n.labels, [stop]) + [path[1]]))
        else:
            derived.append(intersect(ctx, [path[0]] + _remove(n.labels, [start])))
    return SubgroupDescriptor.meet(derived, path)


def analyze(
    ctx: BraneContext,
    t: SewingDiagram,
    fundamental_inputs: Mapping[int, Iterable[str]] | None = None,
) -> AnalysisReport:
    """Target, degree shift and vanishing verdict of a sewing diagram.

    ``fundamental_inputs`` optionally fixes the input on some source edges to
    the fundamental class of an intersection (given by its labels); other
    inputs are arbitrary. Target factors follow the normal form order.
    """
    inputs = {}
    for e, labels in (fundamental_inputs or {}).items():
        n = intersect(ctx, labels)
        edge = t.source[e]
        if set(_path_labels((edge.tail, edge.head))) - set(n.labels):
            raise ValueError(f"fundamental input {n} on edge {e} must contain {edge.tail} and {edge.head}")
        inputs[e] = n
    nf = normal_form(t)
    d = ctx.ambient_dim
    shift = 0
    factors: list[SubgroupDescriptor] = []
    reasons: list[str] = []
    values: list[ConstClassValue] = []
    for e, n in sorted(inputs.items()):
        if n.empty:
            reasons.append(f"input on edge {e} is the class of the empty set {n}")
    for comp in nf.components:
        for s in comp.strands:
            shift -= sum(ctx.dim(x) for x in s.merge[1:-1])
            shift += coproduct_shift(ctx, s.split[1:-1])
        shift -= (comp.m - 1) * d
        if comp.m >= 2:
            core = disc_operation_target(ctx, comp.word)
            reasons.extend(core.reasons)
            for s, f in zip(comp.strands, core.target.factors):
                cuts = list(s.split[1:-1])
                if cuts:
                    piece = iterated_coproduct_target(ctx, s.split[0], s.split[-1], cuts)
                    factors.extend(piece.factors)
                else:
                    factors.append(f)
            continue
        (s,) = comp.strands
        carried = _run_input(ctx, s.edges, s.merge, inputs)
        cuts = list(s.split[1:-1])
        unit = isinstance(carried, _Fund) and carried.n.labels == (s.merge[0],) and s.merge[0] == s.merge[-1]
        if unit:
            value = theorem_A_value(ctx, s.merge[0], cuts)
            values.append(value)
            factors.extend(SubgroupDescriptor.const_im(value.base, p) for p in value.paths)
        elif cuts:
            factors.extend(iterated_coproduct_target(ctx, s.split[0], s.split[-1], cuts).factors)
        elif isinstance(carried, _Fund):
            factors.append(SubgroupDescriptor.const_im(carried.n, (s.merge[0], s.merge[-1])))
        else:
            factors.append(carried)
    for f in factors:
        if f.is_zero and f.reason and f.reason not in reasons:
            reasons.append(f.reason)
    value = values[0] if len(values) == 1 else None
    return AnalysisReport(shift, Tensor(tuple(factors)), tuple(reasons), value, CASE_IV_V)


def analyze_disc(ctx: BraneContext, arc_labels: Sequence[str]) -> AnalysisReport:
    return disc_operation_target(ctx, arc_labels)


def analyze_saddle(ctx: BraneContext, d: SaddleDiagram) -> AnalysisReport:
    """Components interacting only at interior points are collapsed; elsewhere only constant strings are pinned."""
    factors = []
    reasons = []
    for ids in components(d):
        part = restrict(ctx, d, ids)
        if part.all_interior and len(ids) > 1:
            core = collapse_simultaneous(part)
            report = disc_operation_target(ctx, core.word)
            factors.extend(report.target.factors)
            reasons.extend(report.reasons)
            continue
        for s in part.strings:
            path = (str(s.tail), str(s.head))
            if s.constant:
                factors.append(SubgroupDescriptor.const_im(s.tail, path))
            else:
                factors.append(SubgroupDescriptor.full(path))
    for i, n in enumerate(d.point_labels):
        if n.empty:
            reasons.append(f"interaction point {i} is labeled by the empty set {n}")
    return AnalysisReport(saddle_degree_shift(ctx, d), Tensor(tuple(factors)), tuple(dict.fromkeys(reasons)))


def check_shift(ctx: BraneContext, t: SewingDiagram) -> bool:
    return analyze(ctx, t).degree_shift == sewing_degree_shift(ctx, t)
