"""Formal arithmetic of branes: labeled closed submanifolds of an ambient manifold M.

Intersections are assumed generic, so the dimension of an intersection of r
branes is the sum of their dimensions minus (r - 1) times the ambient dimension.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import ContextError, UnknownLabel

TOP = "⊤"


@dataclass(frozen=True)
class Brane:
    id: str
    dim: int
    betti: tuple[int, ...] | None = None


@dataclass(frozen=True)
class BraneContext:
    ambient_dim: int
    branes: Mapping[str, Brane]
    declared_empty: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        d = self.ambient_dim
        if not isinstance(d, int) or d < 1:
            raise ContextError(f"ambient_dim must be a positive integer, got {d!r}")
        table = dict(self.branes)
        for key, b in table.items():
            if key != b.id:
                raise ContextError(f"brane keyed {key!r} has id {b.id!r}")
            if key == TOP:
                continue
            if not b.id:
                raise ContextError("brane ids must be nonempty")
            if not 0 <= b.dim <= d:
                raise ContextError(f"brane {b.id!r} has dim {b.dim} outside [0, {d}]")
            if b.betti is not None:
                if len(b.betti) != b.dim + 1:
                    raise ContextError(f"brane {b.id!r}: betti vector needs {b.dim + 1} entries")
                if any(x < 0 for x in b.betti) or b.betti[0] < 1:
                    raise ContextError(f"brane {b.id!r}: betti numbers must be >= 0 with b0 >= 1")
        table[TOP] = Brane(TOP, d)
        empties = set()
        for labels in self.declared_empty:
            labels = tuple(sorted(x for x in labels if x != TOP))
            for x in labels:
                if x not in table:
                    raise UnknownLabel(x)
            if len(labels) < 2:
                raise ContextError("declared empty intersections need at least two labels")
            empties.add(labels)
        object.__setattr__(self, "branes", MappingProxyType(table))
        object.__setattr__(self, "declared_empty", frozenset(empties))

    @classmethod
    def build(cls, ambient_dim, dims, empty=(), betti=None):
        """Shorthand: ``dims`` maps label -> dimension, ``betti`` label -> vector."""
        betti = betti or {}
        branes = {k: Brane(k, v, tuple(betti[k]) if k in betti else None) for k, v in dims.items()}
        return cls(ambient_dim, branes, frozenset(tuple(e) for e in empty))

    @classmethod
    def permissive(cls, labels: Iterable[str]):
        """A context in which every intersection of the given labels is nonempty."""
        return cls(1, {x: Brane(x, 1) for x in set(labels) if x != TOP})

    def dim(self, label: str) -> int:
        try:
            return self.branes[label].dim
        except KeyError:
            raise UnknownLabel(label) from None

    def with_empty(self, *labels: str) -> BraneContext:
        return BraneContext(self.ambient_dim, self.branes, self.declared_empty | {tuple(labels)})

    @classmethod
    def from_dict(cls, obj: dict) -> BraneContext:
        allowed = {"ambient_dim", "branes", "empty_intersections"}
        extra = set(obj) - allowed
        if extra:
            raise ContextError(f"unknown context fields: {sorted(extra)}")
        branes = {}
        for entry in obj["branes"]:
            extra = set(entry) - {"id", "dim", "betti"}
            if extra:
                raise ContextError(f"unknown brane fields: {sorted(extra)}")
            if entry["id"] in branes or entry["id"] == TOP:
                raise ContextError(f"duplicate or reserved brane id {entry['id']!r}")
            betti = entry.get("betti")
            branes[entry["id"]] = Brane(entry["id"], entry["dim"], tuple(betti) if betti is not None else None)
        empty = frozenset(tuple(e) for e in obj.get("empty_intersections", []))
        return cls(obj["ambient_dim"], branes, empty)

    def to_dict(self) -> dict:
        branes = []
        for b in sorted(self.branes.values(), key=lambda b: b.id):
            if b.id == TOP:
                continue
            entry = {"id": b.id, "dim": b.dim}
            if b.betti is not None:
                entry["betti"] = list(b.betti)
            branes.append(entry)
        return {
            "ambient_dim": self.ambient_dim,
            "branes": branes,
            "empty_intersections": [list(e) for e in sorted(self.declared_empty)],
        }


@dataclass(frozen=True)
class FormalIntersection:
    labels: tuple[str, ...]
    dim: int
    empty: bool

    def __str__(self):
        return "∩".join(self.labels) if self.labels else TOP


def intersect(ctx: BraneContext, labels: Iterable[str | FormalIntersection]) -> FormalIntersection:
    flat: list[str] = []
    for item in labels:
        if isinstance(item, FormalIntersection):
            flat.extend(item.labels)
        else:
            flat.append(item)
    for x in flat:
        if x not in ctx.branes:
            raise UnknownLabel(x)
    parts = tuple(sorted(x for x in flat if x != TOP))
    d = ctx.ambient_dim
    if not parts:
        return FormalIntersection((), d, False)
    dim = sum(ctx.branes[x].dim for x in parts) - (len(parts) - 1) * d
    have = Counter(parts)
    declared = any(not (Counter(e) - have) for e in ctx.declared_empty)
    return FormalIntersection(parts, dim, dim < 0 or declared)


def degree_range(ctx: BraneContext, fi: FormalIntersection) -> range:
    """Degrees in which the homology of ``fi`` can be nonzero."""
    return range(0) if fi.empty else range(fi.dim + 1)


def rank_upper_bound(ctx: BraneContext, fi: FormalIntersection, degree: int) -> int | None:
    """Coarse bound on the rank of H_degree of the intersection.

    Multiplies the Poincare polynomials of the participating branes and reads
    off the coefficient of ``degree``. This is bookkeeping rather than a
    theorem: it is exact for products, and for honest intersections it only
    offers a plausible ceiling. Returns None when Betti data is missing or when
    no brane participates (M itself carries no Betti data here).
    """
    if fi.empty or degree not in degree_range(ctx, fi):
        return 0
    if not fi.labels:
        return None
    poly = [1]
    for x in fi.labels:
        betti = ctx.branes[x].betti
        if betti is None:
            return None
        out = [0] * (len(poly) + len(betti) - 1)
        for i, a in enumerate(poly):
            for j, b in enumerate(betti):
                out[i + j] += a * b
        poly = out
    return poly[degree] if degree < len(poly) else 0
