"""Horocyclic products of two trees and their sibling-augmented variant.

``DL(q, r)`` has vertex set ``{x1 x2 : level(x1) + level(x2) = 0}`` inside
``T_q x T_r``; ``x1 x2 ~ y1 y2`` iff ``x1 ~ y1`` and ``x2 ~ y2`` in the two
trees.  Every move raises one tree coordinate and lowers the other, so each
vertex has ``q`` "up" neighbours (up in the first tree) and ``r`` "down"
neighbours: the graph is ``(q + r)``-regular.

The sibling-augmented variant ``DLS(q, r)`` on the same vertex set joins
``x1 x2`` to ``y1 y2`` when ``y2 = predecessor(x2)`` and ``predecessor(y1)``
is a *sibling* of ``x1`` (same predecessor -- possibly ``x1`` itself), or the
mirror-image condition one level down.  It is ``(q^2 + q r)``-regular and
contains every DL edge.

``factor_map`` collapses the sibling classes of the first coordinate:
``x1 x2 -> (shift(predecessor(x1), +1), x2)``, landing again on the
``level_sum = 0`` sheet.  The quotient of ``DLS(q, r)`` under sibling classes,
transported through ``factor_map``, is ``DL(q, r)`` again.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable

from .tree import (
    ROOT,
    TreeVertex,
    predecessor,
    shift,
    successor,
    vertex_from_json,
    vertex_to_json,
)
from . import tree as _tree

__all__ = [
    "DLParams",
    "DLVertex",
    "SiblingClass",
    "origin",
    "check_vertex",
    "dl_neighbours",
    "dls_neighbours",
    "siblings",
    "sibling_class",
    "factor_map",
    "translation_to",
    "ball",
    "random_vertex",
    "dl_distance",
    "vertex_to_json_pair",
    "vertex_from_json_pair",
    "export_dot",
    "export_json",
]


@dataclass(frozen=True)
class DLParams:
    """Branching numbers of the two trees and the level-sum of the sheet."""

    q: int
    r: int
    level_sum: int = 0

    def __post_init__(self) -> None:
        if self.q < 2 or self.r < 2:
            raise ValueError("branching numbers must be at least 2")


@dataclass(frozen=True)
class DLVertex:
    x1: TreeVertex
    x2: TreeVertex


def origin(params: DLParams) -> DLVertex:
    """The base vertex ``o1 o2`` (roots, second one shifted onto the sheet)."""
    return DLVertex(ROOT, shift(ROOT, params.level_sum))


def check_vertex(v: DLVertex, params: DLParams) -> None:
    if v.x1.level + v.x2.level != params.level_sum:
        raise ValueError(
            f"levels {v.x1.level} + {v.x2.level} != level_sum {params.level_sum}"
        )


def dl_neighbours(v: DLVertex, params: DLParams) -> list[DLVertex]:
    """``q`` up-neighbours then ``r`` down-neighbours of ``v`` in DL(q, r)."""
    check_vertex(v, params)
    up = [
        DLVertex(successor(v.x1, l, params.q), predecessor(v.x2))
        for l in range(params.q)
    ]
    down = [
        DLVertex(predecessor(v.x1), successor(v.x2, m, params.r))
        for m in range(params.r)
    ]
    return up + down


def siblings(v: TreeVertex, q: int) -> list[TreeVertex]:
    """All vertices sharing ``v``'s predecessor, ``v`` included."""
    p = predecessor(v)
    return [successor(p, m, q) for m in range(q)]


def dls_neighbours(v: DLVertex, params: DLParams) -> list[DLVertex]:
    """Neighbours in the sibling-augmented graph: ``q^2`` up, ``q r`` down."""
    check_vertex(v, params)
    q, r = params.q, params.r
    up = [
        DLVertex(successor(u1, l, q), predecessor(v.x2))
        for u1 in siblings(v.x1, q)
        for l in range(q)
    ]
    down = [
        DLVertex(u1, successor(v.x2, m, r))
        for u1 in siblings(predecessor(v.x1), q)
        for m in range(r)
    ]
    return up + down


@dataclass(frozen=True)
class SiblingClass:
    """A sibling class of the first coordinate, named by its label-0 member."""

    canonical: DLVertex

    def members(self, params: DLParams) -> tuple[DLVertex, ...]:
        """The ``q`` vertices of the class (shared ``x1`` predecessor)."""
        return tuple(
            DLVertex(u1, self.canonical.x2)
            for u1 in siblings(self.canonical.x1, params.q)
        )


def sibling_class(v: DLVertex, params: DLParams) -> SiblingClass:
    check_vertex(v, params)
    rep = DLVertex(successor(predecessor(v.x1), 0, params.q), v.x2)
    return SiblingClass(rep)


def factor_map(v: DLVertex, params: DLParams) -> DLVertex:
    """Collapse the first-coordinate sibling class onto the level-sum-0 sheet.

    Constant on sibling classes; carries DLS edges to DL edges.
    """
    check_vertex(v, params)
    return DLVertex(shift(predecessor(v.x1), 1), v.x2)


def translation_to(target: DLVertex, params: DLParams) -> Callable[[DLVertex], DLVertex]:
    """A graph automorphism fixing both reference ends with ``o1 o2 -> target``.

    Composition of a level shift with per-level label translations in each
    coordinate (addition mod ``q`` resp. ``r``), which preserves predecessor
    and successor relations and the level sum.
    """
    check_vertex(target, params)
    h = target.x1.level - 0
    t1 = dict(target.x1.labels)
    t2 = dict(target.x2.labels)

    def move(x: TreeVertex, shift_by: int, t: dict[int, int], mod: int) -> TreeVertex:
        new_level = x.level + shift_by
        shifted = {j + shift_by: val for j, val in x.labels}
        out = {}
        for j in set(shifted) | set(t):
            if j > new_level:
                # translation entries below the vertex apply to its
                # descendants, not to the vertex itself
                continue
            val = (shifted.get(j, 0) + t.get(j, 0)) % mod
            if val:
                out[j] = val
        return TreeVertex.make(new_level, out)

    h2 = target.x2.level - params.level_sum

    def phi(v: DLVertex) -> DLVertex:
        return DLVertex(
            move(v.x1, h, t1, params.q),
            move(v.x2, h2, t2, params.r),
        )

    return phi


def _neighbour_fn(params: DLParams, variant: str):
    if variant == "dl":
        return lambda v: dl_neighbours(v, params)
    if variant == "dls":
        return lambda v: dls_neighbours(v, params)
    raise ValueError(f"unknown variant {variant!r}")


def ball(params: DLParams, radius: int, variant: str = "dl") -> list[DLVertex]:
    """All vertices within graph distance ``radius`` of the origin (BFS order)."""
    nbrs = _neighbour_fn(params, variant)
    o = origin(params)
    seen = {o}
    frontier = [o]
    out = [o]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in nbrs(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    out.append(w)
        frontier = nxt
    return out


def random_vertex(params: DLParams, radius: int, rng, variant: str = "dl") -> DLVertex:
    """A random vertex reached by ``radius`` uniform neighbour steps from o."""
    nbrs = _neighbour_fn(params, variant)
    v = origin(params)
    for _ in range(radius):
        v = rng.choice(nbrs(v))
    return v


def dl_distance(a: DLVertex, b: DLVertex) -> int:
    """Graph distance in DL: both coordinates must travel, moves pay for one
    descent each, so ``d = d1 + d2 - |level difference|``."""
    d1 = _tree.distance(a.x1, b.x1)
    d2 = _tree.distance(a.x2, b.x2)
    return d1 + d2 - abs(a.x1.level - b.x1.level)


def vertex_to_json_pair(v: DLVertex) -> dict:
    return {"x1": vertex_to_json(v.x1), "x2": vertex_to_json(v.x2)}


def vertex_from_json_pair(obj: dict) -> DLVertex:
    return DLVertex(vertex_from_json(obj["x1"]), vertex_from_json(obj["x2"]))


def _edges(vertices: list[DLVertex], params: DLParams, variant: str) -> list[tuple[int, int]]:
    nbrs = _neighbour_fn(params, variant)
    index = {v: i for i, v in enumerate(vertices)}
    edges = set()
    for v in vertices:
        i = index[v]
        for w in nbrs(v):
            j = index.get(w)
            if j is not None and i < j:
                edges.add((i, j))
    return sorted(edges)


def export_dot(params: DLParams, radius: int, variant: str = "dl") -> str:
    """DOT text of the radius-``radius`` ball; node labels are JSON coordinates."""
    vertices = ball(params, radius, variant)
    lines = ["graph {"]
    for i, v in enumerate(vertices):
        label = json.dumps(vertex_to_json_pair(v), sort_keys=True)
        lines.append(f'  n{i} [label={json.dumps(label)}];')
    for i, j in _edges(vertices, params, variant):
        lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(params: DLParams, radius: int, variant: str = "dl") -> dict:
    """Adjacency-list export carrying the same content as the DOT form."""
    vertices = ball(params, radius, variant)
    edges = _edges(vertices, params, variant)
    adjacency: list[list[int]] = [[] for _ in vertices]
    for i, j in edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    return {
        "variant": variant,
        "q": params.q,
        "r": params.r,
        "radius": radius,
        "vertices": [vertex_to_json_pair(v) for v in vertices],
        "edges": [[i, j] for i, j in edges],
        "adjacency": adjacency,
    }
