import json
import random

import pytest

from dl_harmonics.dl_graph import (
    DLParams,
    DLVertex,
    ball,
    check_vertex,
    dl_distance,
    dl_neighbours,
    dls_neighbours,
    export_dot,
    export_json,
    factor_map,
    origin,
    random_vertex,
    sibling_class,
    siblings,
    translation_to,
)
from dl_harmonics.tree import TreeVertex, distance

RNG_SEED = 7041


def test_params_validation():
    with pytest.raises(ValueError):
        DLParams(1, 2)
    with pytest.raises(ValueError):
        DLParams(2, 1)
    DLParams(2, 2)


def test_vertex_level_constraint():
    p = DLParams(2, 2)
    off_sheet = DLVertex(TreeVertex(1, ()), TreeVertex(1, ()))
    with pytest.raises(ValueError):
        check_vertex(off_sheet, p)
    with pytest.raises(ValueError):
        dl_neighbours(off_sheet, p)
    assert origin(p).x1.level == 0


def test_degree_dl():
    rng = random.Random(RNG_SEED)
    p = DLParams(2, 2)
    for _ in range(50):
        v = random_vertex(p, rng.randrange(5), rng)
        assert len(dl_neighbours(v, p)) == 4

    p23 = DLParams(2, 3)
    for _ in range(50):
        v = random_vertex(p23, rng.randrange(5), rng)
        nb = dl_neighbours(v, p23)
        ups = [w for w in nb if w.x1.level == v.x1.level + 1]
        downs = [w for w in nb if w.x1.level == v.x1.level - 1]
        assert len(ups) == 2 and len(downs) == 3


def test_dl_adjacency_symmetric():
    rng = random.Random(RNG_SEED + 1)
    for q, r in ((2, 2), (2, 3)):
        p = DLParams(q, r)
        for _ in range(100):
            v = random_vertex(p, rng.randrange(6), rng)
            for w in dl_neighbours(v, p):
                assert v in dl_neighbours(w, p)


def test_degree_dls():
    rng = random.Random(RNG_SEED + 2)
    p = DLParams(2, 2)
    for _ in range(50):
        v = random_vertex(p, rng.randrange(5), rng)
        nb = dls_neighbours(v, p)
        assert len(nb) == 8  # q^2 up + q*r down
        assert set(dl_neighbours(v, p)) <= set(nb)


def test_dls_adjacency_symmetric():
    rng = random.Random(RNG_SEED + 3)
    for q, r in ((2, 2), (2, 3)):
        p = DLParams(q, r)
        for _ in range(100):
            v = random_vertex(p, rng.randrange(5), rng, "dls")
            for w in dls_neighbours(v, p):
                assert v in dls_neighbours(w, p)


def test_sibling_classes():
    rng = random.Random(RNG_SEED + 4)
    from dl_harmonics.tree import predecessor, successor

    for q, r in ((2, 2), (3, 2)):
        p = DLParams(q, r)
        for _ in range(60):
            v = random_vertex(p, rng.randrange(5), rng)
            cls = sibling_class(v, p)
            members = cls.members(p)
            assert len(members) == q
            assert cls.canonical in members
            assert v in members
            for l in range(q):
                w = DLVertex(successor(predecessor(v.x1), l, q), v.x2)
                assert sibling_class(w, p) == cls
            assert len({factor_map(m, p) for m in members}) == 1


def test_factor_map_edge_preservation():
    # exhaustive on the radius-3 ball: a sibling edge either collapses or
    # projects onto a base edge
    p = DLParams(2, 2)
    verts = ball(p, 3, "dls")
    vset = set(verts)
    for v in verts:
        fv = factor_map(v, p)
        for w in dls_neighbours(v, p):
            if w not in vset:
                continue
            fw = factor_map(w, p)
            assert fv == fw or fw in dl_neighbours(fv, p)


def test_ball_and_distance():
    p = DLParams(2, 2)
    b1 = ball(p, 1)
    assert len(b1) == 5
    # dl distance agrees with BFS on the radius-4 ball
    b = ball(p, 4)
    o = origin(p)
    depth = {o: 0}
    frontier = [o]
    for d in range(1, 5):
        nxt = []
        for v in frontier:
            for w in dl_neighbours(v, p):
                if w not in depth:
                    depth[w] = d
                    nxt.append(w)
        frontier = nxt
    for v in b:
        assert dl_distance(o, v) == depth[v]


def test_dl_distance_formula():
    rng = random.Random(RNG_SEED + 5)
    p = DLParams(2, 3)
    for _ in range(80):
        a = random_vertex(p, rng.randrange(6), rng)
        b = random_vertex(p, rng.randrange(6), rng)
        d1 = distance(a.x1, b.x1)
        d2 = distance(a.x2, b.x2)
        assert dl_distance(a, b) == d1 + d2 - abs(a.x1.level - b.x1.level)


def test_translation_transitivity():
    rng = random.Random(RNG_SEED + 6)
    p = DLParams(2, 2)
    o = origin(p)
    for _ in range(40):
        v = random_vertex(p, rng.randrange(6), rng)
        phi = translation_to(v, p)
        assert phi(o) == v
        # automorphism: preserves adjacency
        for w in dl_neighbours(o, p):
            assert phi(w) in dl_neighbours(v, p)


def test_exports():
    p = DLParams(2, 2)
    dot = export_dot(p, 1)
    assert dot.startswith("graph")
    assert dot.count("--") == 4
    data = export_json(p, 1)
    assert len(data["vertices"]) == 5
    assert len(data["edges"]) == 4
    assert json.dumps(data)  # serializable
    adj = data["adjacency"]
    for a, row in enumerate(adj):
        for b in row:
            assert a in adj[b]
