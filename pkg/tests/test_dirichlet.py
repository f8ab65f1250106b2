import random
from fractions import Fraction

import pytest

from dl_harmonics.dirichlet import (
    TruncationStage,
    build_truncation,
    closed_tree_table,
    decompose,
    edge_factors,
    exact_rank,
    hitting_table,
    kernel_approx,
    represent,
    restricted_hitting,
    verify_product_formula,
)
from dl_harmonics.dl_graph import DLParams, DLVertex, origin
from dl_harmonics.kernels import KernelSpec, martin_kernel_tree
from dl_harmonics.tree import OMEGA, ROOT, TreeEnd, TreeVertex
from dl_harmonics.walks import DLWalk, p1_walk

RNG_SEED = 16180

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def solve_dense(chain, op):
    """Independent oracle: Gauss-Jordan over Fractions, no shared code with
    the package's fraction-free solver."""
    interior = list(chain.interior)
    pos = {v: i for i, v in enumerate(interior)}
    bpos = {y: b for b, y in enumerate(chain.boundary)}
    m = len(interior)
    nb = len(chain.boundary)
    aug = [[Fraction(0)] * (m + nb) for _ in range(m)]
    for i, v in enumerate(interior):
        aug[i][i] += 1
        for w, p in op.transitions(v):
            if w in pos:
                aug[i][pos[w]] -= p
            else:
                aug[i][m + bpos[w]] += p
    for col in range(m):
        piv = next(i for i in range(col, m) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [a / pv for a in aug[col]]
        for i in range(m):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    out = {}
    for y in chain.boundary:
        for z in chain.boundary:
            out[(y, z)] = Fraction(1 if y == z else 0)
    for i, v in enumerate(interior):
        for y in chain.boundary:
            out[(v, y)] = aug[i][m + bpos[y]]
    return out


def test_truncation_sizes():
    c = build_truncation(1, DLParams(2, 2), HALF, "dl")
    assert (len(c.vertices), len(c.boundary), len(c.interior)) == (12, 8, 4)
    c = build_truncation(2, DLParams(2, 2), HALF, "dl")
    assert (len(c.vertices), len(c.boundary)) == (80, 32)
    c = build_truncation(1, DLParams(2, 3), HALF, "dl")
    assert (len(c.vertices), len(c.boundary)) == (19, 13)
    c = build_truncation(1, DLParams(2, 2), HALF, "tree1")
    assert (len(c.vertices), len(c.boundary), len(c.interior)) == (7, 5, 2)


def test_truncation_validation():
    with pytest.raises(ValueError):
        build_truncation(0, DLParams(2, 2), HALF)
    with pytest.raises(ValueError):
        build_truncation(9, DLParams(2, 2), HALF, "dl")  # larger than the cap
    with pytest.raises(ValueError):
        build_truncation(1, DLParams(2, 2), HALF, "cube")


def test_golden_row_at_origin():
    p = DLParams(2, 2)
    c = build_truncation(1, p, HALF, "dl")
    t = hitting_table(c)
    o = origin(p)
    for y in c.boundary:
        side = y.x1 if y.x2 == c.a2 else y.x2
        blocked = dict(side.labels).get(0, 0) != 0
        assert t.value(o, y) == (0 if blocked else Fraction(1, 4))


def test_table_matches_dense_oracle():
    for p, n, alpha, kind in (
        (DLParams(2, 2), 1, HALF, "dl"),
        (DLParams(2, 3), 1, THIRD, "dl"),
        (DLParams(2, 2), 2, Fraction(2, 5), "tree1"),
    ):
        c = build_truncation(n, p, alpha, kind)
        t = hitting_table(c)
        from dl_harmonics.dirichlet import default_operator

        want = solve_dense(c, default_operator(c))
        for x in c.vertices:
            for y in c.boundary:
                assert t.value(x, y) == want[(x, y)]


def test_table_matches_monte_carlo():
    # third route: run the absorbed walk with a plain seeded sampler and
    # compare exit frequencies from the origin against the exact row
    p = DLParams(2, 2)
    chain = build_truncation(2, p, THIRD, "dl")
    table = hitting_table(chain)
    rows = {v: DLWalk(p, THIRD).transitions(v) for v in chain.interior}
    absorbed = set(chain.boundary)
    rng = random.Random(RNG_SEED)
    trials = 20000
    counts = dict.fromkeys(chain.boundary, 0)
    for _ in range(trials):
        v = origin(p)
        while v not in absorbed:
            x = rng.random()
            acc = 0.0
            for t, w in rows[v]:
                acc += float(w)
                if x < acc:
                    v = t
                    break
        counts[v] += 1
    o = origin(p)
    for y in chain.boundary:
        want = float(table.value(o, y))
        sigma = (want * (1 - want) / trials) ** 0.5
        assert abs(counts[y] / trials - want) <= 4 * sigma


def test_rows_sum_to_one_and_boundary_deltas():
    c = build_truncation(1, DLParams(2, 3), Fraction(2, 5), "dl")
    t = hitting_table(c)
    for x in c.vertices:
        assert sum(t.rows[c.index[x]]) == 1
    for y in c.boundary:
        assert t.value(y, y) == 1
        assert all(t.value(y, z) == 0 for z in c.boundary if z != y)


def test_edge_factors_golden():
    d, u = edge_factors(2, 2, HALF)
    # at the driftless point d_k collapses to (n-k)/(n-k+1)
    for k in (-1, 0, 1, 2):
        assert d[k] == Fraction(2 - k, 3 - k)
    assert u == {-2: Fraction(0), -1: Fraction(3, 10), 0: Fraction(10, 29), 1: Fraction(29, 96)}
    assert u[0] * u[1] == Fraction(5, 48)


def test_driftless_down_factors_all_stages():
    for n in (1, 2, 3, 5):
        d, _ = edge_factors(n, 2, HALF)
        for k in range(-n + 1, n + 1):
            assert d[k] == Fraction(n - k, n - k + 1)


def test_restricted_hitting_golden():
    assert restricted_hitting(2, 2, HALF, ROOT, TreeVertex.make(2, {})) == Fraction(5, 48)
    assert restricted_hitting(1, 2, HALF, ROOT, ROOT) == 1
    with pytest.raises(ValueError):
        restricted_hitting(1, 2, HALF, TreeVertex.make(3, {}), ROOT)


def test_closed_form_equals_matrix_solve():
    for alpha in (THIRD, HALF):
        c = build_truncation(2, DLParams(2, 2), alpha, "tree1")
        assert closed_tree_table(c).rows == hitting_table(c).rows
    c = build_truncation(1, DLParams(2, 3), THIRD, "tree2")
    assert closed_tree_table(c).rows == hitting_table(c).rows


def test_slab_goldens():
    p = DLParams(2, 2)
    c = build_truncation(2, p, HALF, "dl")
    t = hitting_table(c)
    o = origin(p)
    top = DLVertex(TreeVertex.make(2, {}), c.a2)
    assert t.value(o, top) == Fraction(5, 48)
    assert sum(t.value(o, y) for y in c.boundary if y.x2 == c.a2) == HALF

    c = build_truncation(2, p, THIRD, "dl")
    t = hitting_table(c)
    assert t.value(o, DLVertex(TreeVertex.make(2, {}), c.a2)) == Fraction(3, 70)
    assert t.value(o, DLVertex(c.a1, TreeVertex.make(2, {}))) == Fraction(6, 35)
    # exit through the top slab is a plain gambler's ruin on the level
    assert sum(t.value(o, y) for y in c.boundary if y.x2 == c.a2) == Fraction(1, 5)

    p = DLParams(2, 3)
    c = build_truncation(1, p, THIRD, "dl")
    t = hitting_table(c)
    o = origin(p)
    assert t.value(o, DLVertex(TreeVertex.make(1, {}), c.a2)) == Fraction(1, 6)
    assert t.value(o, DLVertex(c.a1, TreeVertex.make(1, {}))) == Fraction(2, 9)
    assert sum(t.value(o, y) for y in c.boundary if y.x2 == c.a2) == THIRD


def test_product_formula_stage1():
    report = verify_product_formula(build_truncation(1, DLParams(2, 2), THIRD, "dl"))
    assert report.checked == 96
    assert report.discrepancies == ()
    with pytest.raises(ValueError):
        verify_product_formula(build_truncation(1, DLParams(2, 2), THIRD, "tree1"))


def test_represent_constants_and_deltas():
    c = build_truncation(1, DLParams(2, 2), HALF, "dl")
    t = hitting_table(c)
    values = represent(c, {y: Fraction(3) for y in c.boundary}, table=t)
    assert all(v == 3 for v in values.values())
    y0 = c.boundary[0]
    delta = represent(c, {y: Fraction(1 if y == y0 else 0) for y in c.boundary}, table=t)
    for x in c.vertices:
        assert delta[x] == t.value(x, y0)
    with pytest.raises(ValueError):
        represent(c, {y0: Fraction(1)}, table=t)


def test_represent_min_principle():
    rng = random.Random(RNG_SEED)
    c = build_truncation(1, DLParams(2, 3), Fraction(2, 5), "dl")
    t = hitting_table(c)
    for _ in range(50):
        data = {y: Fraction(rng.randrange(0, 100), 100) for y in c.boundary}
        values = represent(c, data, table=t)
        lo, hi = min(data.values()), max(data.values())
        assert all(lo <= v <= hi for v in values.values())


def test_decompose_splits_harmonic_functions():
    p = DLParams(2, 2)
    alpha = HALF
    h = KernelSpec(1, TreeEnd.word({1: 1}), alpha, p).evaluate
    dec = decompose(h, 2, p, alpha)
    o = origin(p)
    assert dec.h1[o.x1] + dec.h2[o.x2] == h(o)
    apex = TreeVertex(-2, ())
    assert dec.lambda1[apex] == 0 and dec.lambda2[apex] == 0
    assert all(v >= 0 for v in dec.lambda1.values())
    assert all(v >= 0 for v in dec.lambda2.values())
    # h only depends on the first coordinate, so the second summand is the
    # kernel value at the apex times the exit mass through the second slab
    chain = build_truncation(2, p, alpha, "dl")
    leaves2 = [y.x2 for y in chain.boundary if y.x1 == chain.a1]
    at_apex = h(DLVertex(chain.a1, leaves2[0]))
    for x2 in {v.x2 for v in chain.vertices}:
        exit2 = sum(restricted_hitting(2, p.r, 1 - alpha, x2, y) for y in leaves2)
        assert dec.h2[x2] == at_apex * exit2
    # the two-sided split of the constant gives the slab exit masses
    ones = decompose(lambda v: Fraction(1), 1, p, alpha)
    assert ones.h1[ROOT] == HALF
    assert ones.h2[ROOT] == HALF


def test_decompose_rejects_non_harmonic():
    p = DLParams(2, 2)
    with pytest.raises(ValueError):
        decompose(lambda v: Fraction(v.x1.level * v.x1.level), 1, p, HALF)


def test_kernel_approx_normalised_and_guarded():
    p = DLParams(2, 2)
    stage = TruncationStage("tree1", 3, p, HALF)
    assert kernel_approx(stage, ROOT, TreeEnd.word({1: 1})) == 1
    assert kernel_approx(stage, ROOT, OMEGA) == 1
    chain = build_truncation(3, p, HALF, "tree1")
    assert kernel_approx(chain, ROOT, TreeEnd.word({1: 1})) == 1
    # a ray that grazes the apex leaves a 0/0 ratio at this stage
    with pytest.raises(ValueError):
        kernel_approx(stage, ROOT, TreeEnd.word({-2: 1}))
    # x outside the interior
    with pytest.raises(ValueError):
        kernel_approx(stage, TreeVertex.make(3, {}), TreeEnd.word({1: 1}))
    # boundary target vertex form
    y = TreeVertex.make(3, {1: 1})
    got = kernel_approx(chain, TreeVertex.make(1, {1: 1}), y)
    assert got == restricted_hitting(3, 2, HALF, TreeVertex.make(1, {1: 1}), y) / restricted_hitting(
        3, 2, HALF, ROOT, y
    )
    with pytest.raises(ValueError):
        kernel_approx(chain, ROOT, TreeVertex.make(2, {1: 1}))


def test_kernel_approx_converges():
    # one fixed pair, drifted and driftless: the stage-n values approach the
    # Martin kernel, fast with drift and slowly without
    p = DLParams(2, 2)
    x = TreeVertex.make(1, {1: 1})
    xi = TreeEnd.word({1: 1})
    for alpha, final_bound in ((THIRD, 2e-3), (HALF, 0.18)):
        limit = martin_kernel_tree(1, x, xi, alpha, p)
        errs = []
        for n in range(2, 11):
            stage = TruncationStage("tree1", n, p, alpha)
            errs.append(abs(kernel_approx(stage, x, xi) - limit))
        assert all(a > b for a, b in zip(errs, errs[1:]))
        assert errs[-1] < final_bound
    assert martin_kernel_tree(1, x, xi, THIRD, p) == 4
    assert martin_kernel_tree(1, x, xi, HALF, p) == 2


def test_exact_rank():
    assert exact_rank([[1, 0], [0, 1], [1, 1]]) == 2
    assert exact_rank([[Fraction(1, 2), Fraction(1, 4)], [Fraction(2), Fraction(1)]]) == 1
    assert exact_rank([]) == 0
    # kernels at distinct ends are linearly independent as functions
    p = DLParams(2, 2)
    ends = [TreeEnd.word({}), TreeEnd.word({1: 1}), TreeEnd.word({-1: 1}), OMEGA]
    pts = [TreeVertex.make(l, lab) for l, lab in
           ((0, {}), (1, {1: 1}), (-1, {}), (1, {}), (2, {1: 1, 2: 1}), (-2, {}), (0, {-1: 1}))]
    rows = [
        [martin_kernel_tree(1, v, xi, HALF, p) for v in pts] for xi in ends
    ]
    assert exact_rank(rows) == len(ends)
