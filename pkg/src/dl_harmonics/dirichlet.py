"""Finite truncations, exact Dirichlet solves, and the two-sided splitting.

The stage-``n`` truncation of the product graph is the horocyclic product of
two rooted subtrees of height ``2n``: the first-tree part ``S1`` hangs below
the apex ``a1`` (the all-zero vertex at level ``-n``) and reaches up to its
leaves at level ``n``; ``S2`` mirrors it in the second tree.  The product
``S = {x1 x2 : x1 in S1, x2 in S2, level sum 0}`` has boundary

    (leaves of S1) x {a2}   union   {a1} x (leaves of S2),

which coincides (asserted at build time) with the one-step exit set of the
product walk.  Sizes: ``|S| = sum_{k=-n}^{n} q^{n+k} r^{n-k}`` and
``|bd S| = q^{2n} + r^{2n}``.

``hitting_table`` solves the boundary-hitting system exactly: unknowns are the
interior values of ``F(., y)`` for every boundary ``y`` at once; rows are
scaled to integers and eliminated fraction-free (Bareiss), and the result is
verified against the sparse defining equations -- the residual is identically
zero, every solve.

On a single tree the same probabilities factor over geodesic edges.  The
per-level factors obey scalar recursions (``d_k``: reach the predecessor from
level ``k`` before the boundary, ``u_k``: reach one fixed successor)::

    d_n = 0,      d_k = (1-a) / (1 - a d_{k+1})
    u_{-n} = 0,   u_k = (a/q) / (1 - (1-a) u_{k-1} - a (q-1)/q d_{k+1})

so tree tables, the product-formula cross-check, the finite splitting
``h = h1 + h2``, and the stage-``n`` kernel approximants all come out in
closed form with no matrix solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian
from math import gcd
from typing import Callable, Iterable, Mapping

from .dl_graph import DLParams, DLVertex
from .tree import ROOT, TreeEnd, TreeVertex, confluent_omega, predecessor, successor
from .walks import DLWalk, TreeWalk, apply as _apply_op, p1_walk, p2_walk

__all__ = [
    "FiniteChain",
    "TruncationStage",
    "HittingTable",
    "ProductReport",
    "Decomposition",
    "build_truncation",
    "hitting_table",
    "closed_tree_table",
    "edge_factors",
    "restricted_hitting",
    "verify_product_formula",
    "represent",
    "decompose",
    "kernel_approx",
    "exact_rank",
]


@dataclass(frozen=True)
class FiniteChain:
    """A finite vertex set with marked boundary, ready for exact solves."""

    kind: str  # "dl", "tree1" or "tree2"
    n: int
    params: DLParams
    alpha: Fraction
    vertices: tuple
    boundary: tuple
    interior: tuple
    a1: TreeVertex
    a2: TreeVertex

    @property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}


@dataclass(frozen=True)
class TruncationStage:
    """Symbolic stage-``n`` tree truncation (no vertex enumeration).

    The closed-form route (``kernel_approx``, ``restricted_hitting``) only
    needs the stage parameters, so deep stages stay cheap even where the
    full vertex set would be astronomically large.
    """

    kind: str  # "tree1" or "tree2"
    n: int
    params: DLParams
    alpha: Fraction


def _tree_levels(n: int, branch: int) -> dict[int, list[TreeVertex]]:
    """Vertices of the height-2n rooted subtree, grouped by level."""
    levels = {-n: [TreeVertex(-n, ())]}
    for k in range(-n + 1, n + 1):
        layer = []
        for v in levels[k - 1]:
            for l in range(branch):
                layer.append(successor(v, l, branch))
        levels[k] = layer
    return levels


def default_operator(chain: FiniteChain):
    if chain.kind == "dl":
        return DLWalk(chain.params, chain.alpha)
    if chain.kind == "tree1":
        return p1_walk(chain.params, chain.alpha)
    if chain.kind == "tree2":
        return p2_walk(chain.params, chain.alpha)
    raise ValueError(f"unknown chain kind {chain.kind!r}")


def build_truncation(
    n: int,
    params: DLParams,
    alpha: Fraction,
    kind: str = "dl",
    max_size: int = 500_000,
) -> FiniteChain:
    """Enumerate the stage-``n`` truncation and mark its boundary.

    The boundary is computed from the walk (positive one-step exit
    probability) and asserted to coincide with the two-leaf-set description.
    """
    if n < 1:
        raise ValueError("truncation stage must be >= 1")
    alpha = Fraction(alpha)
    q, r = params.q, params.r
    a1 = TreeVertex(-n, ())
    a2 = TreeVertex(-n, ())

    if kind == "dl":
        size = sum(q ** (n + k) * r ** (n - k) for k in range(-n, n + 1))
    elif kind == "tree1":
        size = sum(q ** (n + k) for k in range(-n, n + 1))
    elif kind == "tree2":
        size = sum(r ** (n + k) for k in range(-n, n + 1))
    else:
        raise ValueError(f"unknown chain kind {kind!r}")
    if size > max_size:
        raise ValueError(f"truncation would have {size} vertices (cap {max_size})")

    if kind == "dl":
        lv1 = _tree_levels(n, q)
        lv2 = _tree_levels(n, r)
        vertices = []
        for k in range(-n, n + 1):
            for x1, x2 in _cartesian(lv1[k], lv2[-k]):
                vertices.append(DLVertex(x1, x2))
        in_set = set(vertices)
        formula_boundary = {
            DLVertex(x1, a2) for x1 in lv1[n]
        } | {DLVertex(a1, x2) for x2 in lv2[n]}
        op = DLWalk(params, alpha)
        level_of = lambda v: v.x1.level
    else:
        branch = q if kind == "tree1" else r
        lv = _tree_levels(n, branch)
        vertices = [v for k in range(-n, n + 1) for v in lv[k]]
        in_set = set(vertices)
        formula_boundary = {a1} | set(lv[n])
        op = p1_walk(params, alpha) if kind == "tree1" else p2_walk(params, alpha)
        level_of = lambda v: v.level

    walk_boundary = set()
    for v in vertices:
        if level_of(v) in (-n, n):
            if any(w not in in_set for w, _ in op.transitions(v)):
                walk_boundary.add(v)
        # interior levels never exit: their tree neighbours stay within range
    if walk_boundary != formula_boundary:
        raise AssertionError("walk exit set differs from the two-leaf-set boundary")

    boundary = tuple(v for v in vertices if v in formula_boundary)
    interior = tuple(v for v in vertices if v not in formula_boundary)
    return FiniteChain(
        kind, n, params, alpha, tuple(vertices), boundary, interior, a1, a2
    )


@dataclass(frozen=True)
class HittingTable:
    """Exact table ``F[x][y]`` of boundary-hitting probabilities."""

    chain: FiniteChain
    rows: tuple  # rows[i][b] over chain.vertices x chain.boundary

    @property
    def boundary_index(self) -> dict:
        return {y: b for b, y in enumerate(self.chain.boundary)}

    def value(self, x, y) -> Fraction:
        return self.rows[self.chain.index[x]][self.boundary_index[y]]


def _bareiss_solve(a_rows: list[list[int]], b_rows: list[list[int]]) -> list[list[Fraction]]:
    """Solve ``A X = B`` exactly; fraction-free elimination, rational back-solve."""
    m = len(a_rows)
    nb = len(b_rows[0]) if m else 0
    M = [a_rows[i] + b_rows[i] for i in range(m)]
    prev = 1
    for k in range(m):
        if M[k][k] == 0:
            for i in range(k + 1, m):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    break
            else:
                raise ValueError("singular system")
        pk = M[k][k]
        for i in range(k + 1, m):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            if mik == 0:
                for j in range(k + 1, m + nb):
                    row_i[j] = row_i[j] * pk // prev
            else:
                for j in range(k + 1, m + nb):
                    row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    X = [[Fraction(0)] * nb for _ in range(m)]
    for i in range(m - 1, -1, -1):
        for b in range(nb):
            acc = Fraction(M[i][m + b])
            for j in range(i + 1, m):
                if M[i][j]:
                    acc -= M[i][j] * X[j][b]
            X[i][b] = acc / M[i][i]
    return X


def hitting_table(chain: FiniteChain, op=None, verify: bool = True) -> HittingTable:
    """Solve for all boundary columns at once and verify the solution.

    Postconditions checked exactly: boundary rows are Kronecker deltas, every
    row sums to 1, and the defining sparse equations hold with residual zero.
    """
    if op is None:
        op = default_operator(chain)
    index = chain.index
    n_all = len(chain.vertices)
    nb = len(chain.boundary)
    b_index = {y: b for b, y in enumerate(chain.boundary)}
    interior = chain.interior
    i_index = {v: i for i, v in enumerate(interior)}
    m = len(interior)

    # Sparse transition rows restricted to the chain, kept for verification.
    sparse_rows: list[list[tuple[int, Fraction]]] = []
    for v in interior:
        row = []
        for w, p in op.transitions(v):
            j = index.get(w)
            if j is None:
                raise ValueError("operator leaves the chain from an interior vertex")
            row.append((j, p))
        sparse_rows.append(row)

    a_rows: list[list[int]] = []
    b_rows: list[list[int]] = []
    for i, v in enumerate(interior):
        denom = 1
        for _, p in sparse_rows[i]:
            denom = denom * p.denominator // gcd(denom, p.denominator)
        arow = [0] * m
        brow = [0] * nb
        arow[i_index[v]] = denom
        for w_idx, p in sparse_rows[i]:
            w = chain.vertices[w_idx]
            scaled = int(p * denom)
            if w in i_index:
                arow[i_index[w]] -= scaled
            else:
                brow[b_index[w]] += scaled
        a_rows.append(arow)
        b_rows.append(brow)

    X = _bareiss_solve(a_rows, b_rows) if m else []

    rows: list[tuple[Fraction, ...]] = []
    for v in chain.vertices:
        if v in b_index:
            rows.append(tuple(Fraction(1) if b == b_index[v] else Fraction(0) for b in range(nb)))
        else:
            rows.append(tuple(X[i_index[v]]))

    table = HittingTable(chain, tuple(rows))
    if verify:
        _verify_table(table, sparse_rows)
    return table


def _verify_table(table: HittingTable, sparse_rows) -> None:
    chain = table.chain
    nb = len(chain.boundary)
    for row in table.rows:
        if sum(row) != 1:
            raise AssertionError("hitting probabilities of a row do not sum to 1")
    for i, v in enumerate(chain.interior):
        lhs = table.rows[chain.index[v]]
        acc = [Fraction(0)] * nb
        for j, p in sparse_rows[i]:
            target_row = table.rows[j]
            for b in range(nb):
                if target_row[b]:
                    acc[b] += p * target_row[b]
        if tuple(acc) != tuple(lhs):
            raise AssertionError("exact residual of the Dirichlet solve is nonzero")


# ---------------------------------------------------------------------------
# Closed-form route on a single tree.


def _chain_rate(chain: FiniteChain) -> tuple[Fraction, int]:
    if chain.kind == "tree1":
        return chain.alpha, chain.params.q
    if chain.kind == "tree2":
        return 1 - chain.alpha, chain.params.r
    raise ValueError("closed-form factors live on tree chains")


def edge_factors(n: int, branch: int, up: Fraction) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
    """Per-level edge probabilities inside the stage-``n`` tree truncation.

    ``d[k]``: from a level-``k`` vertex, reach its predecessor before the
    boundary (defined for ``-n < k <= n``); ``u[k]``: reach one fixed
    successor (defined for ``-n <= k < n``).
    """
    up = Fraction(up)
    d: dict[int, Fraction] = {n: Fraction(0)}
    for k in range(n - 1, -n, -1):
        d[k] = (1 - up) / (1 - up * d[k + 1])
    u: dict[int, Fraction] = {-n: Fraction(0)}
    for k in range(-n + 1, n):
        u[k] = (up / branch) / (1 - (1 - up) * u[k - 1] - up * (branch - 1) * d[k + 1] / branch)
    return d, u


def _in_tree_chain(v: TreeVertex, n: int) -> bool:
    if not -n <= v.level <= n:
        return False
    return all(j > -n for j, _ in v.labels)


def restricted_hitting(n: int, branch: int, up: Fraction, x: TreeVertex, y: TreeVertex) -> Fraction:
    """``F(x, y)`` before the stage-``n`` boundary, by geodesic edge products."""
    if not (_in_tree_chain(x, n) and _in_tree_chain(y, n)):
        raise ValueError("both endpoints must lie in the truncation")
    d, u = edge_factors(n, branch, up)
    c = confluent_omega(x, y)
    out = Fraction(1)
    for k in range(c.level + 1, x.level + 1):
        out *= d[k]
    for k in range(c.level, y.level):
        out *= u[k]
    return out


def closed_tree_table(chain: FiniteChain) -> HittingTable:
    """The full tree hitting table from the closed-form edge factors."""
    up, branch = _chain_rate(chain)
    n = chain.n
    d, u = edge_factors(n, branch, up)

    def value(x: TreeVertex, y: TreeVertex) -> Fraction:
        if x in bset and x != y:
            return Fraction(0)
        c = confluent_omega(x, y)
        out = Fraction(1)
        for k in range(c.level + 1, x.level + 1):
            out *= d[k]
        for k in range(c.level, y.level):
            out *= u[k]
        return out

    bset = set(chain.boundary)
    rows = tuple(
        tuple(value(x, y) for y in chain.boundary) for x in chain.vertices
    )
    return HittingTable(chain, rows)


@dataclass(frozen=True)
class ProductReport:
    checked: int
    discrepancies: tuple


def verify_product_formula(chain: FiniteChain, op=None) -> ProductReport:
    """Cross-check the product identity on the two boundary slabs.

    ``F(x1 x2, (y1, a2)) = F1(x1, y1)`` and ``F(x1 x2, (a1, y2)) = F2(x2, y2)``
    for every vertex and boundary leaf; the product side is an exact matrix
    solve, the tree side the independent closed-form route.
    """
    if chain.kind != "dl":
        raise ValueError("the product identity lives on the product chain")
    table = hitting_table(chain, op)
    n, params, alpha = chain.n, chain.params, chain.alpha
    checked = 0
    bad = []
    for x in chain.vertices:
        for y in chain.boundary:
            got = table.value(x, y)
            if y.x2 == chain.a2:
                want = restricted_hitting(n, params.q, alpha, x.x1, y.x1)
            else:
                want = restricted_hitting(n, params.r, 1 - alpha, x.x2, y.x2)
            checked += 1
            if got != want:
                bad.append((x, y, got, want))
    return ProductReport(checked, tuple(bad))


def represent(
    chain: FiniteChain,
    boundary_data: Mapping,
    op=None,
    table: HittingTable | None = None,
) -> dict:
    """Solve the Dirichlet problem: the unique harmonic extension of the data."""
    if table is None:
        table = hitting_table(chain, op)
    missing = [y for y in chain.boundary if y not in boundary_data]
    if missing:
        raise ValueError(f"boundary data missing at {len(missing)} vertices")
    values = {}
    for x in chain.vertices:
        row = table.rows[chain.index[x]]
        values[x] = sum(
            (row[b] * Fraction(boundary_data[y]) for b, y in enumerate(chain.boundary)),
            Fraction(0),
        )
    return values


@dataclass(frozen=True)
class Decomposition:
    """The two-sided splitting of a harmonic function on a truncation."""

    n: int
    params: DLParams
    alpha: Fraction
    h1: dict
    h2: dict
    lambda1: dict
    lambda2: dict


def decompose(h: Callable, n: int, params: DLParams, alpha: Fraction) -> Decomposition:
    """Split ``h`` (harmonic inside the stage-``n`` truncation) as
    ``h(x1 x2) = h1(x1) + h2(x2)`` exactly, via the boundary slabs.

    ``lambda_i`` are the boundary weights normalised by the convention
    ``lambda_i(a_i) = 0``; the reconstruction is verified exactly on all of S.
    """
    alpha = Fraction(alpha)
    chain = build_truncation(n, params, alpha, "dl")
    op = DLWalk(params, alpha)
    for v in chain.interior:
        if _apply_op(op, h, v) != h(v):
            raise ValueError(f"h is not harmonic on the interior; witness {v}")

    q, r = params.q, params.r
    a1, a2 = chain.a1, chain.a2
    leaves1 = [y.x1 for y in chain.boundary if y.x2 == a2]
    leaves2 = [y.x2 for y in chain.boundary if y.x1 == a1]

    f1 = {
        (x, y): restricted_hitting(n, q, alpha, x, y)
        for y in leaves1
        for x in {v.x1 for v in chain.vertices}
    }
    f2 = {
        (x, y): restricted_hitting(n, r, 1 - alpha, x, y)
        for y in leaves2
        for x in {v.x2 for v in chain.vertices}
    }

    side1 = sorted({v.x1 for v in chain.vertices}, key=lambda t: (t.level, t.labels))
    side2 = sorted({v.x2 for v in chain.vertices}, key=lambda t: (t.level, t.labels))
    h1 = {x: sum((f1[(x, y)] * h(DLVertex(y, a2)) for y in leaves1), Fraction(0)) for x in side1}
    h2 = {x: sum((f2[(x, y)] * h(DLVertex(a1, y)) for y in leaves2), Fraction(0)) for x in side2}

    # Normalised boundary weights.  Leaves separated from the root by the
    # apex carry zero harmonic measure from o, so they have no finite
    # normalised weight and are omitted.
    lambda1 = {a1: Fraction(0)}
    for y in leaves1:
        f = restricted_hitting(n, q, alpha, ROOT, y)
        if f:
            lambda1[y] = h(DLVertex(y, a2)) / f
    lambda2 = {a2: Fraction(0)}
    for y in leaves2:
        f = restricted_hitting(n, r, 1 - alpha, ROOT, y)
        if f:
            lambda2[y] = h(DLVertex(a1, y)) / f

    for v in chain.vertices:
        if h1[v.x1] + h2[v.x2] != h(v):
            raise AssertionError(f"splitting failed to reconstruct h at {v}")

    return Decomposition(n, params, alpha, h1, h2, lambda1, lambda2)


def kernel_approx(chain: FiniteChain | TruncationStage, x: TreeVertex, target) -> Fraction:
    """Stage-``n`` Martin kernel approximant ``F(x, y) / F(o, y)``.

    ``target`` may be a boundary vertex of the tree chain or an end: an end
    routes to the leaf whose cone contains it, and to the apex when its ray
    leaves through the bottom (in particular for the reference end).  A
    ``TruncationStage`` works as well as a materialized chain, and is the way
    to reach deep stages.
    """
    up, branch = _chain_rate(chain)
    n = chain.n
    if not _in_tree_chain(x, n) or abs(x.level) >= n or confluent_omega(x, ROOT).level <= -n:
        raise ValueError("x must lie in the interior of the truncation (n too small)")
    if isinstance(target, TreeEnd):
        if target.is_omega or any(j <= -n for j, _ in target.labels):
            # the ray leaves below the apex: apex cone
            y = TreeVertex(-n, ())
        elif any(j == 1 - n for j, _ in target.labels):
            # the ray grazes the apex exactly: its leaf has zero harmonic
            # measure from the root and the ratio is 0/0 at this stage
            raise ValueError("stage too small for this end (ray through the apex)")
        else:
            y = TreeVertex.make(n, {j: v for j, v in target.labels if j <= n})
    else:
        y = target
        if not _in_tree_chain(y, n) or abs(y.level) != n:
            raise ValueError("target vertex must belong to the chain boundary")
    denom = restricted_hitting(n, branch, up, ROOT, y)
    if denom == 0:
        raise ValueError("target has zero harmonic measure from the root at this stage")
    return restricted_hitting(n, branch, up, x, y) / denom


def exact_rank(rows: Iterable[Iterable[Fraction]]) -> int:
    """Rank over the rationals by plain exact elimination."""
    mat = [list(map(Fraction, row)) for row in rows]
    rank = 0
    col = 0
    ncols = len(mat[0]) if mat else 0
    while rank < len(mat) and col < ncols:
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        for i in range(rank + 1, len(mat)):
            if mat[i][col]:
                factor = mat[i][col] / pv
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank
