import math
import random

import pytest

from planarflow.errors import PreconditionNotTriangulated
from planarflow.generate import generate, grid_arrays, random_triangulation_arrays
from planarflow.graph import NO_KEY, build_graph
from planarflow.separator import find_cycle_separator, split_into_pieces
from planarflow.surgery import triangulate_and_biconnect


def build_from_arrays(arrays):
    tails, heads, caps, rot = arrays
    nbrs = []
    for v, darts in enumerate(rot):
        row = []
        for d in darts:
            a = d >> 1
            row.append(heads[a] if (d & 1) == 0 else tails[a])
        nbrs.append(row)
    return build_graph(len(rot), list(zip(tails, heads, caps)), nbrs)


def tri_graph(n, seed):
    return build_from_arrays(random_triangulation_arrays(n, random.Random(seed)))


def check_separator(g, sep):
    n = g.n
    k = sep.k
    assert len(set(sep.boundary)) == k
    assert len(sep.inside) <= 2 * n / 3
    assert len(sep.outside) <= 2 * n / 3
    assert len(sep.inside) + len(sep.outside) + k == n
    # boundary is a cycle of real arcs, consecutive nodes adjacent
    for i, d in enumerate(sep.cycle_darts):
        assert g.dart_tail(d) == sep.boundary[i]
        assert g.dart_head(d) == sep.boundary[(i + 1) % k]


def test_requires_triangulation():
    g = build_graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)],
                    [[1, 3], [2, 0], [3, 1], [0, 2]])
    with pytest.raises(PreconditionNotTriangulated):
        find_cycle_separator(g)


def test_triangle_base_case():
    g = tri_graph(3, 0)
    sep = find_cycle_separator(g)
    assert sep.k == 3
    assert not sep.inside and not sep.outside


def test_grid_separator_bounds():
    g0 = build_from_arrays(grid_arrays(100, random.Random(1)))
    g = triangulate_and_biconnect(g0)
    sep = find_cycle_separator(g)
    check_separator(g, sep)
    assert sep.k <= 8.0 * math.sqrt(100)


def test_random_triangulations_many_seeds():
    for seed in range(1000):
        g = tri_graph(50, seed)
        gt = triangulate_and_biconnect(g)
        sep = find_cycle_separator(gt)
        check_separator(gt, sep)
        assert sep.k <= 8.0 * math.sqrt(gt.n)


def test_split_sizes_sum_to_n_plus_k():
    g = triangulate_and_biconnect(build_from_arrays(grid_arrays(64, random.Random(3))))
    sep = find_cycle_separator(g)
    p1, p2 = split_into_pieces(g, sep)
    assert p1.graph.n + p2.graph.n == g.n + sep.k
    assert p1.graph.n <= 2 * g.n / 3 + sep.k
    assert p2.graph.n <= 2 * g.n / 3 + sep.k


def test_split_partitions_flow_arcs():
    for seed in (0, 5, 9):
        g = triangulate_and_biconnect(tri_graph(40, seed))
        sep = find_cycle_separator(g)
        p1, p2 = split_into_pieces(g, sep)
        seen = {}
        for piece in (p1, p2):
            for la, pa in enumerate(piece.parent_arcs):
                if pa is None:
                    assert piece.graph.keys[la] == NO_KEY
                    continue
                assert pa not in seen, "parent arc appears in both pieces"
                seen[pa] = piece
                assert piece.graph.keys[la] == g.keys[pa]
        assert sorted(seen) == list(range(g.m))


def test_split_pieces_are_valid_embeddings():
    for seed in range(6):
        g = triangulate_and_biconnect(tri_graph(35, seed))
        sep = find_cycle_separator(g)
        p1, p2 = split_into_pieces(g, sep)
        for piece in (p1, p2):
            piece.graph.check_embedding()
            # boundary ring is present and in order
            k = len(piece.boundary_local)
            for i in range(k):
                u = piece.boundary_local[i]
                v = piece.boundary_local[(i + 1) % k]
                assert any(
                    {piece.graph.tails[a], piece.graph.heads[a]} == {u, v}
                    for a in range(piece.graph.m)
                )


def test_interior_arcs_stay_on_their_side():
    g = triangulate_and_biconnect(tri_graph(45, 2))
    sep = find_cycle_separator(g)
    p1, p2 = split_into_pieces(g, sep)
    inside, outside = sep.inside, sep.outside
    for piece, strict in ((p1, inside), (p2, outside)):
        local_parent = piece.parent_nodes
        for la, pa in enumerate(piece.parent_arcs):
            if pa is None:
                continue
            t, h = g.tails[pa], g.heads[pa]
            for node in (t, h):
                assert node in strict or node in set(sep.boundary)


def test_consecutive_boundary_nodes_cofacial():
    g = triangulate_and_biconnect(tri_graph(60, 7))
    sep = find_cycle_separator(g)
    for i in range(sep.k):
        d = sep.cycle_darts[i]
        # adjacent nodes always share the two faces of their arc
        assert g.face_of_dart(d) != g.face_of_dart(d ^ 1) or g.m == 1
