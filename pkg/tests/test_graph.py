import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planarflow.errors import (
    Disconnected,
    EmbeddingInvalid,
    NonPlanarEmbedding,
    ParallelArcOrLoop,
    TerminalOverlap,
)
from planarflow.generate import generate
from planarflow.graph import PlanarGraph, TerminalSets, build_graph, rev


def triangle():
    arcs = [(0, 1, 5), (1, 2, 3), (2, 0, 2)]
    rotations = [[1, 2], [2, 0], [0, 1]]
    return build_graph(3, arcs, rotations)


def test_triangle_has_two_faces():
    g = triangle()
    assert g.num_faces == 2
    assert g.n - g.m + g.num_faces == 2


def test_single_arc_has_one_face():
    g = build_graph(2, [(0, 1, 7)], [[1], [0]])
    assert g.num_faces == 1


def test_k5_fails_euler_for_any_rotation():
    nodes = range(5)
    arcs = [(u, v, 1) for u, v in itertools.combinations(nodes, 2)]
    rotations = [[u for u in nodes if u != v] for v in nodes]
    with pytest.raises(NonPlanarEmbedding):
        build_graph(5, arcs, rotations)


def test_self_loop_rejected():
    with pytest.raises(ParallelArcOrLoop):
        build_graph(2, [(0, 0, 1)], [[], []])


def test_parallel_arc_rejected():
    with pytest.raises(ParallelArcOrLoop):
        build_graph(2, [(0, 1, 1), (1, 0, 2)], [[1, 1], [0, 0]])


def test_disconnected_rejected():
    arcs = [(0, 1, 1), (2, 3, 1)]
    rotations = [[1], [0], [3], [2]]
    with pytest.raises(Disconnected):
        build_graph(4, arcs, rotations)


def test_rotation_listing_non_neighbor_rejected():
    with pytest.raises(EmbeddingInvalid):
        build_graph(3, [(0, 1, 1), (1, 2, 1)], [[1], [0, 2], [0]])


def test_dart_involution_and_caps():
    g = triangle()
    for d in g.darts():
        assert rev(rev(d)) == d
        assert rev(d) != d
        assert g.dart_cap(d) >= 0
        if d & 1:
            assert g.dart_cap(d) == 0
        assert g.dart_tail(d) == g.dart_head(rev(d))


def test_every_dart_in_exactly_one_rotation():
    g = triangle()
    listed = [d for v in range(g.n) for d in g.rot[v]]
    assert sorted(listed) == list(g.darts())


def test_grid_faces():
    # 2x2 grid: 4 nodes, 4 arcs, inner face plus outer face
    arcs = [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)]
    rotations = [[1, 2], [3, 0], [0, 3], [1, 2]]
    g = build_graph(4, arcs, rotations)
    assert g.num_faces == 2


def test_terminal_sets_reject_overlap():
    with pytest.raises(TerminalOverlap):
        TerminalSets(frozenset({1, 2}), frozenset({2, 3}))


def test_terminal_sets_ok():
    ts = TerminalSets(frozenset({0}), frozenset({5}))
    assert 0 in ts.sources and 5 in ts.sinks


@given(st.sampled_from(["grid", "tri"]), st.integers(2, 60), st.integers(0, 10 ** 6))
def test_generated_instances_are_valid_embeddings(kind, n, seed):
    g, ts = generate(kind, n, seed).build()
    assert g.n - g.m + g.num_faces == 2
    if kind == "tri":
        assert g.m == 3 * g.n - 6


@given(st.integers(3, 50), st.integers(0, 10 ** 6))
def test_dart_involution_on_generated_graphs(n, seed):
    g, _ = generate("tri", n, seed).build()
    for d in g.darts():
        assert rev(rev(d)) == d and rev(d) != d
        assert g.dart_tail(d) == g.dart_head(rev(d))
        if d & 1:
            assert g.dart_cap(d) == 0


@given(st.integers(3, 50), st.integers(0, 10 ** 6))
def test_rotation_partitions_darts_on_generated_graphs(n, seed):
    g, _ = generate("tri", n, seed).build()
    listed = sorted(d for v in range(g.n) for d in g.rot[v])
    assert listed == list(g.darts())
