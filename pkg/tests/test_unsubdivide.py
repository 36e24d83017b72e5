from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_graph, random_connected_graph
from queuelay.errors import InputError
from queuelay.graph import Graph
from queuelay.layout import QueueLayout, exact_queue_number, fixed_order_layout, verify_layout
from queuelay.unsubdivide import SubdivisionMap, subdivide_edges, unsubdivide_bound, unsubdivide_layout


def test_bound_closed_form():
    for k in range(1, 5):
        for c in range(4):
            assert unsubdivide_bound(k, c) * (2 * k - 1) == 2 * k * ((2 * k) ** (c + 1) - 1)
    assert unsubdivide_bound(1, 1) == 6
    assert unsubdivide_bound(3, 0) == 6


def test_identity_subdivision():
    g = make_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    smap = subdivide_edges(g, [0, 0, 0, 0])
    k, layout = exact_queue_number(smap.sub)
    out = unsubdivide_layout(smap, layout)
    assert out.order == layout.order and out.k <= 2 * k


def test_single_subdivision_spot_value():
    g = make_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    smap = subdivide_edges(g, [1, 0, 1, 1, 0])
    k, layout = exact_queue_number(smap.sub)
    assert k == 1
    out = unsubdivide_layout(smap, layout)
    assert verify_layout(g, out) is None and out.k <= 6


def test_map_validation():
    g = make_graph(2, [(0, 1)])
    sub = make_graph(3, [(0, 2), (2, 1)])
    SubdivisionMap(g, sub, ((0, 2, 1),), 1)
    with pytest.raises(InputError, match="more than c"):
        SubdivisionMap(g, sub, ((0, 2, 1),), 0)
    with pytest.raises(InputError):
        SubdivisionMap(g, sub, ((1, 2, 0),), 1)
    with pytest.raises(InputError):
        SubdivisionMap(g, make_graph(3, [(0, 2), (2, 1), (0, 1)]), ((0, 2, 1),), 1)


def test_invalid_layout_rejected():
    g = make_graph(4, [(0, 3), (1, 2)])
    smap = subdivide_edges(g, [0, 0])
    with pytest.raises(InputError, match="not valid"):
        unsubdivide_layout(smap, QueueLayout((0, 1, 2, 3), (0, 0), 1))


@given(st.integers(0, 100_000), st.integers(2, 7), st.integers(0, 3))
def test_random_trees(seed, n, c):
    rng = random.Random(seed)
    tree = random_connected_graph(rng, n, 0)
    smap = subdivide_edges(tree, [rng.randint(0, min(c, 2)) for _ in tree.edges])
    order = list(range(smap.sub.n))
    rng.shuffle(order)
    layout = fixed_order_layout(smap.sub, order)
    out = unsubdivide_layout(smap, layout)
    assert verify_layout(tree, out) is None
    assert out.k <= unsubdivide_bound(layout.k, smap.c)
    # Output order is the input order with subdivision vertices removed.
    assert list(out.order) == [v for v in layout.order if v < n]


@given(st.integers(0, 100_000), st.integers(2, 6), st.integers(0, 6))
def test_random_graphs(seed, n, extra):
    rng = random.Random(seed)
    g: Graph = random_connected_graph(rng, n, extra)
    smap = subdivide_edges(g, [rng.randint(0, 3) for _ in g.edges])
    order = list(range(smap.sub.n))
    rng.shuffle(order)
    layout = fixed_order_layout(smap.sub, order)
    out = unsubdivide_layout(smap, layout)
    assert verify_layout(g, out) is None
    assert out.k <= unsubdivide_bound(layout.k, smap.c)
