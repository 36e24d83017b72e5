from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from queuelay.errors import InputError
from queuelay.generators import (
    FamilySpec,
    SplitMix64,
    connected_planar_graphs,
    gen_grid,
    gen_k5_torus,
    gen_random_planar,
    gen_tight_example,
    gen_toroidal_grid,
    gen_well_layered,
    generate,
)
from queuelay.graph import bfs_structure, face_trace
from queuelay.welllayered import check_well_layered


def test_splitmix_reference_values():
    rng = SplitMix64(0)
    assert rng.next() == 0xE220A8397B1DCDAF
    assert rng.next() == 0x6E789E6AA1B965F4


def test_splitmix_helpers():
    rng = SplitMix64(42)
    draws = [rng.below(6) for _ in range(600)]
    assert set(draws) == set(range(6))
    items = list(range(10))
    rng.shuffle(items)
    assert sorted(items) == list(range(10))
    with pytest.raises(ValueError):
        rng.below(0)


@pytest.mark.parametrize("delta", [2, 3, 4])
def test_tight_example_shape(delta):
    ex = gen_tight_example(delta)
    g = ex.emb.graph
    leaves_before = sum(1 for label in ex.labels if label[0] in "vw")
    assert leaves_before == 2 * delta * delta
    assert len(ex.matching) == delta * delta
    assert g.max_degree == 3
    assert face_trace(ex.emb).genus == 0
    pairs = [(ex.labels[f"v_{i}_{j}"], ex.labels[f"w_{i}_{j}"]) for i in range(1, delta + 1) for j in range(1, delta + 1)]
    assert [g.edges[e] for e in ex.matching] == pairs


def test_tight_needs_delta_two():
    with pytest.raises(InputError):
        gen_tight_example(1)


def test_grid_counts():
    emb = gen_grid(3, 3)
    assert (emb.n, emb.m, face_trace(emb).count) == (9, 12, 5)


@pytest.mark.parametrize("rows,cols", [(3, 3), (4, 4), (3, 5)])
def test_toroidal_counts(rows, cols):
    emb = gen_toroidal_grid(rows, cols)
    assert emb.m == 2 * rows * cols and emb.graph.max_degree == 4
    assert face_trace(emb).genus == 2
    with pytest.raises(InputError):
        gen_toroidal_grid(2, 3)


def test_k5():
    emb = gen_k5_torus()
    assert emb.m == 10 and face_trace(emb).genus == 2


@given(st.integers(0, 100_000), st.integers(2, 60), st.integers(2, 4))
def test_well_layered_by_construction(seed, n, delta):
    emb = gen_well_layered(n, delta, seed)
    assert emb.n == n and face_trace(emb).genus == 0
    assert check_well_layered(emb, bfs_structure(emb, 0), delta) is None


@given(st.integers(0, 100_000), st.integers(3, 60))
def test_random_planar_is_planar_and_connected(seed, n):
    emb = gen_random_planar(n, seed)
    assert emb.n == n and emb.graph.is_connected()
    assert face_trace(emb).genus == 0


def test_same_spec_same_output():
    for spec in [
        FamilySpec("well-layered", {"n": 30, "delta": 3, "seed": 7}),
        FamilySpec("random-planar", {"n": 30, "seed": 7}),
        FamilySpec("tight", {"delta": 2}),
        FamilySpec("grid", {"rows": 3, "cols": 4}),
        FamilySpec("torus", {"rows": 3, "cols": 4}),
        FamilySpec("k5-torus"),
    ]:
        assert generate(spec) == generate(spec)
    assert gen_random_planar(30, 1) != gen_random_planar(30, 2)
    with pytest.raises(InputError):
        generate(FamilySpec("cube"))


def test_exhaustive_corpus():
    graphs = list(connected_planar_graphs(5))
    # Connected graphs on 1..5 vertices: 1 + 1 + 2 + 6 + 21, minus K5.
    assert len(graphs) == 30
    assert all(face_trace(e).genus == 0 for e in graphs)
