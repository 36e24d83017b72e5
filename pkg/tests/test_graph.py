from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import embed_by_rotation, make_graph, random_connected_graph, random_embedding
from queuelay.errors import InputError
from queuelay.generators import gen_grid, gen_k5_torus, gen_random_planar, gen_toroidal_grid
from queuelay.graph import (
    EdgeKind,
    EmbeddedGraph,
    bfs_structure,
    classify_edge,
    components,
    face_trace,
    induced,
    layer_order,
    layering_is_valid,
    orient,
)


class TestGraph:
    def test_rejects_loops_and_parallel_edges(self):
        with pytest.raises(InputError):
            make_graph(2, [(0, 0)])
        with pytest.raises(InputError):
            make_graph(2, [(0, 1), (1, 0)])
        with pytest.raises(InputError):
            make_graph(2, [(0, 2)])

    def test_degrees_and_components(self):
        g = make_graph(5, [(0, 1), (1, 2), (3, 4)])
        assert [g.degree(v) for v in range(5)] == [1, 2, 1, 1, 1]
        assert g.max_degree == 2
        assert components(g) == [[0, 1, 2], [3, 4]]
        assert not g.is_connected()

    def test_rotation_must_list_incident_edges(self):
        g = make_graph(3, [(0, 1), (1, 2)])
        with pytest.raises(InputError, match="invalid embedding"):
            EmbeddedGraph(g, ((0,), (0,), (1,)))
        with pytest.raises(InputError, match="invalid embedding"):
            EmbeddedGraph(g, ((0,), (0, 1), (1,)), (1, 2))


class TestFaceTrace:
    def test_triangle_has_two_faces(self):
        emb = embed_by_rotation(3, [(0, 1), (1, 2), (0, 2)], {0: [1, 2], 1: [2, 0], 2: [0, 1]})
        faces = face_trace(emb)
        assert faces.count == 2 and faces.genus == 0

    def test_k4_plane(self, k4_plane):
        faces = face_trace(k4_plane)
        assert faces.count == 4 and faces.genus == 0

    def test_single_vertex(self):
        faces = face_trace(EmbeddedGraph(make_graph(1, []), ((),)))
        assert faces.count == 1 and faces.genus == 0

    def test_tree_has_one_face(self):
        emb = embed_by_rotation(4, [(0, 1), (0, 2), (0, 3)], {0: [1, 2, 3], 1: [0], 2: [0], 3: [0]})
        faces = face_trace(emb)
        assert faces.count == 1 and len(faces.walks[0]) == 6

    def test_k5_on_torus(self):
        faces = face_trace(gen_k5_torus())
        # 5 - 10 + f = 2 - 2
        assert faces.count == 5 and faces.genus == 2

    @pytest.mark.parametrize("rows,cols", [(3, 3), (4, 4), (3, 5)])
    def test_toroidal_grid(self, rows, cols):
        faces = face_trace(gen_toroidal_grid(rows, cols))
        assert faces.count == rows * cols and faces.genus == 2

    def test_grid(self):
        faces = face_trace(gen_grid(3, 3))
        assert faces.count == 5 and faces.genus == 0

    def test_projective_plane(self):
        # K4 with one twisted edge in the triangle: one-sided embedding.
        base = embed_by_rotation(
            4,
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            {0: [1, 3, 2], 1: [2, 3, 0], 2: [0, 3, 1], 3: [0, 1, 2]},
        )
        emb = EmbeddedGraph(base.graph, base.rotation, (1, 1, 1, -1, 1, 1))
        faces = face_trace(emb)
        assert faces.genus == 1
        with pytest.raises(InputError, match="non-orientable"):
            orient(emb)

    def test_disconnected_rejected(self):
        emb = EmbeddedGraph(make_graph(2, []), ((), ()))
        with pytest.raises(InputError, match="connected required"):
            face_trace(emb)

    @given(st.integers(0, 10_000), st.integers(1, 9), st.integers(0, 12), st.sampled_from([0.0, 0.3]))
    def test_euler_bookkeeping(self, seed, n, extra, twist):
        rng = random.Random(seed)
        emb = random_embedding(rng, random_connected_graph(rng, n, extra), twist)
        faces = face_trace(emb)
        assert sum(len(w) for w in faces.walks) == 2 * emb.m
        assert faces.genus == 2 - emb.n + emb.m - faces.count >= 0
        # Every edge side lies on exactly one face.
        sides = sorted(e for walk in faces.walks for _, e in walk)
        assert sides == sorted(list(range(emb.m)) * 2)


class TestOrient:
    @given(st.integers(0, 10_000))
    def test_vertex_switching_preserves_faces(self, seed):
        rng = random.Random(seed)
        g = random_connected_graph(rng, 7, 6)
        emb = random_embedding(rng, g)
        # Switch a random set of vertices: reverse rotation, negate incident signatures.
        flip = [rng.choice((1, -1)) for _ in range(g.n)]
        rotation = tuple(r if flip[v] == 1 else r[::-1] for v, r in enumerate(emb.rotation))
        signature = tuple(flip[u] * flip[v] for u, v in g.edges)
        switched = EmbeddedGraph(g, rotation, signature)
        restored = orient(switched)
        assert restored.orientable_signature
        assert face_trace(restored).count == face_trace(emb).count


class TestBfs:
    def test_grid_layers(self):
        emb = gen_grid(3, 3)
        bfs = bfs_structure(emb, 0)
        assert bfs.layer_of == (0, 1, 2, 1, 2, 3, 2, 3, 4)
        assert bfs.t == 4
        assert len(bfs.tree_edges) == 8

    def test_parent_tie_break_follows_rotation(self):
        # Vertex 3 sees 1 and 2 in layer 1; its rotation from edge 3 reaches 2 first.
        emb = embed_by_rotation(
            4, [(0, 1), (0, 2), (1, 3), (2, 3)], {0: [1, 2], 1: [3, 0], 2: [0, 3], 3: [2, 1]}
        )
        bfs = bfs_structure(emb, 0)
        assert bfs.parent[3] == 1  # edge 2 = (1, 3) is the lowest id at vertex 3
        emb2 = embed_by_rotation(
            4, [(0, 1), (0, 2), (2, 3), (1, 3)], {0: [1, 2], 1: [3, 0], 2: [0, 3], 3: [2, 1]}
        )
        assert bfs_structure(emb2, 0).parent[3] == 2

    def test_edge_kinds(self, k4_plane):
        bfs = bfs_structure(k4_plane, 0)
        kinds = [classify_edge(k4_plane.graph, bfs, e) for e in range(6)]
        assert kinds[:3] == [EdgeKind.BINDING_TREE] * 3
        assert kinds[3:] == [EdgeKind.LEVEL] * 3

    def test_layer_order_is_preorder(self):
        emb = gen_grid(2, 3)
        bfs = bfs_structure(emb, 0)
        order = layer_order(emb, bfs)
        assert sorted(v for layer in order.layers for v in layer) == list(range(6))
        for i, layer in enumerate(order.layers):
            assert all(bfs.layer_of[v] == i for v in layer)

    def test_layer_order_needs_plane_embedding(self):
        emb = gen_toroidal_grid(3, 3)
        with pytest.raises(InputError, match="planar embedding required"):
            layer_order(emb, bfs_structure(emb, 0))

    @given(st.integers(0, 10_000), st.integers(3, 40))
    def test_bfs_layering_valid(self, seed, n):
        emb = gen_random_planar(n, seed)
        bfs = bfs_structure(emb, 0)
        assert layering_is_valid(emb.graph, bfs.layer_of)
        for v in range(emb.n):
            if v != 0:
                assert bfs.layer_of[bfs.parent[v]] == bfs.layer_of[v] - 1


def test_induced_keeps_rotation_order(k4_plane):
    sub, vmap, emap = induced(k4_plane, [0, 1, 3])
    assert vmap == [0, 1, 3]
    assert [sub.graph.edges[e] for e in range(sub.m)] == [(0, 1), (0, 2), (1, 2)]
    assert face_trace(sub).count == 2
    assert emap == [0, 2, 4]
