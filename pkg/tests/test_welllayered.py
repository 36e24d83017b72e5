from __future__ import annotations

import gmpy2
import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import embed_by_rotation
from queuelay.errors import InvariantError
from queuelay.generators import gen_grid, gen_well_layered
from queuelay.graph import bfs_structure, face_trace, layer_order
from queuelay.layout import verify_layout
from queuelay.welllayered import (
    build_cotree,
    check_well_layered,
    layer_groups,
    verify_lemma6,
    well_layered_layout,
)


def pipeline(emb, delta):
    faces = face_trace(emb)
    bfs = bfs_structure(emb, 0, faces=faces)
    cotree = build_cotree(emb, bfs, delta, faces)
    part = layer_groups(emb, bfs, cotree, delta, layer_order(emb, bfs, faces))
    return faces, bfs, cotree, part


def groups_oracle(emb, bfs, faces, root_face, delta):
    """m and g recomputed with networkx distances and gmpy2 integers."""
    dual = nx.Graph()
    dual.add_nodes_from(range(faces.count))
    for e, (u, _) in enumerate(emb.graph.edges):
        if e not in bfs.tree_edges:
            f1, f2 = faces.edge_faces[e]
            dual.add_edge(f1, f2, weight=gmpy2.mpz(delta) ** bfs.ell(u))
    assert nx.is_tree(dual)
    dist = nx.single_source_dijkstra_path_length(dual, root_face)
    m = {}
    for v in sorted(range(emb.n), key=lambda x: -bfs.layer_of[x]):
        if bfs.children[v]:
            m[v] = min(m[c] for c in bfs.children[v])
        else:
            m[v] = min(gmpy2.mpz(dist[f]) for f in faces.vertex_faces[v])
    g = {v: int(m[v] // gmpy2.mpz(delta) ** bfs.ell(v)) for v in m}
    return {v: int(x) for v, x in m.items()}, g


class TestCheck:
    def test_tree_is_well_layered(self):
        emb = gen_well_layered(12, 2, 0)
        assert check_well_layered(emb, bfs_structure(emb, 0), 3) is None

    def test_too_many_children(self):
        emb = embed_by_rotation(4, [(0, 1), (0, 2), (0, 3)], {0: [1, 2, 3], 1: [0], 2: [0], 3: [0]})
        failure = check_well_layered(emb, bfs_structure(emb, 0), 2)
        assert failure.clause == "children" and failure.witness == (0,)

    def test_grid_is_not_well_layered(self):
        emb = gen_grid(3, 3)
        failure = check_well_layered(emb, bfs_structure(emb, 0), 4)
        assert failure is not None and failure.clause in ("level", "leaf")

    def test_internal_level_endpoint(self):
        # Triangle 0-1-2 with a pendant at 1: edge 1-2 is level but 1 is not a leaf.
        emb = embed_by_rotation(
            4, [(0, 1), (0, 2), (1, 2), (1, 3)], {0: [1, 2], 1: [3, 2, 0], 2: [0, 1], 3: [1]}
        )
        failure = check_well_layered(emb, bfs_structure(emb, 0), 2)
        assert failure.clause == "leaf"


class TestCotree:
    def test_weights_are_powers_of_delta(self):
        emb = gen_well_layered(60, 3, 11)
        faces, bfs, cotree, _ = pipeline(emb, 3)
        for e, w in cotree.weight.items():
            assert w == 3 ** (bfs.t - bfs.layer_of[emb.graph.edges[e][0]])
        assert cotree.dist[cotree.root_face] == 0
        assert len(cotree.weight) == faces.count - 1

    def test_not_a_cotree(self):
        emb = gen_grid(3, 3)
        bfs = bfs_structure(emb, 0)
        # Pretend every edge is a tree edge so the dual has no edges left.
        with pytest.raises(InvariantError):
            fake = bfs.__class__(bfs.root, bfs.layer_of, bfs.parent, bfs.parent_edge, bfs.children, bfs.root_start)
            object.__setattr__(fake, "tree_edges", frozenset(range(emb.m)))
            build_cotree(emb, fake, 4)


class TestGroups:
    @given(st.integers(0, 10_000), st.integers(2, 80), st.integers(2, 4))
    def test_matches_independent_oracle(self, seed, n, delta):
        emb = gen_well_layered(n, delta, seed)
        faces, bfs, cotree, part = pipeline(emb, delta)
        m, g = groups_oracle(emb, bfs, faces, cotree.root_face, delta)
        assert part.m_of == tuple(m[v] for v in range(emb.n))
        assert part.group_of == tuple(g[v] for v in range(emb.n))

    @given(st.integers(0, 10_000), st.integers(2, 80), st.integers(2, 4))
    def test_lemma6_and_layout(self, seed, n, delta):
        emb = gen_well_layered(n, delta, seed)
        _, bfs, _, part = pipeline(emb, delta)
        assert verify_lemma6(part, emb, bfs, delta) is None
        layout = well_layered_layout(part, emb, bfs, delta)
        assert verify_layout(emb.graph, layout) is None
        assert layout.k <= 2 * delta + 1

    def test_big_weights_stay_exact(self):
        # Root with two matched leaves and a long path: the level edge sits
        # 69 layers above the bottom, so its weight is 2**69.
        depth = 70
        edges = [(0, 1), (0, 2), (0, 3)] + [(2 + i, 3 + i) for i in range(1, depth)] + [(1, 2)]
        nbrs = {0: [1, 2, 3], 1: [0, 2], 2: [1, 0]}
        for v in range(3, depth + 3):
            nbrs[v] = [v - 1 if v > 3 else 0] + ([v + 1] if v < depth + 2 else [])
        emb = embed_by_rotation(depth + 3, edges, nbrs)
        faces, bfs, cotree, part = pipeline(emb, 2)
        assert sorted(cotree.dist) == [0, 2**69]
        m, g = groups_oracle(emb, bfs, faces, cotree.root_face, 2)
        assert part.m_of == tuple(m[v] for v in range(emb.n))
        assert part.group_of == tuple(g[v] for v in range(emb.n))
        assert verify_lemma6(part, emb, bfs, 2) is None

    def test_sequence_is_layers_then_groups(self):
        emb = gen_well_layered(50, 3, 4)
        _, bfs, _, part = pipeline(emb, 3)
        seq = part.sequence
        keys = [(bfs.layer_of[v], part.group_of[v]) for v in seq]
        assert keys == sorted(keys) and sorted(seq) == list(range(emb.n))
