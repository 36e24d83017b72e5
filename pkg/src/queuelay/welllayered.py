"""Layer-group partitions of well-layered planar graphs.

A planar graph is well-layered with respect to a BFS tree when every
non-tree edge joins two tree leaves of degree 2 lying in the same layer.
For such graphs the faces are weighted through the dual co-tree: a non-tree
edge at height ``ell`` above the deepest layer costs ``delta ** ell``. The
minimum co-tree distance of the faces around a subtree, divided by the same
power of ``delta``, is the vertex's group index.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import InvariantError
from .graph import BfsStructure, EmbeddedGraph, Faces, LayerOrder, face_trace, layer_order
from .layout import QueueLayout, compact, spans_cross, spans_nest, verify_layout


@dataclass(frozen=True)
class CheckFailure:
    """First violated clause of a structural check, with witnesses."""

    clause: str
    message: str
    witness: tuple = ()

    def __str__(self) -> str:
        return f"({self.clause}) {self.message}"


def check_well_layered(emb: EmbeddedGraph, bfs: BfsStructure, delta: int) -> CheckFailure | None:
    g = emb.graph
    for v in range(g.n):
        if len(bfs.children[v]) > delta:
            return CheckFailure("children", f"vertex {v} has {len(bfs.children[v])} children, more than {delta}", (v,))
    for e, (u, v) in enumerate(g.edges):
        if e in bfs.tree_edges:
            continue
        if bfs.layer_of[u] != bfs.layer_of[v]:
            return CheckFailure("level", f"non-tree edge {e} = {u}-{v} is not a level edge", (e,))
        for x in (u, v):
            if not bfs.is_leaf(x) or g.degree(x) != 2:
                return CheckFailure(
                    "leaf", f"non-tree edge {e} = {u}-{v} has endpoint {x} that is not a degree-2 leaf", (e, x)
                )
    return None


@dataclass(frozen=True)
class WeightedCotree:
    """Dual spanning tree formed by the non-tree edges, with exact distances."""

    faces: Faces
    root_face: int
    weight: dict[int, int]
    dist: tuple[int, ...]
    parent_edge: tuple[int, ...]


def build_cotree(emb: EmbeddedGraph, bfs: BfsStructure, delta: int, faces: Faces | None = None) -> WeightedCotree:
    g = emb.graph
    if faces is None:
        faces = face_trace(emb)
    root_face = 0 if bfs.root_start is None else faces.face_of(bfs.root, bfs.root_start)
    weight = {}
    adj: list[list[tuple[int, int]]] = [[] for _ in range(faces.count)]
    for e, (u, _) in enumerate(g.edges):
        if e in bfs.tree_edges:
            continue
        weight[e] = delta ** bfs.ell(u)
        f1, f2 = faces.edge_faces[e]
        adj[f1].append((f2, e))
        adj[f2].append((f1, e))
    if len(weight) != faces.count - 1:
        raise InvariantError(
            "co-tree does not span the dual", witness={"faces": faces.count, "cotree_edges": len(weight)}
        )
    dist = [-1] * faces.count
    parent = [-1] * faces.count
    dist[root_face] = 0
    queue = deque([root_face])
    while queue:
        f = queue.popleft()
        for h, e in sorted(adj[f]):
            if dist[h] < 0:
                dist[h] = dist[f] + weight[e]
                parent[h] = e
                queue.append(h)
    if min(dist) < 0:
        raise InvariantError("co-tree is disconnected", witness=[f for f, d in enumerate(dist) if d < 0])
    return WeightedCotree(faces, root_face, weight, tuple(dist), tuple(parent))


@dataclass(frozen=True)
class LayerGroupPartition:
    """Group index per vertex plus the ordered groups of every layer."""

    m_of: tuple[int, ...]
    group_of: tuple[int, ...]
    groups: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]
    order: LayerOrder

    @cached_property
    def sequence(self) -> tuple[int, ...]:
        """All vertices: layers ascending, groups ascending, group order within."""
        return tuple(v for layer in self.groups for _, members in layer for v in members)

    def group(self, i: int, a: int) -> tuple[int, ...]:
        for b, members in self.groups[i]:
            if b == a:
                return members
        return ()


def layer_groups(
    emb: EmbeddedGraph, bfs: BfsStructure, cotree: WeightedCotree, delta: int, order: LayerOrder | None = None
) -> LayerGroupPartition:
    if order is None:
        order = layer_order(emb, bfs, cotree.faces)
    n = emb.n
    m_of = [0] * n
    for layer in reversed(bfs.layers):
        for v in layer:
            kids = bfs.children[v]
            if kids:
                m_of[v] = min(m_of[x] for x in kids)
            else:
                m_of[v] = min(cotree.dist[f] for f in cotree.faces.vertex_faces.get(v, (cotree.root_face,)))
    group_of = [m_of[v] // delta ** bfs.ell(v) for v in range(n)]
    groups = []
    for seq in order.layers:
        by_group: dict[int, list[int]] = {}
        for v in seq:
            by_group.setdefault(group_of[v], []).append(v)
        groups.append(tuple((a, tuple(by_group[a])) for a in sorted(by_group)))
    for v in range(n):
        for x in bfs.children[v]:
            if m_of[v] > m_of[x]:
                raise InvariantError("m decreases along a tree edge", witness=(v, x))
    return LayerGroupPartition(tuple(m_of), tuple(group_of), tuple(groups), order)


def verify_lemma6(
    part: LayerGroupPartition, emb: EmbeddedGraph, bfs: BfsStructure, delta: int
) -> CheckFailure | None:
    """Check the four partition properties directly."""
    g = emb.graph
    grp = part.group_of
    for e, (u, v) in enumerate(g.edges):
        if e not in bfs.tree_edges and grp[u] != grp[v]:
            return CheckFailure("a", f"non-tree edge {e} joins groups {grp[u]} and {grp[v]}", (e,))
    for e in sorted(bfs.tree_edges):
        u, v = g.edges[e]
        if bfs.layer_of[u] > bfs.layer_of[v]:
            u, v = v, u
        alpha = grp[v] - delta * grp[u]
        if not 0 <= alpha <= 2 * delta - 1:
            return CheckFailure("b", f"tree edge {e} has group offset {alpha}", (e,))

    rank = part.order.rank
    cells: dict[tuple, list[int]] = {}
    for e, (u, v) in enumerate(g.edges):
        lu, lv = bfs.layer_of[u], bfs.layer_of[v]
        if lu == lv:
            if grp[u] == grp[v]:
                cells.setdefault(("in", lu, grp[u]), []).append(e)
        else:
            if lu > lv:
                u, v, lu, lv = v, u, lv, lu
            cells.setdefault(("between", lu, grp[u], grp[v]), []).append(e)
    for key in sorted(cells):
        members = cells[key]
        if key[0] == "in":
            spans = {}
            for e in members:
                a, b = rank[g.edges[e][0]], rank[g.edges[e][1]]
                spans[e] = (min(a, b), max(a, b))
            for i, e1 in enumerate(members):
                for e2 in members[i + 1 :]:
                    if spans_nest(spans[e1], spans[e2]) or spans_cross(spans[e1], spans[e2]):
                        return CheckFailure("c", f"edges {e1} and {e2} cross or nest in group {key[1:]}", (e1, e2))
        else:
            # In the concatenated order every upper endpoint precedes every lower one.
            spans = {}
            for e in members:
                u, v = g.edges[e]
                if bfs.layer_of[u] > bfs.layer_of[v]:
                    u, v = v, u
                spans[e] = (rank[u], len(emb.rotation) + rank[v])
            for i, e1 in enumerate(members):
                for e2 in members[i + 1 :]:
                    if spans_nest(spans[e1], spans[e2]):
                        return CheckFailure("d", f"edges {e1} and {e2} nest between groups {key[1:]}", (e1, e2))
    return None


def well_layered_layout(
    part: LayerGroupPartition, emb: EmbeddedGraph, bfs: BfsStructure, delta: int
) -> QueueLayout:
    """Layout with one queue for level edges and ``2 * delta`` for tree edges."""
    g = emb.graph
    keys = []
    for u, v in g.edges:
        if bfs.layer_of[u] == bfs.layer_of[v]:
            keys.append(-1)
            continue
        if bfs.layer_of[u] > bfs.layer_of[v]:
            u, v = v, u
        keys.append(part.group_of[v] - delta * part.group_of[u])
    layout = compact(part.sequence, keys)
    violation = verify_layout(g, layout)
    if violation is not None:
        raise InvariantError("well-layered layout failed verification", witness=violation)
    if layout.k > 2 * delta + 1:
        raise InvariantError("well-layered layout exceeds 2*delta + 1 queues", witness=layout.k)
    return layout
