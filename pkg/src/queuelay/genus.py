"""Queue layouts of graphs embedded on surfaces of Euler genus ``g``.

A set ``Z`` with at most ``2g`` vertices per BFS layer is found by taking the
dual edges left over by a spanning tree of the dual graph and closing each of
them into a cycle through the BFS tree. Cutting the surface along those
cycles leaves a disc, so ``G - Z`` is planar. Its layout is reordered to
respect the layering and the ``Z`` vertices are prepended to their layers
with ``4g`` extra queues.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InputError, InvariantError
from .graph import BfsStructure, EmbeddedGraph, Faces, Graph, bfs_structure, face_trace, induced
from .layout import QueueLayout, compact, verify_layout
from .planar import effective_delta, layout_planar


def genus_bound(delta: int, genus: int) -> int:
    return 4 * genus + 36 * delta * delta + 48 * delta + 9


@dataclass(frozen=True)
class PlanarizingSet:
    """Vertices and edges to cut along, plus the dual edges closing the cycles."""

    genus: int
    z_vertices: tuple[int, ...]
    z_edges: tuple[int, ...]
    q_edges: tuple[int, ...]
    per_layer: tuple[tuple[int, ...], ...]

    @property
    def per_layer_counts(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.per_layer)

    def to_json(self, faces: Faces) -> dict:
        return {
            "Z_vertices": list(self.z_vertices),
            "Q": [[e, *faces.edge_faces[e]] for e in self.q_edges],
            "per_layer_counts": list(self.per_layer_counts),
        }


def dual_spanning_tree(emb: EmbeddedGraph, bfs: BfsStructure, faces: Faces) -> tuple[int, tuple[int, ...]]:
    """BFS tree of the dual restricted to non-tree edges.

    Starts at the outer face; neighbours are visited by (face id, edge id).
    Returns the root face and the non-tree edges that are not in the dual tree.
    """
    root_face = 0 if bfs.root_start is None else faces.face_of(bfs.root, bfs.root_start)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(faces.count)]
    nontree = [e for e in range(emb.m) if e not in bfs.tree_edges]
    for e in nontree:
        f1, f2 = faces.edge_faces[e]
        adj[f1].append((f2, e))
        adj[f2].append((f1, e))
    seen = [False] * faces.count
    seen[root_face] = True
    used: set[int] = set()
    queue = deque([root_face])
    while queue:
        f = queue.popleft()
        for h, e in sorted(adj[f]):
            if not seen[h]:
                seen[h] = True
                used.add(e)
                queue.append(h)
    if not all(seen):
        raise InvariantError("dual graph of the non-tree edges is disconnected")
    return root_face, tuple(e for e in nontree if e not in used)


def planarizing_set(emb: EmbeddedGraph, bfs: BfsStructure, faces: Faces | None = None) -> PlanarizingSet:
    g = emb.graph
    if faces is None:
        faces = face_trace(emb)
    _, q_edges = dual_spanning_tree(emb, bfs, faces)
    if len(q_edges) != faces.genus:
        raise InvariantError(
            "leftover dual edges do not match the Euler genus", witness={"Q": len(q_edges), "genus": faces.genus}
        )
    zv: set[int] = set()
    ze: set[int] = set(q_edges)
    for e in q_edges:
        for v in g.edges[e]:
            zv.add(v)
            while v != bfs.root:
                ze.add(bfs.parent_edge[v])
                v = bfs.parent[v]
                zv.add(v)
    if not q_edges:
        zv.clear()
    per_layer = tuple(tuple(v for v in layer if v in zv) for layer in bfs.layers)
    limit = 2 * faces.genus
    for j, members in enumerate(per_layer):
        if len(members) > limit:
            raise InvariantError(f"layer {j} holds {len(members)} vertices of Z, more than {limit}", witness=members)
    if zv and len(ze) != len(zv) - 1 + faces.genus:
        raise InvariantError("Z is not a tree plus the leftover edges", witness=(len(zv), len(ze)))
    return PlanarizingSet(faces.genus, tuple(sorted(zv)), tuple(sorted(ze)), q_edges, tuple(tuple(sorted(p)) for p in per_layer))


@dataclass(frozen=True)
class CutGraph:
    """The embedding obtained by cutting along ``Z``.

    ``origin[v]`` is the vertex of the input that ``v`` copies and
    ``edge_origin[e]`` the input edge that ``e`` copies.
    """

    emb: EmbeddedGraph
    origin: tuple[int, ...]
    edge_origin: tuple[int, ...]
    faces: Faces

    def copies(self, v: int) -> tuple[int, ...]:
        return tuple(x for x, o in enumerate(self.origin) if o == v)


def cut_graph(emb: EmbeddedGraph, zset: PlanarizingSet, faces: Faces | None = None) -> CutGraph:
    """Cut the surface along the edges of ``Z``.

    Every cut edge ``e = uw`` becomes two edges, one per side. The side that
    follows ``e`` in the rotation at ``u`` meets the side preceding ``e`` at
    ``w`` when the signature is +1 and the side following it when it is -1.
    A vertex with ``d`` incident cut edges splits into ``d`` copies, one per
    angular sector between consecutive cut edges.
    """
    g = emb.graph
    if faces is None:
        faces = face_trace(emb)
    cut = set(zset.z_edges)
    if not cut:
        return CutGraph(emb, tuple(range(g.n)), tuple(range(g.m)), faces)
    sig = emb.signature

    # Side 0 of a cut edge follows it at its first endpoint.
    def side(e: int, v: int, after: bool) -> int:
        u = g.edges[e][0]
        if v == u:
            return 0 if after else 1
        return (1 if after else 0) if sig[e] == 1 else (0 if after else 1)

    origin: list[int] = []
    # (vertex, edge, side) -> copy of vertex; side is None for uncut edges.
    owner: dict[tuple[int, int, int | None], int] = {}
    rotations: list[list[tuple[int, int | None]]] = []
    for v in range(g.n):
        rot = emb.rotation[v]
        marks = [i for i, e in enumerate(rot) if e in cut]
        if not marks:
            copy = len(origin)
            origin.append(v)
            rotations.append([(e, None) for e in rot])
            for e in rot:
                owner[(v, e, None)] = copy
            continue
        for k, i in enumerate(marks):
            j = marks[(k + 1) % len(marks)]
            stop = j if j > i else j + len(rot)
            copy = len(origin)
            origin.append(v)
            e_first = rot[i]
            sector = [(e_first, side(e_first, v, True))]
            for t in range(i + 1, stop):
                sector.append((rot[t % len(rot)], None))
            e_last = rot[j]
            sector.append((e_last, side(e_last, v, False)))
            rotations.append(sector)
            for e, s in sector:
                owner[(v, e, s)] = copy

    new_id: dict[tuple[int, int | None], int] = {}
    edges: list[tuple[int, int]] = []
    edge_origin: list[int] = []
    signature: list[int] = []
    for e, (u, w) in enumerate(g.edges):
        for s in ((0, 1) if e in cut else (None,)):
            new_id[(e, s)] = len(edges)
            edges.append((owner[(u, e, s)], owner[(w, e, s)]))
            edge_origin.append(e)
            signature.append(sig[e])
    rotation = tuple(tuple(new_id[key] for key in rot) for rot in rotations)
    try:
        cut_emb = EmbeddedGraph(Graph(len(origin), tuple(edges)), rotation, tuple(signature))
        cut_faces = face_trace(cut_emb)
    except InputError as exc:
        raise InvariantError(f"cutting produced an invalid embedding: {exc}") from exc
    p = len(zset.z_vertices)
    expected = (g.n + p - 2 + 2 * zset.genus, g.m + p - 1 + zset.genus)
    if cut_faces.genus != 0 or cut_faces.count != faces.count + 1:
        raise InvariantError(
            "cut graph is not a plane graph with one extra face",
            witness={"genus": cut_faces.genus, "faces": cut_faces.count, "input_faces": faces.count},
        )
    if (cut_emb.n, cut_emb.m) != expected:
        raise InvariantError("cut graph sizes disagree with the Euler bookkeeping", witness=(cut_emb.n, cut_emb.m))
    return CutGraph(cut_emb, tuple(origin), tuple(edge_origin), cut_faces)


def reorder_to_layering(g: Graph, layout: QueueLayout, layer_of: Sequence[int]) -> QueueLayout:
    """Make the order respect a layering at the cost of tripling the queues.

    Within each layer the old order is kept. Queue ``a`` splits into level
    edges, binding edges whose upper-layer endpoint came first, and binding
    edges whose lower-layer endpoint came first.
    """
    for e, (u, v) in enumerate(g.edges):
        if abs(layer_of[u] - layer_of[v]) > 1:
            raise InputError(f"edge {e} = {u}-{v} spans more than one layer")
    pos = layout.position
    order = sorted(layout.order, key=lambda v: (layer_of[v], pos[v]))
    keys = []
    for e, (u, v) in enumerate(g.edges):
        a = layout.queues[e]
        if layer_of[u] == layer_of[v]:
            keys.append(3 * a)
            continue
        if layer_of[u] > layer_of[v]:
            u, v = v, u
        keys.append(3 * a + (1 if pos[u] < pos[v] else 2))
    out = compact(order, keys)
    violation = verify_layout(g, out)
    if violation is not None:
        raise InvariantError("reordered layout failed verification", witness=violation)
    if out.k > 3 * layout.k:
        raise InvariantError("reordering used more than three times the queues", witness=(out.k, layout.k))
    return out


@dataclass(frozen=True)
class GenusRun:
    layout: QueueLayout
    delta: int
    genus: int
    zset: PlanarizingSet
    inner_k: int
    faces: Faces


InnerProcedure = Callable[[EmbeddedGraph], QueueLayout]


def layout_genus(
    emb: EmbeddedGraph,
    inner: InnerProcedure | None = None,
    *,
    delta: int | None = None,
    root: int = 0,
    check: bool = False,
) -> GenusRun:
    """Queue layout with at most ``3k + 4g`` queues, where ``k`` is the
    queue count of ``inner`` on the planar part."""
    g = emb.graph
    if not g.is_connected():
        raise InputError("connected required")
    if delta is None:
        delta = effective_delta(emb)
    if inner is None:
        def inner(h: EmbeddedGraph) -> QueueLayout:
            return layout_planar(h, delta, check=check).layout

    faces = face_trace(emb)
    bfs = bfs_structure(emb, root, faces=faces)
    zset = planarizing_set(emb, bfs, faces)
    cut = cut_graph(emb, zset, faces)

    in_z = set(zset.z_vertices)
    keep = [x for x, v in enumerate(cut.origin) if v not in in_z]
    h_emb, vmap, emap = induced(cut.emb, keep)
    h_vertices = [cut.origin[x] for x in vmap]
    h_layout = inner(h_emb)
    violation = verify_layout(h_emb.graph, h_layout)
    if violation is not None:
        raise InvariantError("inner layout failed verification", witness=violation)
    h_layers = [bfs.layer_of[v] for v in h_vertices]
    reordered = reorder_to_layering(h_emb.graph, h_layout, h_layers)

    # Assemble the final order and queues on the original vertex ids.
    h_rank = {h_vertices[x]: r for r, x in enumerate(reordered.order)}
    order = []
    for j, layer in enumerate(bfs.layers):
        order.extend(zset.per_layer[j])
        order.extend(sorted((v for v in layer if v not in in_z), key=h_rank.__getitem__))
    keys: list[int | None] = [None] * g.m
    for local_e, e in enumerate(emap):
        keys[cut.edge_origin[e]] = reordered.queues[local_e]
    index_in_layer = {v: i for members in zset.per_layer for i, v in enumerate(members)}
    base = reordered.k
    width = 2 * zset.genus
    for parity, offset in ((1, 0), (0, width)):
        for e, (u, v) in enumerate(g.edges):
            if keys[e] is not None:
                continue
            slots = [index_in_layer[x] for x in (u, v) if x in in_z and bfs.layer_of[x] % 2 == parity]
            if slots:
                keys[e] = base + offset + min(slots)
    if any(k is None for k in keys):
        raise InvariantError("an edge received no queue", witness=[e for e, k in enumerate(keys) if k is None])
    layout = compact(order, keys)
    violation = verify_layout(g, layout)
    if violation is not None:
        raise InvariantError("genus layout failed verification", witness=violation)
    if layout.k > 3 * h_layout.k + 4 * zset.genus:
        raise InvariantError("genus layout exceeds 3k + 4g", witness=(layout.k, h_layout.k, zset.genus))
    return GenusRun(layout, delta, zset.genus, zset, h_layout.k, faces)
