"""O(delta^2)-queue layouts of planar embedded graphs.

The graph is subdivided into a well-layered graph (level edges become
``v x y w``, non-tree binding edges become ``v x y z w``), the group
partition of the subdivision is computed, restricted back to the original
vertices, and edges are sent to queues by their group offsets. The vertex
order is layer by layer, groups ascending within a layer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, InvariantError
from .generators import TightExample, gen_tight_example
from .graph import (
    BfsStructure,
    EdgeKind,
    EmbeddedGraph,
    Faces,
    Graph,
    assemble_bfs,
    bfs_structure,
    classify_edge,
    components,
    face_trace,
    induced,
    layer_order,
    orient,
)
from .layout import QueueLayout, max_rainbow, spans_nest, verify_layout
from .welllayered import (
    CheckFailure,
    LayerGroupPartition,
    build_cotree,
    check_well_layered,
    layer_groups,
    verify_lemma6,
)


def planar_bound(delta: int) -> int:
    return 12 * delta * delta + 16 * delta + 3


def effective_delta(emb: EmbeddedGraph) -> int:
    return max(2, emb.graph.max_degree)


@dataclass(frozen=True)
class SubdivisionRecord:
    """The well-layered subdivision of a planar graph.

    Original vertices keep their ids; subdivision vertices follow. ``paths[e]``
    lists the vertices replacing original edge ``e``: from its first endpoint
    for tree and level edges, from its upper (shallower) endpoint for
    non-tree binding edges.
    """

    emb: EmbeddedGraph
    bfs: BfsStructure
    n_original: int
    kinds: tuple[EdgeKind, ...]
    paths: tuple[tuple[int, ...], ...]
    path_edges: tuple[tuple[int, ...], ...]


def subdivide(emb: EmbeddedGraph, bfs: BfsStructure) -> SubdivisionRecord:
    g = emb.graph
    n = g.n
    layer = list(bfs.layer_of)
    parent_edge = list(bfs.parent_edge)
    edges: list[tuple[int, int]] = []
    extra_rotation: list[tuple[int, ...]] = []
    at_vertex: dict[tuple[int, int], int] = {}
    kinds, paths, path_edges = [], [], []

    def new_vertex(lvl: int) -> int:
        layer.append(lvl)
        parent_edge.append(-1)
        extra_rotation.append(())
        return n + len(extra_rotation) - 1

    def add_path(verts: list[int]) -> list[int]:
        ids = []
        for a, b in zip(verts, verts[1:]):
            ids.append(len(edges))
            edges.append((a, b))
        for i, x in enumerate(verts[1:-1], start=1):
            extra_rotation[x - n] = (ids[i - 1], ids[i])
        return ids

    for e, (u, v) in enumerate(g.edges):
        kind = classify_edge(g, bfs, e)
        kinds.append(kind)
        if kind is EdgeKind.BINDING_TREE:
            verts = [u, v]
            ids = add_path(verts)
            child = v if bfs.layer_of[v] > bfs.layer_of[u] else u
            parent_edge[child] = ids[0]
        elif kind is EdgeKind.LEVEL:
            lvl = bfs.layer_of[u] + 1
            x, y = new_vertex(lvl), new_vertex(lvl)
            verts = [u, x, y, v]
            ids = add_path(verts)
            parent_edge[x], parent_edge[y] = ids[0], ids[2]
        else:
            if bfs.layer_of[u] > bfs.layer_of[v]:
                u, v = v, u
            lvl = bfs.layer_of[u]
            x = new_vertex(lvl + 1)
            y, z = new_vertex(lvl + 2), new_vertex(lvl + 2)
            verts = [u, x, y, z, v]
            ids = add_path(verts)
            parent_edge[x], parent_edge[y], parent_edge[z] = ids[0], ids[1], ids[3]
        at_vertex[(verts[0], e)] = ids[0]
        at_vertex[(verts[-1], e)] = ids[-1]
        paths.append(tuple(verts))
        path_edges.append(tuple(ids))

    rotation = [tuple(at_vertex[(v, e)] for e in emb.rotation[v]) for v in range(n)]
    rotation.extend(extra_rotation)
    sub_emb = EmbeddedGraph(Graph(len(layer), tuple(edges)), tuple(rotation))
    root_start = None if bfs.root_start is None else at_vertex[(bfs.root, bfs.root_start)]
    sub_bfs = assemble_bfs(sub_emb, bfs.root, layer, parent_edge, root_start)
    return SubdivisionRecord(sub_emb, sub_bfs, n, tuple(kinds), tuple(paths), tuple(path_edges))


@dataclass(frozen=True)
class EdgeIndex:
    """Group bookkeeping for one original edge.

    ``a``/``b`` are the groups of the path endpoints (upper then lower for
    binding edges). ``alpha = b - delta * a`` for binding edges. For level
    edges ``offset = c - delta * a`` where ``c`` is the group of the first
    subdivision vertex. For non-tree binding edges ``eta = c - b`` and
    ``gamma = d - delta * b`` with ``c``, ``d`` the groups of ``x`` and ``y``.
    """

    kind: EdgeKind
    a: int
    b: int
    alpha: int | None = None
    offset: int | None = None
    eta: int | None = None
    gamma: int | None = None


@dataclass(frozen=True)
class PlanarPartition:
    """Layer groups of the original graph, pulled back from the subdivision."""

    delta: int
    layer_of: tuple[int, ...]
    group_of: tuple[int, ...]
    groups: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]
    edge_index: tuple[EdgeIndex, ...]
    sub: SubdivisionRecord
    sub_partition: LayerGroupPartition

    @property
    def sequence(self) -> tuple[int, ...]:
        return tuple(v for layer in self.groups for _, members in layer for v in members)


def pullback_partition(
    sub: SubdivisionRecord, delta: int, *, check: bool = False, faces: Faces | None = None
) -> PlanarPartition:
    emb, bfs = sub.emb, sub.bfs
    failure = check_well_layered(emb, bfs, delta)
    if failure is not None:
        if failure.clause == "children":
            raise InputError(f"delta={delta} is too small for this graph: {failure.message}")
        raise InvariantError("subdivision is not well-layered", witness=str(failure))
    if faces is None:
        faces = face_trace(emb)
    cotree = build_cotree(emb, bfs, delta, faces)
    order = layer_order(emb, bfs, faces)
    inner = layer_groups(emb, bfs, cotree, delta, order)
    if check:
        failure = verify_lemma6(inner, emb, bfs, delta)
        if failure is not None:
            raise InvariantError("well-layered partition check failed", witness=str(failure))

    n = sub.n_original
    grp = inner.group_of
    groups = []
    for layer in inner.groups:
        kept = []
        for a, members in layer:
            orig = tuple(v for v in members if v < n)
            if orig:
                kept.append((a, orig))
        if kept:
            groups.append(tuple(kept))
    index = []
    for e, kind in enumerate(sub.kinds):
        path = sub.paths[e]
        a, b = grp[path[0]], grp[path[-1]]
        if kind is EdgeKind.LEVEL:
            idx = EdgeIndex(kind, a, b, offset=grp[path[1]] - delta * a)
            if abs(a - b) > 1:
                raise InvariantError("level edge spans groups more than one apart", witness=(e, a, b))
            if a == b and not 0 <= idx.offset < 2 * delta:
                raise InvariantError("level edge offset out of range", witness=(e, idx.offset))
        elif kind is EdgeKind.BINDING_TREE:
            if bfs.layer_of[path[0]] > bfs.layer_of[path[-1]]:
                a, b = b, a
            idx = EdgeIndex(kind, a, b, alpha=b - delta * a)
            if not 0 <= idx.alpha < 2 * delta:
                raise InvariantError("tree edge group offset out of range", witness=(e, idx.alpha))
        else:
            c, d = grp[path[1]], grp[path[2]]
            idx = EdgeIndex(kind, a, b, alpha=b - delta * a, eta=c - b, gamma=d - delta * b)
            if not -1 <= idx.alpha <= 2 * delta:
                raise InvariantError("non-tree binding edge group offset out of range", witness=(e, idx.alpha))
            if idx.eta not in (-1, 0, 1) or not 0 <= idx.gamma < 2 * delta:
                raise InvariantError("hooked edge indices out of range", witness=(e, idx.eta, idx.gamma))
        index.append(idx)
    return PlanarPartition(
        delta=delta,
        layer_of=bfs.layer_of[:n],
        group_of=grp[:n],
        groups=tuple(groups),
        edge_index=tuple(index),
        sub=sub,
        sub_partition=inner,
    )


def queue_key(idx: EdgeIndex, delta: int) -> int:
    """Global queue slot of an edge before unused slots are dropped.

    Slots ``0 .. 2 delta - 1`` hold level edges inside one group, slot
    ``2 delta`` level edges between adjacent groups, then ``6 delta + 1``
    slots per binding offset ``alpha`` in ``-1 .. 2 delta``: one for tree
    edges followed by ``(eta, gamma)`` pairs.
    """
    if idx.kind is EdgeKind.LEVEL:
        return idx.offset if idx.a == idx.b else 2 * delta
    per_alpha = 6 * delta + 1
    base = 2 * delta + 1 + (idx.alpha + 1) * per_alpha
    if idx.kind is EdgeKind.BINDING_TREE:
        return base
    return base + 1 + (idx.eta + 1) * 2 * delta + idx.gamma


def assign_queues(part: PlanarPartition, g) -> QueueLayout:
    keys = [queue_key(idx, part.delta) for idx in part.edge_index]
    distinct = sorted(set(keys))
    slot = {k: i for i, k in enumerate(distinct)}
    layout = QueueLayout(part.sequence, tuple(slot[k] for k in keys), len(distinct))
    violation = verify_layout(g, layout)
    if violation is not None:
        raise InvariantError("planar layout failed verification", witness=violation)
    if layout.k > planar_bound(part.delta):
        raise InvariantError("planar layout exceeds its queue bound", witness=layout.k)
    return layout


def verify_pullback(part: PlanarPartition, g) -> CheckFailure | None:
    """Direct checks of the pulled-back partition.

    Covers the three group-offset ranges, the single queue for level edges
    between adjacent groups, the binding-edge assignment per pair of groups,
    and the level-edge assignment inside each group.
    """
    delta = part.delta
    rank = {v: r for r, v in enumerate(part.sequence)}
    for e, idx in enumerate(part.edge_index):
        if idx.kind is EdgeKind.LEVEL and abs(idx.a - idx.b) > 1:
            return CheckFailure("a", f"level edge {e} joins groups {idx.a} and {idx.b}", (e,))
        if idx.kind is EdgeKind.BINDING_TREE and not 0 <= idx.alpha <= 2 * delta - 1:
            return CheckFailure("b", f"tree edge {e} has offset {idx.alpha}", (e,))
        if idx.kind is EdgeKind.BINDING_NONTREE and not -1 <= idx.alpha <= 2 * delta:
            return CheckFailure("c", f"non-tree binding edge {e} has offset {idx.alpha}", (e,))

    cells: dict[tuple, list[tuple[int, tuple[int, int], int]]] = {}
    for e, idx in enumerate(part.edge_index):
        u, v = g.edges[e]
        span = tuple(sorted((rank[u], rank[v])))
        i = min(part.layer_of[u], part.layer_of[v])
        key = queue_key(idx, delta)
        if idx.kind is EdgeKind.LEVEL:
            if idx.a == idx.b:
                cells.setdefault(("f", i, idx.a), []).append((e, span, key))
            else:
                cells.setdefault(("d", i, min(idx.a, idx.b)), []).append((e, span, key))
        else:
            cells.setdefault(("e", i, idx.a, idx.b), []).append((e, span, key))
    limits = {"d": 1, "e": 6 * delta + 1, "f": 2 * delta}
    for cell in sorted(cells):
        members = cells[cell]
        clause = cell[0]
        if len({k for _, _, k in members}) > limits[clause]:
            return CheckFailure(clause, f"cell {cell[1:]} uses more than {limits[clause]} queues")
        for x, (e1, s1, k1) in enumerate(members):
            for e2, s2, k2 in members[x + 1 :]:
                if k1 == k2 and spans_nest(s1, s2):
                    return CheckFailure(clause, f"edges {e1} and {e2} nest in cell {cell[1:]}", (e1, e2))
    return None


@dataclass(frozen=True)
class ComponentRun:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    partition: PlanarPartition | None


@dataclass(frozen=True)
class PlanarRun:
    layout: QueueLayout
    delta: int
    components: tuple[ComponentRun, ...]

    def explain(self) -> list[dict]:
        """Per subdivision vertex: layer, height, m (decimal string), group."""
        out = []
        for c, comp in enumerate(self.components):
            part = comp.partition
            if part is None:
                out.append({"component": c, "vertices": [{"id": 0, "original": comp.vertices[0],
                                                          "layer": 0, "ell": 0, "m": "0", "g": 0}]})
                continue
            bfs, inner = part.sub.bfs, part.sub_partition
            rows = []
            for v in range(part.sub.emb.n):
                rows.append({
                    "id": v,
                    "original": comp.vertices[v] if v < part.sub.n_original else None,
                    "layer": bfs.layer_of[v],
                    "ell": bfs.ell(v),
                    "m": str(inner.m_of[v]),
                    "g": inner.group_of[v],
                })
            out.append({"component": c, "vertices": rows})
        return out


def plan_connected(
    emb: EmbeddedGraph, delta: int, root: int = 0, *, check: bool = False
) -> tuple[QueueLayout, PlanarPartition | None]:
    """Lay out one connected plane graph (signatures already +1)."""
    g = emb.graph
    if g.m == 0:
        return QueueLayout(tuple(range(g.n)), (), 0), None
    faces = face_trace(emb)
    if faces.genus != 0:
        raise InputError("planar embedding required")
    bfs = bfs_structure(emb, root, faces=faces)
    sub = subdivide(emb, bfs)
    part = pullback_partition(sub, delta, check=check)
    layout = assign_queues(part, g)
    if check:
        failure = verify_pullback(part, g)
        if failure is not None:
            raise InvariantError("pulled-back partition check failed", witness=str(failure))
    return layout, part


def layout_planar(
    emb: EmbeddedGraph, delta: int | None = None, *, check: bool = False, root: int | None = None
) -> PlanarRun:
    """Queue layout of a planar embedded graph with at most
    ``12 delta^2 + 16 delta + 3`` queues.

    Components are laid out separately and concatenated in order of their
    smallest vertex; ``root`` (default: smallest vertex) applies to its own
    component.
    """
    emb = orient(emb)
    g = emb.graph
    if delta is None:
        delta = effective_delta(emb)
    if delta < 2:
        raise InputError("delta must be at least 2")
    order: list[int] = []
    queues = [0] * g.m
    runs = []
    for comp in components(g):
        sub_emb, vmap, emap = induced(emb, comp)
        local_root = comp.index(root) if root is not None and root in comp else 0
        layout, part = plan_connected(sub_emb, delta, local_root, check=check)
        order.extend(vmap[v] for v in layout.order)
        for local_e, q in enumerate(layout.queues):
            queues[emap[local_e]] = q
        runs.append(ComponentRun(tuple(vmap), tuple(emap), part))
    k = max(queues, default=-1) + 1
    layout = QueueLayout(tuple(order), tuple(queues), k)
    violation = verify_layout(g, layout)
    if violation is not None:
        raise InvariantError("combined planar layout failed verification", witness=violation)
    return PlanarRun(layout, delta, tuple(runs))


@dataclass(frozen=True)
class TightnessWitness:
    example: TightExample
    run: PlanarRun
    rainbow: tuple[int, ...]


def tightness_witness(delta: int) -> TightnessWitness:
    """Run the pipeline on the lower-bound family and extract the matching rainbow."""
    example = gen_tight_example(delta)
    run = layout_planar(example.emb, delta)
    rainbow = max_rainbow(example.emb.graph, run.layout.order, list(example.matching))
    return TightnessWitness(example, run, rainbow)
