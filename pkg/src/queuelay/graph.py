"""Graphs, rotation-system embeddings, face tracing and BFS structures.

Vertices are ``0..n-1`` and edges are identified by their position in
``Graph.edges``. A *dart* is an edge traversed away from one of its
endpoints; dart ids are ``2 * e + side`` where ``side`` is 0 when leaving
``edges[e][0]``. Rotations list the incident edge ids of a vertex in cyclic
order; signatures of ``-1`` mark edges whose traversal flips the local
orientation (non-orientable embeddings).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError, InvariantError

Edge = tuple[int, int]
# Face-walk state: (vertex, edge about to be traversed, local orientation).
State = tuple[int, int, int]


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph with stable edge ids."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        seen: set[Edge] = set()
        for e, (u, v) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge {e} = {u}-{v} has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise InputError(f"edge {e} is a loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InputError(f"edge {e} = {u}-{v} duplicates an earlier edge")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append(e)
            inc[v].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def neighbours(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.other(e, v) for e in self.incident[v]) for v in range(self.n))

    def degree(self, v: int) -> int:
        return len(self.incident[v])

    @cached_property
    def max_degree(self) -> int:
        return max((len(i) for i in self.incident), default=0)

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        return b if a == v else a

    def is_connected(self) -> bool:
        return self.n > 0 and len(components(self)) == 1


def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    seen = [False] * g.n
    out: list[list[int]] = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.neighbours[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


@dataclass(frozen=True)
class EmbeddedGraph:
    """A graph together with a rotation system and edge signatures."""

    graph: Graph
    rotation: tuple[tuple[int, ...], ...]
    signature: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        g = self.graph
        rotation = tuple(tuple(int(e) for e in rot) for rot in self.rotation)
        object.__setattr__(self, "rotation", rotation)
        if self.signature is None:
            object.__setattr__(self, "signature", (1,) * g.m)
        else:
            object.__setattr__(self, "signature", tuple(int(s) for s in self.signature))
        if len(rotation) != g.n:
            raise InputError(f"invalid embedding: rotation has {len(rotation)} entries for {g.n} vertices")
        if len(self.signature) != g.m:
            raise InputError(f"invalid embedding: signature has {len(self.signature)} entries for {g.m} edges")
        for e, s in enumerate(self.signature):
            if s not in (1, -1):
                raise InputError(f"invalid embedding: signature of edge {e} is {s}, expected +1 or -1")
        for v, rot in enumerate(rotation):
            if sorted(rot) != sorted(g.incident[v]):
                raise InputError(
                    f"invalid embedding: rotation at vertex {v} is {list(rot)}, "
                    f"incident edges are {list(g.incident[v])}"
                )

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @cached_property
    def _slot(self) -> tuple[dict[int, int], ...]:
        return tuple({e: i for i, e in enumerate(rot)} for rot in self.rotation)

    def succ(self, v: int, e: int) -> int:
        rot = self.rotation[v]
        return rot[(self._slot[v][e] + 1) % len(rot)]

    def pred(self, v: int, e: int) -> int:
        rot = self.rotation[v]
        return rot[(self._slot[v][e] - 1) % len(rot)]

    def rotation_from(self, v: int, e: int, *, inclusive: bool) -> tuple[int, ...]:
        """The rotation at ``v`` read cyclically starting at (or just after) ``e``."""
        rot = self.rotation[v]
        i = self._slot[v][e]
        if inclusive:
            return rot[i:] + rot[:i]
        return rot[i + 1 :] + rot[:i]

    @property
    def orientable_signature(self) -> bool:
        return all(s == 1 for s in self.signature)


def dart_id(g: Graph, v: int, e: int) -> int:
    return 2 * e + (0 if g.edges[e][0] == v else 1)


@dataclass(frozen=True)
class Faces:
    """Result of face tracing: closed walks plus the Euler genus."""

    walks: tuple[tuple[tuple[int, int], ...], ...]
    genus: int
    state_face: dict[State, int]

    @property
    def count(self) -> int:
        return len(self.walks)

    @cached_property
    def edge_faces(self) -> dict[int, tuple[int, int]]:
        """The two faces on the sides of each edge, in order of occurrence."""
        acc: dict[int, list[int]] = {}
        for f, walk in enumerate(self.walks):
            for _, e in walk:
                acc.setdefault(e, []).append(f)
        return {e: (fs[0], fs[1]) for e, fs in acc.items()}

    @cached_property
    def vertex_faces(self) -> dict[int, tuple[int, ...]]:
        acc: dict[int, set[int]] = {}
        for f, walk in enumerate(self.walks):
            for v, _ in walk:
                acc.setdefault(v, set()).add(f)
        return {v: tuple(sorted(fs)) for v, fs in acc.items()}

    def face_of(self, v: int, e: int) -> int:
        """Face containing the dart leaving ``v`` along ``e`` (positive orientation)."""
        return self.state_face[(v, e, 1)]


def face_trace(emb: EmbeddedGraph) -> Faces:
    """Trace the faces of a connected embedded graph.

    Each face is reported once as a list of ``(vertex, edge)`` steps; the
    reverse traversal of the same face is recognised and skipped. Faces are
    numbered in discovery order over states sorted by (orientation, dart id).
    """
    g = emb.graph
    if not g.is_connected():
        raise InputError("connected required")
    if g.m == 0:
        return Faces(walks=((),), genus=0, state_face={})

    sig = emb.signature

    def step(state: State) -> State:
        v, e, o = state
        w = g.other(e, v)
        o2 = o * sig[e]
        return (w, emb.succ(w, e) if o2 > 0 else emb.pred(w, e), o2)

    def mirror(state: State) -> State:
        v, e, o = state
        return (g.other(e, v), e, -o * sig[e])

    state_face: dict[State, int] = {}
    walks: list[tuple[tuple[int, int], ...]] = []
    for o in (1, -1):
        for e, (a, b) in enumerate(g.edges):
            for v in (a, b):
                start = (v, e, o)
                if start in state_face:
                    continue
                fid = len(walks)
                walk: list[tuple[int, int]] = []
                s = start
                while True:
                    if s in state_face:
                        raise InvariantError("face tracing revisited a state", witness=s)
                    state_face[s] = fid
                    walk.append((s[0], s[1]))
                    s = step(s)
                    if s == start:
                        break
                walks.append(tuple(walk))
                # Mark the reverse traversal of this face as belonging to it.
                s = start
                while True:
                    ms = mirror(s)
                    if ms in state_face and state_face[ms] != fid:
                        raise InputError("invalid embedding: face walks do not pair up")
                    state_face[ms] = fid
                    s = step(s)
                    if s == start:
                        break
    if sum(len(w) for w in walks) != 2 * g.m:
        raise InputError("invalid embedding: face walks do not cover every edge side exactly once")
    genus = 2 - g.n + g.m - len(walks)
    if genus < 0:
        raise InvariantError("negative Euler genus", witness=genus)
    return Faces(walks=tuple(walks), genus=genus, state_face=state_face)


def orient(emb: EmbeddedGraph) -> EmbeddedGraph:
    """Return an equivalent embedding whose signatures are all +1.

    Vertices are switched (rotation reversed, incident signatures negated)
    along a spanning forest; raises if the embedding is non-orientable.
    """
    if emb.orientable_signature:
        return emb
    g = emb.graph
    flip = [0] * g.n
    for comp in components(g):
        flip[comp[0]] = 1
        queue = deque([comp[0]])
        while queue:
            v = queue.popleft()
            for e in g.incident[v]:
                w = g.other(e, v)
                if flip[w] == 0:
                    flip[w] = flip[v] * emb.signature[e]
                    queue.append(w)
    sig = []
    for e, (u, v) in enumerate(g.edges):
        s = emb.signature[e] * flip[u] * flip[v]
        if s != 1:
            raise InputError(f"non-orientable embedding (edge {e} closes a one-sided cycle)")
        sig.append(s)
    rotation = tuple(rot if flip[v] == 1 else tuple(reversed(rot)) for v, rot in enumerate(emb.rotation))
    return EmbeddedGraph(g, rotation, tuple(sig))


def induced(emb: EmbeddedGraph, vertices: Sequence[int]) -> tuple[EmbeddedGraph, list[int], list[int]]:
    """Restrict an embedding to ``vertices``.

    Returns the sub-embedding on vertices ``0..len(vertices)-1`` together with
    the new-to-old vertex map and the new-to-old edge map.
    """
    g = emb.graph
    new_of = {v: i for i, v in enumerate(vertices)}
    edge_map: list[int] = []
    new_edge: dict[int, int] = {}
    for e, (u, v) in enumerate(g.edges):
        if u in new_of and v in new_of:
            new_edge[e] = len(edge_map)
            edge_map.append(e)
    sub = Graph(len(vertices), tuple((new_of[g.edges[e][0]], new_of[g.edges[e][1]]) for e in edge_map))
    rotation = tuple(tuple(new_edge[e] for e in emb.rotation[v] if e in new_edge) for v in vertices)
    signature = tuple(emb.signature[e] for e in edge_map)
    return EmbeddedGraph(sub, rotation, signature), list(vertices), edge_map


class EdgeKind(str, Enum):
    LEVEL = "level"
    BINDING_TREE = "binding-tree"
    BINDING_NONTREE = "binding-nontree"


@dataclass(frozen=True)
class BfsStructure:
    """A BFS layering with its spanning tree and embedding-ordered children."""

    root: int
    layer_of: tuple[int, ...]
    parent: tuple[int, ...]
    parent_edge: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    root_start: int | None

    @cached_property
    def layers(self) -> tuple[tuple[int, ...], ...]:
        acc: list[list[int]] = [[] for _ in range(self.t + 1)]
        for v, i in enumerate(self.layer_of):
            acc[i].append(v)
        return tuple(tuple(x) for x in acc)

    @cached_property
    def t(self) -> int:
        return max(self.layer_of)

    @cached_property
    def tree_edges(self) -> frozenset[int]:
        return frozenset(e for e in self.parent_edge if e >= 0)

    def ell(self, v: int) -> int:
        """Height above the deepest layer: ``t - dist(root, v)``."""
        return self.t - self.layer_of[v]

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]


def assemble_bfs(
    emb: EmbeddedGraph,
    root: int,
    layer_of: Sequence[int],
    parent_edge: Sequence[int],
    root_start: int | None,
) -> BfsStructure:
    """Build a :class:`BfsStructure` from an explicit layering and tree.

    Children of a vertex are listed in rotation order starting just after its
    parent edge; at the root, starting at ``root_start``.
    """
    g = emb.graph
    parent = [-1] * g.n
    for v, e in enumerate(parent_edge):
        if v == root:
            if e != -1:
                raise InvariantError("root has a parent edge", witness=v)
            continue
        if e < 0:
            raise InvariantError("non-root vertex without parent edge", witness=v)
        p = g.other(e, v)
        if v not in g.edges[e] or layer_of[p] != layer_of[v] - 1:
            raise InvariantError("parent edge does not reach the previous layer", witness=(v, e))
        parent[v] = p
    if layer_of[root] != 0:
        raise InvariantError("root is not in layer 0", witness=root)
    for e, (u, v) in enumerate(g.edges):
        if abs(layer_of[u] - layer_of[v]) > 1:
            raise InvariantError("edge spans more than one layer", witness=e)

    children: list[tuple[int, ...]] = []
    for v in range(g.n):
        if not g.incident[v]:
            children.append(())
            continue
        if v == root:
            if root_start is None:
                raise InvariantError("root_start required when the root has edges")
            seq = emb.rotation_from(v, root_start, inclusive=True)
        else:
            seq = emb.rotation_from(v, parent_edge[v], inclusive=False)
        kids = []
        for e in seq:
            w = g.other(e, v)
            if parent_edge[w] == e and w != root:
                kids.append(w)
        children.append(tuple(kids))
    return BfsStructure(
        root=root,
        layer_of=tuple(layer_of),
        parent=tuple(parent),
        parent_edge=tuple(parent_edge),
        children=tuple(children),
        root_start=root_start,
    )


def choose_root_start(emb: EmbeddedGraph, root: int, faces: Faces | None = None) -> int | None:
    """Anchor the outer face at ``root``.

    Among faces through the root, take the one containing the lowest dart id;
    the root's rotation is then read from the smallest edge by which that face
    leaves the root.
    """
    g = emb.graph
    if not g.incident[root]:
        return None
    if faces is None:
        faces = face_trace(emb)
    best: tuple[int, int] | None = None
    for walk in faces.walks:
        at_root = [e for v, e in walk if v == root]
        if not at_root:
            continue
        key = min(dart_id(g, v, e) for v, e in walk)
        if best is None or key < best[0]:
            best = (key, min(at_root))
    assert best is not None
    return best[1]


def bfs_structure(
    emb: EmbeddedGraph, root: int = 0, root_start: int | None = None, faces: Faces | None = None
) -> BfsStructure:
    """BFS layering from ``root`` with the canonical parent tie-break.

    A non-root vertex takes as parent the previous-layer neighbour whose edge
    comes first in its rotation read from its lowest incident edge id.
    """
    g = emb.graph
    if not 0 <= root < g.n:
        raise InputError(f"root {root} is not a vertex")
    if not g.is_connected():
        raise InputError("connected required")
    dist = [-1] * g.n
    dist[root] = 0
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in g.neighbours[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    parent_edge = [-1] * g.n
    for v in range(g.n):
        if v == root:
            continue
        rot = emb.rotation[v]
        start = rot.index(min(rot))
        for e in rot[start:] + rot[:start]:
            if dist[g.other(e, v)] == dist[v] - 1:
                parent_edge[v] = e
                break
    if root_start is None:
        root_start = choose_root_start(emb, root, faces)
    return assemble_bfs(emb, root, dist, parent_edge, root_start)


def classify_edge(g: Graph, bfs: BfsStructure, e: int) -> EdgeKind:
    u, v = g.edges[e]
    if bfs.layer_of[u] == bfs.layer_of[v]:
        return EdgeKind.LEVEL
    if e in bfs.tree_edges:
        return EdgeKind.BINDING_TREE
    return EdgeKind.BINDING_NONTREE


@dataclass(frozen=True)
class LayerOrder:
    """Per-layer vertex sequences (the circular order on each layer circle)."""

    layers: tuple[tuple[int, ...], ...]

    @cached_property
    def rank(self) -> dict[int, int]:
        return {v: i for layer in self.layers for i, v in enumerate(layer)}


def tree_preorder(bfs: BfsStructure) -> list[int]:
    out: list[int] = []
    stack = [bfs.root]
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(reversed(bfs.children[v]))
    return out


def layer_order(emb: EmbeddedGraph, bfs: BfsStructure, faces: Faces | None = None) -> LayerOrder:
    """Order every layer by the embedding-respecting preorder of the BFS tree."""
    if faces is None:
        faces = face_trace(emb)
    if faces.genus != 0 or not emb.orientable_signature:
        raise InputError("planar embedding required")
    acc: list[list[int]] = [[] for _ in range(bfs.t + 1)]
    for v in tree_preorder(bfs):
        acc[bfs.layer_of[v]].append(v)
    return LayerOrder(tuple(tuple(x) for x in acc))


def layering_is_valid(g: Graph, layer_of: Iterable[int]) -> bool:
    lo = list(layer_of)
    return all(abs(lo[u] - lo[v]) <= 1 for u, v in g.edges)
