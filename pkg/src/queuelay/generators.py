"""Deterministic instance families with rotation systems.

Random families draw from :class:`SplitMix64` (constants below) so that a
seed yields the same instance on every platform and Python version.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log2
from typing import Iterator

from .errors import InputError, InvariantError
from .graph import EmbeddedGraph, Graph, face_trace

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator (Steele, Lea and Flood)."""

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next()
            if x < limit:
                return x % bound

    def chance(self, num: int, den: int) -> bool:
        return self.below(den) < num

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)


def _embedded(n: int, edges: list[tuple[int, int]], rotation: list[list[int]]) -> EmbeddedGraph:
    return EmbeddedGraph(Graph(n, tuple(edges)), tuple(tuple(r) for r in rotation))


def _angle_rotation(n: int, edges, nbr_dir) -> list[list[int]]:
    """Rotation from a per-(vertex, neighbour) direction rank (counter-clockwise)."""
    inc: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(edges):
        inc[u].append((nbr_dir(u, v), e))
        inc[v].append((nbr_dir(v, u), e))
    return [[e for _, e in sorted(x)] for x in inc]


def gen_grid(rows: int, cols: int) -> EmbeddedGraph:
    """Planar ``rows x cols`` grid; vertex ``r * cols + c``."""
    if rows < 1 or cols < 1:
        raise InputError("grid dimensions must be positive")
    vid = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))

    def direction(u: int, v: int) -> int:
        (ru, cu), (rv, cv) = divmod(u, cols), divmod(v, cols)
        return {(0, 1): 0, (1, 0): 1, (0, -1): 2, (-1, 0): 3}[(rv - ru, cv - cu)]

    return _embedded(rows * cols, edges, _angle_rotation(rows * cols, edges, direction))


def gen_toroidal_grid(rows: int, cols: int) -> EmbeddedGraph:
    """``C_rows x C_cols`` embedded on the torus (Euler genus 2)."""
    if rows < 3 or cols < 3:
        raise InputError("toroidal grid needs rows, cols >= 3")
    vid = lambda r, c: (r % rows) * cols + (c % cols)  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            edges.append((vid(r, c), vid(r, c + 1)))
            edges.append((vid(r, c), vid(r + 1, c)))
    rotation: list[list[int]] = [[] for _ in range(rows * cols)]
    slots: dict[tuple[int, int], int] = {}
    for e, (u, v) in enumerate(edges):
        # Edge 2k leaves its first endpoint eastwards, edge 2k+1 northwards.
        slots[(u, e)] = 0 if e % 2 == 0 else 1
        slots[(v, e)] = 2 if e % 2 == 0 else 3
    for (v, e), _ in sorted(slots.items(), key=lambda kv: (kv[0][0], kv[1])):
        rotation[v].append(e)
    return _embedded(rows * cols, edges, rotation)


def gen_k5_torus() -> EmbeddedGraph:
    """K5 on the torus: vertex ``i`` sees ``i+1, i+2, i+4, i+3`` (mod 5) in order."""
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    eid = {frozenset(e): k for k, e in enumerate(edges)}
    rotation = [[eid[frozenset((v, (v + o) % 5))] for o in (1, 2, 4, 3)] for v in range(5)]
    return _embedded(5, edges, rotation)


@dataclass(frozen=True)
class TightExample:
    emb: EmbeddedGraph
    labels: dict[str, int]
    matching: tuple[int, ...]


def gen_tight_example(delta: int) -> TightExample:
    """Binary tree with ``2 delta^2`` leaves at equal depth and a nested matching.

    Leaves left to right are ``v_{1,1} .. v_{delta,delta}`` then
    ``w_{delta,delta} .. w_{1,1}``; each ``v`` leaf hangs below an extra
    subdivision vertex and ``v_{i,j} w_{i,j}`` is added for all ``i, j``.
    Vertex 0 is the root and edge 0 leaves it towards the ``v`` half, so the
    canonical outer face is the one above the tree.
    """
    if delta < 2:
        raise InputError("tight example needs delta >= 2")
    half = delta * delta
    height = ceil(log2(2 * half))
    edges: list[tuple[int, int]] = []
    rotation: list[list[int]] = [[]]
    labels: dict[str, int] = {}
    leaves: list[int] = []

    def new_child(parent: int) -> int:
        v = len(rotation)
        rotation.append([])
        e = len(edges)
        edges.append((parent, v))
        rotation[parent].append(e)
        rotation[v].append(e)
        return v

    def grow(v: int, depth: int, count: int) -> None:
        if depth == height:
            leaves.append(v)
            return
        if count == 1:
            grow(new_child(v), depth + 1, 1)
            return
        left = (count + 1) // 2
        grow(new_child(v), depth + 1, left)
        grow(new_child(v), depth + 1, count - left)

    grow(new_child(0), 1, half)
    grow(new_child(0), 1, half)
    for k, s in enumerate(leaves[:half]):
        i, j = divmod(k, delta)
        v = new_child(s)
        labels[f"s_{i + 1}_{j + 1}"] = s
        labels[f"v_{i + 1}_{j + 1}"] = v
    for k, w in enumerate(leaves[half:]):
        i, j = divmod(half - 1 - k, delta)
        labels[f"w_{i + 1}_{j + 1}"] = w
    matching = []
    for i in range(1, delta + 1):
        for j in range(1, delta + 1):
            v, w = labels[f"v_{i}_{j}"], labels[f"w_{i}_{j}"]
            e = len(edges)
            edges.append((v, w))
            rotation[v].append(e)
            rotation[w].append(e)
            matching.append(e)
    emb = _embedded(len(rotation), edges, rotation)
    if face_trace(emb).genus != 0:
        raise InvariantError("tight example is not planar")
    return TightExample(emb, labels, tuple(matching))


def gen_well_layered(n: int, delta: int, seed: int) -> EmbeddedGraph:
    """Random plane tree (at most ``delta`` children each) plus a non-crossing
    matching between equal-depth leaves.

    Matched pairs are formed with a stack over the leaves in preorder, which
    keeps the matching non-crossing in the cyclic leaf order and hence
    planar.
    """
    if n < 2:
        raise InputError("well-layered generator needs n >= 2")
    if delta < 1:
        raise InputError("delta must be positive")
    rng = SplitMix64(seed)
    children: list[list[int]] = [[] for _ in range(n)]
    depth = [0] * n
    edges: list[tuple[int, int]] = []
    for v in range(1, n):
        open_ = [u for u in range(v) if len(children[u]) < delta]
        p = open_[rng.below(len(open_))]
        children[p].insert(rng.below(len(children[p]) + 1), v)
        depth[v] = depth[p] + 1
        edges.append((p, v))
    tree_edge = {v: v - 1 for v in range(1, n)}
    rotation = []
    for v in range(n):
        rot = [] if v == 0 else [tree_edge[v]]
        rot.extend(tree_edge[c] for c in children[v])
        rotation.append(rot)
    order = []
    stack_ = [0]
    while stack_:
        v = stack_.pop()
        order.append(v)
        stack_.extend(reversed(children[v]))
    pending: list[int] = []
    for v in order:
        if children[v] or v == 0:
            continue
        if pending and depth[pending[-1]] == depth[v] and rng.chance(2, 3):
            u = pending.pop()
            e = len(edges)
            edges.append((u, v))
            rotation[u].append(e)
            rotation[v].append(e)
        elif rng.chance(3, 4):
            pending.append(v)
    return _embedded(n, edges, rotation)


def gen_random_planar(n: int, seed: int, keep: tuple[int, int] = (2, 3)) -> EmbeddedGraph:
    """Random stacked triangulation, then random edge deletions.

    Each edge is kept with probability ``keep[0] / keep[1]`` unless removing
    it would disconnect the graph. Deleting edges from a plane rotation system
    keeps it plane.
    """
    if n < 3:
        raise InputError("random planar generator needs n >= 3")
    rng = SplitMix64(seed)
    edges: list[tuple[int, int]] = [(0, 1), (1, 2), (2, 0)]
    rotation: list[list[int]] = [[0, 2], [1, 0], [2, 1]]
    # Triangular faces as (corner, incoming edge) triples.
    faces: list[tuple[tuple[int, int], ...]] = []

    def trace_faces() -> list[tuple[tuple[int, int], ...]]:
        emb = _embedded(len(rotation), edges, rotation)
        tr = face_trace(emb)
        return [walk for walk in tr.walks]

    faces = trace_faces()
    for x in range(3, n):
        walk = faces.pop(rng.below(len(faces)))
        rotation.append([])
        new_edges = []
        for v, e_out in walk:
            e = len(edges)
            edges.append((v, x))
            rot = rotation[v]
            rot.insert(rot.index(e_out), e)
            new_edges.append(e)
        rotation[x] = list(reversed(new_edges))
        faces = trace_faces()
    emb = _embedded(n, edges, rotation)
    if face_trace(emb).genus != 0:
        raise InvariantError("stacked triangulation is not planar")

    order = list(range(len(edges)))
    rng.shuffle(order)
    removed: set[int] = set()
    for e in order:
        if rng.chance(*keep):
            continue
        removed.add(e)
        if not _connected_without(n, edges, removed):
            removed.discard(e)
    kept = [e for e in range(len(edges)) if e not in removed]
    new_id = {e: i for i, e in enumerate(kept)}
    return _embedded(
        n,
        [edges[e] for e in kept],
        [[new_id[e] for e in rot if e in new_id] for rot in rotation],
    )


def _connected_without(n: int, edges, removed: set[int]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(edges):
        if e not in removed:
            adj[u].append(v)
            adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def connected_planar_graphs(max_n: int = 7) -> Iterator[EmbeddedGraph]:
    """Every connected planar graph on at most ``max_n <= 7`` vertices, up to
    isomorphism, each with one plane rotation system.

    Enumeration comes from the networkx graph atlas; the rotation system from
    its planarity test.
    """
    import networkx as nx

    if max_n > 7:
        raise InputError("the graph atlas only covers n <= 7")
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if n == 0 or n > max_n or not nx.is_connected(h):
            continue
        planar, embedding = nx.check_planarity(h)
        if not planar:
            continue
        edges = sorted(tuple(sorted(e)) for e in h.edges())
        eid = {e: i for i, e in enumerate(edges)}
        rotation = [
            [eid[tuple(sorted((v, w)))] for w in embedding.neighbors_cw_order(v)] if h.degree(v) else []
            for v in range(n)
        ]
        yield _embedded(n, edges, rotation)


def generate(spec: FamilySpec) -> EmbeddedGraph:
    p = spec.params
    if spec.family == "grid":
        return gen_grid(p["rows"], p["cols"])
    if spec.family == "torus":
        return gen_toroidal_grid(p["rows"], p["cols"])
    if spec.family == "tight":
        return gen_tight_example(p["delta"]).emb
    if spec.family == "well-layered":
        return gen_well_layered(p["n"], p["delta"], p["seed"])
    if spec.family == "random-planar":
        return gen_random_planar(p["n"], p["seed"])
    if spec.family == "k5-torus":
        return gen_k5_torus()
    raise InputError(f"unknown family {spec.family!r}")
