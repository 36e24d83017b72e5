"""Turning a layout of a subdivision back into a layout of the original graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, InvariantError
from .graph import Graph
from .layout import QueueLayout, compact, verify_layout


def unsubdivide_bound(k: int, c: int) -> int:
    """``sum_{l=0}^{c} (2k)^(l+1)``, i.e. ``2k((2k)^(c+1) - 1) / (2k - 1)``."""
    return sum((2 * k) ** (ell + 1) for ell in range(c + 1))


@dataclass(frozen=True)
class SubdivisionMap:
    """A subdivision ``sub`` of ``graph``.

    Original vertex ``v`` keeps id ``v`` in ``sub``; ``paths[e]`` walks from
    ``graph.edges[e][0]`` to ``graph.edges[e][1]`` through subdivision vertices.
    """

    graph: Graph
    sub: Graph
    paths: tuple[tuple[int, ...], ...]
    c: int

    def __post_init__(self) -> None:
        g, h = self.graph, self.sub
        if len(self.paths) != g.m:
            raise InputError(f"subdivision map has {len(self.paths)} paths for {g.m} edges")
        if h.n < g.n:
            raise InputError("subdivision has fewer vertices than the original graph")
        edge_id = {frozenset(uv): e for e, uv in enumerate(h.edges)}
        used_edges: set[int] = set()
        used_inner: set[int] = set()
        for e, path in enumerate(self.paths):
            if (path[0], path[-1]) != g.edges[e]:
                raise InputError(f"path {e} does not join the endpoints of edge {e}")
            inner = path[1:-1]
            if len(inner) > self.c:
                raise InputError(f"path {e} has {len(inner)} subdivision vertices, more than c={self.c}")
            for x in inner:
                if x < g.n or x in used_inner or h.degree(x) != 2:
                    raise InputError(f"path {e} uses vertex {x} that is not a private degree-2 subdivision vertex")
                used_inner.add(x)
            for a, b in zip(path, path[1:]):
                key = frozenset((a, b))
                if key not in edge_id or edge_id[key] in used_edges:
                    raise InputError(f"path {e} step {a}-{b} is not an unused subdivision edge")
                used_edges.add(edge_id[key])
        if len(used_edges) != h.m or len(used_inner) != h.n - g.n:
            raise InputError("paths do not cover the subdivision exactly")

    def to_json(self) -> dict:
        return {
            "subdivision": {"n": self.sub.n, "edges": [list(uv) for uv in self.sub.edges]},
            "paths": [list(p) for p in self.paths],
            "c": self.c,
        }


def subdivide_edges(g: Graph, counts: Sequence[int]) -> SubdivisionMap:
    """Subdivide edge ``e`` exactly ``counts[e]`` times; new vertices follow in edge order."""
    if len(counts) != g.m:
        raise InputError("one subdivision count per edge required")
    n = g.n
    edges: list[tuple[int, int]] = []
    paths = []
    for (u, v), c in zip(g.edges, counts):
        path = [u, *range(n, n + c), v]
        n += c
        edges.extend(zip(path, path[1:]))
        paths.append(tuple(path))
    return SubdivisionMap(g, Graph(n, tuple(edges)), tuple(paths), max(counts, default=0))


def unsubdivide_layout(smap: SubdivisionMap, layout: QueueLayout) -> QueueLayout:
    """Layout of the original graph from a layout of its subdivision.

    Each edge is keyed by the number of subdivision vertices on its path, the
    left/right direction of every path step and the queue of every path step,
    reading the path from its earlier endpoint. Equal keys never nest.
    """
    g, h = smap.graph, smap.sub
    violation = verify_layout(h, layout)
    if violation is not None:
        raise InputError(f"layout is not valid for the subdivision: queue {violation.queue}, edges {violation.edges}")
    pos = layout.position
    edge_id = {frozenset(uv): e for e, uv in enumerate(h.edges)}
    keys = []
    for path in smap.paths:
        if pos[path[0]] > pos[path[-1]]:
            path = path[::-1]
        steps = list(zip(path, path[1:]))
        f = tuple(1 if pos[a] < pos[b] else -1 for a, b in steps)
        q = tuple(layout.queues[edge_id[frozenset(st)]] for st in steps)
        keys.append((len(path) - 2, f, q))
    order = [v for v in layout.order if v < g.n]
    out = compact(order, keys)
    violation = verify_layout(g, out)
    if violation is not None:
        raise InvariantError("unsubdivided layout failed verification", witness=violation)
    bound = unsubdivide_bound(layout.k, smap.c)
    if out.k > bound:
        raise InvariantError("unsubdivided layout exceeds its queue bound", witness=(out.k, bound))
    return out
