"""Queue layouts: representation, verification, fixed-order optimum, exact oracle."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import InputError, InvariantError
from .graph import Graph

DEFAULT_ORACLE_LIMIT = 9


@dataclass(frozen=True)
class QueueLayout:
    """A vertex order plus a queue index for every edge.

    ``order`` lists the vertices from first to last; ``queues[e]`` is the
    queue of edge ``e``; ``k`` is the number of queues.
    """

    order: tuple[int, ...]
    queues: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        object.__setattr__(self, "queues", tuple(int(q) for q in self.queues))

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def to_json(self) -> dict:
        return {"order": list(self.order), "queues": list(self.queues), "k": self.k}

    @classmethod
    def from_json(cls, data: dict) -> QueueLayout:
        try:
            return cls(tuple(data["order"]), tuple(data["queues"]), int(data["k"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed layout JSON: {exc}") from exc


@dataclass(frozen=True)
class LayoutViolation:
    queue: int
    edges: tuple[int, int]


def positions(order: Sequence[int]) -> dict[int, int]:
    return {v: i for i, v in enumerate(order)}


def _span(pos: dict[int, int] | Sequence[int], edge: tuple[int, int]) -> tuple[int, int]:
    a, b = pos[edge[0]], pos[edge[1]]
    return (a, b) if a < b else (b, a)


def nested(order: Sequence[int], e1: tuple[int, int], e2: tuple[int, int]) -> bool:
    """True iff one edge strictly encloses the other under ``order``."""
    pos = positions(order)
    return spans_nest(_span(pos, e1), _span(pos, e2))


def spans_nest(s1: tuple[int, int], s2: tuple[int, int]) -> bool:
    (a, b), (c, d) = s1, s2
    return (a < c and d < b) or (c < a and b < d)


def spans_cross(s1: tuple[int, int], s2: tuple[int, int]) -> bool:
    (a, b), (c, d) = s1, s2
    return (a < c < b < d) or (c < a < d < b)


def _check_order(g: Graph, order: Sequence[int]) -> None:
    if len(order) != g.n or sorted(order) != list(range(g.n)):
        raise InputError("layout order is not a permutation of the vertices")


def verify_layout(g: Graph, layout: QueueLayout) -> LayoutViolation | None:
    """Return ``None`` if no queue holds two nested edges, else the first violation.

    Violations are ordered lexicographically by edge-id pair.
    """
    _check_order(g, layout.order)
    if len(layout.queues) != g.m:
        raise InputError(f"layout assigns {len(layout.queues)} queues for {g.m} edges")
    for e, q in enumerate(layout.queues):
        if not 0 <= q < layout.k:
            raise InputError(f"edge {e} has queue {q} outside 0..{layout.k - 1}")
    pos = layout.position
    spans = [_span(pos, uv) for uv in g.edges]
    by_queue: dict[int, list[int]] = {}
    for e, q in enumerate(layout.queues):
        by_queue.setdefault(q, []).append(e)
    best: tuple[int, int] | None = None
    for members in by_queue.values():
        for i, e1 in enumerate(members):
            if best is not None and e1 >= best[0]:
                break
            for e2 in members[i + 1 :]:
                if spans_nest(spans[e1], spans[e2]):
                    if best is None or (e1, e2) < best:
                        best = (e1, e2)
                    break
    if best is None:
        return None
    return LayoutViolation(layout.queues[best[0]], best)


def used_queues(layout: QueueLayout) -> int:
    return len(set(layout.queues))


def compact(order: Sequence[int], keys: Sequence, *, sort_key=None) -> QueueLayout:
    """Turn arbitrary sortable queue keys into indices ``0..k-1``.

    Unused keys vanish; surviving keys keep their relative order.
    """
    distinct = sorted(set(keys), key=sort_key)
    index = {key: i for i, key in enumerate(distinct)}
    return QueueLayout(tuple(order), tuple(index[k] for k in keys), len(distinct))


def _nesting_tables(g: Graph, order: Sequence[int]) -> tuple[list[tuple[int, int]], list[int], list[int]]:
    """Longest nesting chains per edge.

    ``inside[e]`` is the longest chain with ``e`` outermost, ``depth[e]`` the
    longest with ``e`` innermost.
    """
    _check_order(g, order)
    pos = positions(order)
    spans = [_span(pos, uv) for uv in g.edges]
    by_width = sorted(range(g.m), key=lambda e: (spans[e][1] - spans[e][0], e))
    inside = [1] * g.m
    for i, e in enumerate(by_width):
        for f in by_width[:i]:
            if spans_nest(spans[e], spans[f]) and inside[f] + 1 > inside[e]:
                inside[e] = inside[f] + 1
    depth = [1] * g.m
    for i in range(g.m - 1, -1, -1):
        e = by_width[i]
        for f in by_width[i + 1 :]:
            if spans_nest(spans[f], spans[e]) and depth[f] + 1 > depth[e]:
                depth[e] = depth[f] + 1
    return spans, inside, depth


def min_queues_for_order(g: Graph, order: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Minimum number of queues for a fixed order and a maximum rainbow witness.

    The witness lists edge ids from outermost to innermost, choosing the
    lowest edge id at every step.
    """
    if g.m == 0:
        _check_order(g, order)
        return 0, ()
    spans, inside, _ = _nesting_tables(g, order)
    k = max(inside)
    e = min(x for x in range(g.m) if inside[x] == k)
    witness = [e]
    while inside[e] > 1:
        e = min(
            f for f in range(g.m) if inside[f] == inside[e] - 1 and spans_nest(spans[e], spans[f])
            and spans[f][0] > spans[e][0]
        )
        witness.append(e)
    return k, tuple(witness)


def max_rainbow(g: Graph, order: Sequence[int], edges: Sequence[int]) -> tuple[int, ...]:
    """Largest set of pairwise nested edges among ``edges`` (outermost first)."""
    sub = Graph(g.n, tuple(g.edges[e] for e in edges))
    _, witness = min_queues_for_order(sub, order)
    return tuple(edges[i] for i in witness)


def fixed_order_layout(g: Graph, order: Sequence[int]) -> QueueLayout:
    """Optimal layout for ``order``: each edge goes to queue (rainbow depth - 1)."""
    if g.m == 0:
        _check_order(g, order)
        return QueueLayout(tuple(order), (), 0)
    _, _, depth = _nesting_tables(g, order)
    layout = QueueLayout(tuple(order), tuple(d - 1 for d in depth), max(depth))
    violation = verify_layout(g, layout)
    if violation is not None:
        raise InvariantError("rainbow-depth assignment is not a queue layout", witness=violation)
    return layout


def oracle_limit() -> int:
    raw = os.environ.get("QUEUELAY_ORACLE_LIMIT")
    if raw is None:
        return DEFAULT_ORACLE_LIMIT
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"QUEUELAY_ORACLE_LIMIT must be an integer, got {raw!r}") from exc


def exact_queue_number(g: Graph, limit: int | None = None) -> tuple[int, QueueLayout]:
    """Queue-number by exhaustive search over vertex orders.

    Orders are explored as prefixes in lexicographic order. A prefix is cut
    as soon as the edges it already fixes force a rainbow at least as large
    as the best complete order found so far, so the result is the
    lexicographically first order among those of minimum queue count.
    """
    if limit is None:
        limit = oracle_limit()
    n = g.n
    if n > limit:
        raise InputError(f"too large for exact oracle (n={n} > {limit})")
    if g.m == 0:
        return 0, QueueLayout(tuple(range(n)), (), 0)

    adj = g.neighbours
    pos = [-1] * n
    placed: list[int] = []
    # chain[p]: longest nesting chain among closed edges whose left end sits at position p.
    chain = [0] * n
    open_count = [0] * n
    best_k = g.m + 1
    best_order: list[int] | None = None

    def suffix_max(start: int, stop: int) -> int:
        best = 0
        for p in range(start, stop):
            if chain[p] > best:
                best = chain[p]
        return best

    def search(depth: int, closed_max: int) -> bool:
        nonlocal best_k, best_order
        if depth == n:
            best_k = closed_max
            best_order = list(placed)
            return best_k <= 1
        for v in range(n):
            if pos[v] >= 0:
                continue
            lefts = [pos[u] for u in adj[v] if pos[u] >= 0]
            vals = [1 + suffix_max(left + 1, depth) for left in lefts]
            cm = max([closed_max, *vals])
            if cm >= best_k:
                continue
            saved = [(left, chain[left]) for left in lefts]
            for left, val in zip(lefts, vals):
                if val > chain[left]:
                    chain[left] = val
            pos[v] = depth
            placed.append(v)
            for u in adj[v]:
                if pos[u] >= 0:
                    open_count[u] -= 1
            open_count[v] = sum(1 for u in adj[v] if pos[u] < 0)
            lb = cm
            for p in range(depth + 1):
                if open_count[placed[p]] > 0:
                    lb = max(lb, 1 + suffix_max(p + 1, depth + 1))
                    break
            done = False
            if lb < best_k:
                done = search(depth + 1, cm)
            open_count[v] = 0
            for u in adj[v]:
                if pos[u] >= 0 and u != v:
                    open_count[u] += 1
            placed.pop()
            pos[v] = -1
            for left, old in reversed(saved):
                chain[left] = old
            if done:
                return True
        return False

    search(0, 0)
    assert best_order is not None
    layout = fixed_order_layout(g, best_order)
    if layout.k != best_k:
        raise InvariantError("oracle bookkeeping disagrees with the rainbow table", witness=(best_k, layout.k))
    return best_k, layout
