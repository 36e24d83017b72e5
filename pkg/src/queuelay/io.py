"""JSON file formats.

Graphs are ``{"n": int, "edges": [[u, v], ...]}`` with optional
``"rotation"`` (per-vertex list of edge ids in cyclic order) and
``"signature"`` (per-edge +1/-1). Unknown keys are ignored, so generator
output with extra annotations loads as a plain graph.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from .errors import InputError
from .graph import EmbeddedGraph, Graph
from .layout import QueueLayout
from .unsubdivide import SubdivisionMap


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text(text: str, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def write_json(data: Any, path: str | Path | None) -> None:
    write_text(dumps(data), path)


def graph_from_json(data: Any) -> Graph:
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise InputError('graph JSON needs "n" and "edges"')
    try:
        return Graph(int(data["n"]), tuple((int(u), int(v)) for u, v in data["edges"]))
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from exc


def embedded_from_json(data: Any) -> EmbeddedGraph:
    g = graph_from_json(data)
    if "rotation" not in data:
        raise InputError('embedded graph JSON needs "rotation"')
    try:
        rotation = tuple(tuple(int(e) for e in rot) for rot in data["rotation"])
        signature = data.get("signature")
        if signature is not None:
            signature = tuple(int(s) for s in signature)
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed rotation system: {exc}") from exc
    return EmbeddedGraph(g, rotation, signature)


def graph_to_json(g: Graph | EmbeddedGraph) -> dict:
    emb = g if isinstance(g, EmbeddedGraph) else None
    graph = emb.graph if emb else g
    out: dict[str, Any] = {"n": graph.n, "edges": [list(uv) for uv in graph.edges]}
    if emb is not None:
        out["rotation"] = [list(rot) for rot in emb.rotation]
        if not emb.orientable_signature:
            out["signature"] = list(emb.signature)
    return out


def load_graph(path: str | Path) -> Graph:
    return graph_from_json(load_json(path))


def load_embedded(path: str | Path) -> EmbeddedGraph:
    return embedded_from_json(load_json(path))


def load_layout(path: str | Path) -> QueueLayout:
    data = load_json(path)
    if not isinstance(data, dict):
        raise InputError("layout JSON must be an object")
    return QueueLayout.from_json(data)


def subdivision_from_json(g: Graph, data: Any) -> SubdivisionMap:
    """``{"subdivision": <graph>, "paths": [[v, ..., w], ...], "c"?: int}``."""
    if not isinstance(data, dict) or "subdivision" not in data or "paths" not in data:
        raise InputError('subdivision JSON needs "subdivision" and "paths"')
    sub = graph_from_json(data["subdivision"])
    try:
        paths = tuple(tuple(int(x) for x in p) for p in data["paths"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed subdivision paths: {exc}") from exc
    if any(len(p) < 2 for p in paths):
        raise InputError("every subdivision path needs two endpoints")
    c = int(data.get("c", max((len(p) - 2 for p in paths), default=0)))
    return SubdivisionMap(g, sub, paths, c)
