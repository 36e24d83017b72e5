"""Command-line front end.

Exit status is 0 on success, 1 for bad input or usage, and 2 when an
internal check fails (a bug; the witness is printed on stderr).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import generators as gen
from .errors import InputError, InvariantError
from .genus import cut_graph, genus_bound, layout_genus, planarizing_set
from .graph import EmbeddedGraph, Graph, bfs_structure, components, face_trace, induced
from .io import (
    graph_to_json,
    load_embedded,
    load_graph,
    load_json,
    load_layout,
    subdivision_from_json,
    write_json,
    write_text,
)
from .layout import QueueLayout, exact_queue_number, min_queues_for_order, verify_layout
from .planar import effective_delta, layout_planar, planar_bound
from .render import render_svg
from .unsubdivide import subdivide_edges, unsubdivide_bound, unsubdivide_layout


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{message}\n{self.format_usage().rstrip()}")


@dataclass
class RunReport:
    n: int
    m: int
    max_degree: int
    delta: int
    genus: int
    pipeline: str
    queues: int
    bound: int | None
    verified: bool
    rainbow: tuple[int, ...] = ()
    timing: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "input": {"n": self.n, "m": self.m, "max_degree": self.max_degree, "delta": self.delta, "genus": self.genus},
            "pipeline": self.pipeline,
            "queues": self.queues,
            "bound": self.bound,
            "verified": self.verified,
            "rainbow": {"size": len(self.rainbow), "edges": list(self.rainbow)},
            **self.extra,
        }
        if self.timing is not None:
            out["timing_s"] = round(self.timing, 6)
        return out


def build_report(
    emb: EmbeddedGraph, layout: QueueLayout, pipeline: str, delta: int, genus: int, timing: float | None = None
) -> RunReport:
    g = emb.graph
    verified = verify_layout(g, layout) is None
    _, rainbow = min_queues_for_order(g, layout.order)
    if pipeline == "planar":
        bound = planar_bound(delta)
    elif pipeline == "genus":
        bound = genus_bound(delta, genus)
    else:
        bound = None
    return RunReport(g.n, g.m, g.max_degree, delta, genus, pipeline, layout.k, bound, verified, rainbow, timing)


def _delta(raw: str) -> int | None:
    if raw == "auto":
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f'--delta must be an integer or "auto", got {raw!r}') from exc
    if value < 2:
        raise InputError("--delta must be at least 2")
    return value


def _genus(emb: EmbeddedGraph) -> int:
    if emb.graph.is_connected():
        return face_trace(emb).genus
    total = 0
    for comp in components(emb.graph):
        total += face_trace(induced(emb, comp)[0]).genus
    return total


def cmd_layout(args: argparse.Namespace) -> int:
    emb = load_embedded(args.input)
    delta = _delta(args.delta)
    start = time.perf_counter()
    extra: dict[str, Any] = {}
    if args.pipeline == "planar":
        run = layout_planar(emb, delta, check=args.check, root=args.root)
        layout, used_delta, genus = run.layout, run.delta, 0
        if args.explain:
            extra["explain"] = run.explain()
    else:
        grun = layout_genus(emb, delta=delta, check=args.check, root=args.root or 0)
        layout, used_delta, genus = grun.layout, grun.delta, grun.genus
        extra["inner_queues"] = grun.inner_k
        extra["z_per_layer"] = list(grun.zset.per_layer_counts)
    elapsed = time.perf_counter() - start if args.timing else None
    violation = verify_layout(emb.graph, layout)
    if violation is not None:
        raise InvariantError("layout failed verification", witness=violation)
    report = build_report(emb, layout, args.pipeline, used_delta, genus, elapsed)
    report.extra.update(extra)
    if report.bound is not None and layout.k > report.bound:
        raise InvariantError("queue count exceeds the bound", witness=(layout.k, report.bound))
    if args.out:
        write_json(layout.to_json(), args.out)
    write_json(report.to_json(), None)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    g = load_graph(args.input)
    layout = load_layout(args.layout)
    violation = verify_layout(g, layout)
    if violation is None:
        write_json({"ok": True, "queues": layout.k}, None)
        return 0
    write_json({"ok": False, "queue": violation.queue, "edges": list(violation.edges)}, None)
    return 1


def cmd_oracle(args: argparse.Namespace) -> int:
    g = load_graph(args.input)
    qn, layout = exact_queue_number(g)
    print(f"qn={qn}")
    if args.out:
        write_json(layout.to_json(), args.out)
    return 0


def cmd_rainbow(args: argparse.Namespace) -> int:
    g = load_graph(args.input)
    layout = load_layout(args.layout)
    size, witness = min_queues_for_order(g, layout.order)
    write_json({"size": size, "edges": list(witness)}, None)
    return 0


def cmd_unsubdivide(args: argparse.Namespace) -> int:
    g = load_graph(args.input)
    smap = subdivision_from_json(g, load_json(args.subdivision))
    layout = load_layout(args.layout)
    out = unsubdivide_layout(smap, layout)
    if args.out:
        write_json(out.to_json(), args.out)
    write_json({"queues_in": layout.k, "queues_out": out.k, "bound": unsubdivide_bound(layout.k, smap.c)}, None)
    return 0


def cmd_cut(args: argparse.Namespace) -> int:
    emb = load_embedded(args.input)
    faces = face_trace(emb)
    bfs = bfs_structure(emb, args.root or 0, faces=faces)
    zset = planarizing_set(emb, bfs, faces)
    cut = cut_graph(emb, zset, faces)
    data = zset.to_json(faces)
    data["genus"] = zset.genus
    data["cut_faces"] = cut.faces.count
    data["faces"] = faces.count
    write_json(data, args.out)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    family = args.family
    extra: dict[str, Any] = {}
    if family == "tight":
        example = gen.gen_tight_example(args.delta if args.delta is not None else 2)
        emb: EmbeddedGraph | Graph = example.emb
        extra = {"labels": dict(sorted(example.labels.items())), "matching": list(example.matching)}
    elif family in ("grid", "torus"):
        if len(args.dims) != 2:
            raise InputError(f"gen {family} needs ROWS COLS")
        rows, cols = args.dims
        emb = gen.gen_grid(rows, cols) if family == "grid" else gen.gen_toroidal_grid(rows, cols)
    elif family == "well-layered":
        emb = gen.gen_well_layered(args.n, args.delta if args.delta is not None else 2, args.seed)
    elif family == "random-planar":
        emb = gen.gen_random_planar(args.n, args.seed)
    elif family == "k5-torus":
        emb = gen.gen_k5_torus()
    else:
        g = load_graph(args.input) if args.input else None
        if g is None:
            raise InputError("gen subdivision needs --input")
        rng = gen.SplitMix64(args.seed)
        smap = subdivide_edges(g, [rng.below(args.max_c + 1) for _ in g.edges])
        write_json(smap.to_json(), args.out)
        return 0
    data = graph_to_json(emb)
    data.update(extra)
    write_json(data, args.out)
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    emb = load_embedded(args.input)
    layout = load_layout(args.layout) if args.layout else None
    write_text(render_svg(emb, layout, root=args.root or 0), args.out)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    emb = load_embedded(args.input)
    genus = _genus(emb)
    delta = _delta(args.delta) or effective_delta(emb)
    if args.layout:
        layout = load_layout(args.layout)
        pipeline = "planar" if genus == 0 else "genus"
        if verify_layout(emb.graph, layout) is not None:
            report = build_report(emb, layout, pipeline, delta, genus)
            write_json(report.to_json(), None)
            return 1
    elif genus == 0:
        pipeline = "planar"
        layout = layout_planar(emb, delta).layout
    else:
        pipeline = "genus"
        layout = layout_genus(emb, delta=delta).layout
    write_json(build_report(emb, layout, pipeline, delta, genus).to_json(), None)
    return 0


def _add_input(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--input", "--graph", dest="input", required=required, help="graph JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="queuelay", description="Queue layouts of embedded graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("layout", help="compute a queue layout")
    p.add_argument("pipeline", choices=["planar", "genus"])
    _add_input(p)
    p.add_argument("--delta", default="auto", help='integer >= 2 or "auto" (max degree, at least 2)')
    p.add_argument("--check", action="store_true", help="run every structural verifier")
    p.add_argument("--explain", action="store_true", help="include per-vertex m and g values")
    p.add_argument("--root", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="add wall-clock time to the report")
    p.add_argument("--out", help="write the layout JSON here")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("verify", help="check a layout against a graph")
    _add_input(p)
    p.add_argument("--layout", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact queue-number by exhaustive search")
    _add_input(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("rainbow", help="largest rainbow under a layout's order")
    _add_input(p)
    p.add_argument("--layout", required=True)
    p.set_defaults(func=cmd_rainbow)

    p = sub.add_parser("unsubdivide", help="layout of a graph from a layout of its subdivision")
    _add_input(p)
    p.add_argument("--subdivision", required=True)
    p.add_argument("--layout", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_unsubdivide)

    p = sub.add_parser("cut", help="planarizing vertex set of an embedded graph")
    _add_input(p)
    p.add_argument("--root", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument(
        "family", choices=["tight", "grid", "torus", "well-layered", "random-planar", "k5-torus", "subdivision"]
    )
    p.add_argument("dims", nargs="*", type=int, help="ROWS COLS for grid and torus")
    p.add_argument("--delta", type=int)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-c", type=int, default=2, help="subdivisions per edge (subdivision family)")
    _add_input(p, required=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", help="SVG drawing on concentric circles")
    _add_input(p)
    p.add_argument("--layout")
    p.add_argument("--root", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("report", help="summary of a graph and a layout")
    _add_input(p)
    p.add_argument("--layout")
    p.add_argument("--delta", default="auto")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InvariantError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
