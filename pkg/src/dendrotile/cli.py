"""Command-line surface.

Exit codes are part of the contract: 0 clean/SAT, 1 violation/UNSAT,
2 usage error, 3 node-limit reached.  A torus scan that could not finish
exhaustively (any LIMIT entry) also exits 3; SAT tori are a legitimate
finding, not an error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .aperiodicity import torus_scan
from .dendrite import CycleError, order_lines, placement_order
from .hexgrid import Region
from .render import STYLES, RenderStyle, render_svg
from .ruleset import RuleSet, RuleSetError, builtin_names, builtin_ruleset, \
    load_ruleset
from .solver import Patch, SolverConfig, solve_region, verify_patch

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


class UsageError(Exception):
    pass


def _resolve_ruleset(spec: str) -> RuleSet:
    """A shipped rule-set name, or a path to a rule-set document."""
    if spec in builtin_names():
        return builtin_ruleset(spec)
    path = Path(spec)
    if path.is_file():
        try:
            return load_ruleset(path.read_text("utf-8"))
        except RuleSetError as err:
            raise UsageError(f"{path}: {err}") from None
    raise UsageError(
        f"unknown rule set {spec!r}; shipped: {', '.join(builtin_names())}")


def _load_patch(path: str, ruleset_spec: str | None) -> Patch:
    try:
        doc = json.loads(Path(path).read_text("utf-8"))
    except OSError as err:
        raise UsageError(str(err)) from None
    except json.JSONDecodeError as err:
        raise UsageError(f"{path}: not a valid document: {err}") from None
    name = ruleset_spec
    if name is None:
        try:
            name = doc["ruleset"]["name"]
        except (TypeError, KeyError):
            raise UsageError(f"{path}: missing ruleset block") from None
    rs = _resolve_ruleset(name)
    try:
        return Patch.from_doc(doc, rs)
    except ValueError as err:
        raise UsageError(f"{path}: {err}") from None


def _default_style(rs: RuleSet) -> str:
    layers = rs.stroke_layers()
    if "stripe" in layers:
        return "stripes"
    if "dendrite" in layers:
        return "dendrite"
    return "outline"


def _parse_palette(text: str) -> dict:
    palette = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise UsageError(f"bad palette entry {item!r}; want key=color")
        palette[key.strip()] = value.strip()
    return palette


def _solver_config(args) -> SolverConfig:
    cfg = SolverConfig(seed=getattr(args, "seed", 0))
    if args.node_limit is not None:
        if args.node_limit < 1:
            raise UsageError("--node-limit must be >= 1")
        cfg = replace(cfg, node_limit=args.node_limit)
    return cfg


def cmd_generate(args) -> int:
    rs = _resolve_ruleset(args.ruleset)
    region = Region.hex(args.radius)
    res = solve_region(region, rs, _solver_config(args))
    print(f"{res.outcome}: {len(region)} cells, nodes={res.nodes}, "
          f"propagations={res.propagations}, {res.wall_time:.3f}s")
    if res.outcome == "LIMIT":
        return EXIT_LIMIT
    if res.outcome == "UNSAT":
        return EXIT_VIOLATION
    p = Patch(rs, region, res.assignment)
    Path(args.out).write_bytes(p.canonical_bytes())
    print(f"wrote {args.out} ({len(res.assignment)} tiles)")
    if args.svg:
        style = RenderStyle(_default_style(rs))
        Path(args.svg).write_text(render_svg(p, rs, style), "utf-8")
        print(f"wrote {args.svg} ({style.style})")
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _load_patch(args.patch, args.ruleset)
    if not p.assignment:
        print("clean (warning: no tiles)")
        return EXIT_OK
    violations = verify_patch(p)
    for v in violations:
        cells = " ".join(f"({q},{r})" for q, r in v["cells"])
        print(f"violation [{v['clause']}] cells {cells}")
    try:
        placement_order(p)
        order_verdict = "placement order exists"
    except CycleError as err:
        order_verdict = f"no placement order (cycle through {err.cells})"
    print(f"{len(violations)} violation(s); {order_verdict}")
    if violations:
        return EXIT_VIOLATION
    print("clean")
    return EXIT_OK


def cmd_order(args) -> int:
    p = _load_patch(args.patch, args.ruleset)
    try:
        seq = placement_order(p)
    except CycleError as err:
        cells = " ".join(f"({q},{r})" for q, r in err.cells)
        print(f"no placement order: male-joint cycle through {cells}")
        return EXIT_VIOLATION
    for line in order_lines(p, seq):
        print(line)
    return EXIT_OK


def cmd_torus_scan(args) -> int:
    rs = _resolve_ruleset(args.ruleset)
    # no flag means solve_torus's own (effectively unlimited) budget
    cfg = _solver_config(args) if args.node_limit is not None else None
    report = torus_scan(args.max_det, rs, cfg)
    Path(args.out).write_bytes(report.canonical_bytes())
    counts = report.outcomes()
    print(f"wrote {args.out}: {len(report.entries)} bases, "
          f"SAT={counts['SAT']} UNSAT={counts['UNSAT']} "
          f"LIMIT={counts['LIMIT']}")
    return EXIT_OK if report.exhaustive() else EXIT_LIMIT


def cmd_render(args) -> int:
    p = _load_patch(args.patch, args.ruleset)
    palette = _parse_palette(args.palette) if args.palette else None
    style = RenderStyle(args.style, args.size, palette)
    try:
        svg = render_svg(p, p.ruleset, style)
    except ValueError as err:
        raise UsageError(str(err)) from None
    Path(args.out).write_text(svg, "utf-8")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import create_server

    server = create_server(_resolve_ruleset(args.ruleset), args.port,
                           sessions_dir=args.sessions)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port} (rule set {args.ruleset})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dendrotile",
        description="hexagonal monotile engine: generate, verify, order, "
                    "scan, render, serve")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="solve a hex-ball region")
    g.add_argument("--ruleset", required=True)
    g.add_argument("--radius", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--node-limit", type=int,
                   help="stop after this many search nodes (exit 3)")
    g.add_argument("--out", required=True)
    g.add_argument("--svg")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a patch document")
    v.add_argument("patch")
    v.add_argument("--ruleset", help="override the document's rule set")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("order", help="emit the tiler's placement sequence")
    o.add_argument("patch")
    o.add_argument("--ruleset")
    o.set_defaults(func=cmd_order)

    t = sub.add_parser("torus-scan", help="solve all small torus quotients")
    t.add_argument("--ruleset", required=True)
    t.add_argument("--max-det", type=int, required=True)
    t.add_argument("--node-limit", type=int,
                   help="per-basis node budget; any LIMIT entry means exit 3")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_torus_scan)

    r = sub.add_parser("render", help="draw a patch as SVG")
    r.add_argument("patch")
    r.add_argument("--style", choices=STYLES, default="outline")
    r.add_argument("--size", type=float, default=40.0)
    r.add_argument("--palette", help="comma-separated key=color overrides")
    r.add_argument("--out", required=True)
    r.add_argument("--ruleset")
    r.set_defaults(func=cmd_render)

    s = sub.add_parser("serve", help="run the tiler session service")
    s.add_argument("--port", type=int, default=8000)
    s.add_argument("--ruleset", required=True)
    s.add_argument("--sessions", help="directory for patch persistence")
    s.set_defaults(func=cmd_serve)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
