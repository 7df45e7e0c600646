"""lattice-net command line interface.

Subcommands: analyze, symmetry, route, verify, lift, simulate, sweep.
Each prints a report in one of three formats (table, json, csv) chosen
with --format, to stdout or to --output.  Exit codes: 0 success, 1
validation failure (an oracle violation, a failed simulation config, a
resource cap), 2 usage error (bad flags, malformed matrix literal,
unknown topology).
"""

import argparse
import io
import json
import random
import sys
from fractions import Fraction

from lattice_net import lattice, metrics, routing, simulator, symmetry
from lattice_net.errors import ConfigError, LatticeError

TOPOLOGY_KINDS = (
    "pc", "fcc", "bcc", "rtt", "fcc4", "bcc4", "lip", "torus", "hybrid",
)

ANALYZE_CSV_FIELDS = (
    "topology", "a", "nodes", "diameter", "avg_num", "avg_den",
    "bound_num", "bound_den",
)


class UsageError(Exception):
    pass


def _parse_ints(text, what):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"malformed {what} {text!r}: expected "
                         "comma-separated integers") from None


def _parse_matrix(text):
    try:
        rows = tuple(
            tuple(int(entry) for entry in row.split(","))
            for row in text.split(";")
        )
    except ValueError:
        raise UsageError(f"malformed matrix literal {text!r}") from None
    if not rows or any(len(row) != len(rows) for row in rows):
        raise UsageError("matrix literal must be square, rows separated "
                         "by ';'")
    return rows


def _matrix_literal(rows):
    return ";".join(",".join(str(x) for x in row) for row in rows)


def _add_topology_args(parser, prefix=""):
    flag = f"--{prefix}topology" if prefix else "--topology"
    parser.add_argument(flag, choices=TOPOLOGY_KINDS, default=None,
                        help="named topology kind")
    parser.add_argument(f"--{prefix}a", type=int, default=None,
                        help="crystal side a")
    parser.add_argument(f"--{prefix}sides", default=None,
                        help="torus ring sizes, e.g. 8,8,8,4")
    parser.add_argument(f"--{prefix}matrix", default=None,
                        help="generator matrix literal, e.g. "
                             "'8,4,4;0,4,0;0,0,4'")


def _topology_spec(args, prefix=""):
    """Translate topology flags into make_topology keyword arguments."""
    kind = getattr(args, f"{prefix}topology")
    a = getattr(args, f"{prefix}a")
    sides = getattr(args, f"{prefix}sides")
    matrix = getattr(args, f"{prefix}matrix")
    dashed = f"--{prefix.replace('_', '-')}topology"
    if matrix is not None:
        if kind is not None or a is not None or sides is not None:
            raise UsageError(f"give either {dashed} or a matrix literal, "
                             "not both")
        return {"kind": "custom", "matrix": _parse_matrix(matrix)}
    if kind is None:
        raise UsageError(f"missing topology: use {dashed} or a matrix "
                         "literal")
    if kind == "torus":
        if sides is None:
            raise UsageError("torus requires --sides")
        return {"kind": "torus", "sides": _parse_ints(sides, "--sides")}
    if a is None:
        raise UsageError(f"{kind} requires --a")
    return {"kind": kind, "a": a}


def _build_graph(spec):
    try:
        return lattice.make_topology(**spec)
    except LatticeError as exc:
        raise UsageError(str(exc)) from exc


def emit_report(rows, fmt, fieldnames=None, many=False):
    """Render rows (list of dicts sharing one key order) as text.

    Field order is the first row's key order (or `fieldnames` when rows
    is empty), so output is byte-stable for a fixed input.
    """
    if fieldnames is None:
        fieldnames = list(rows[0]) if rows else []
    if fmt == "json":
        payload = rows if many else rows[0]
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        out.write(",".join(fieldnames) + "\r\n")
        import csv as _csv
        writer = _csv.writer(out)
        for row in rows:
            writer.writerow([
                "" if row[f] is None else row[f] for f in fieldnames
            ])
        return out.getvalue()
    if not many:
        width = max((len(f) for f in fieldnames), default=0)
        return "".join(
            f"{f:<{width}}  {_cell(rows[0][f])}\n" for f in fieldnames
        )
    cells = [[_cell(row[f]) for f in fieldnames] for row in rows]
    widths = [
        max(len(f), max((len(c[i]) for c in cells), default=0))
        for i, f in enumerate(fieldnames)
    ]
    lines = ["  ".join(f"{f:<{w}}" for f, w in zip(fieldnames, widths))]
    for c in cells:
        lines.append("  ".join(f"{v:<{w}}" for v, w in zip(c, widths)))
    return "".join(line.rstrip() + "\n" for line in lines)


def _cell(value):
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(str(v) for v in value) + ")"
    return str(value)


def _write(args, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_analyze(args):
    spec = _topology_spec(args)
    g = _build_graph(spec)
    summary = metrics.distance_summary(g)
    try:
        bound = metrics.throughput_bound(g, summary)
    except LatticeError:
        bound = None
    avg = summary.average
    row = {
        "topology": spec["kind"],
        "a": spec.get("a"),
        "nodes": g.order,
        "diameter": summary.diameter,
        "avg_num": avg.numerator,
        "avg_den": avg.denominator,
        "average": float(avg),
        "bound_num": bound.value.numerator if bound else None,
        "bound_den": bound.value.denominator if bound else None,
        "bound": float(bound.value) if bound else None,
        "bound_kind": bound.kind if bound else None,
    }
    if args.format == "csv":
        row = {f: row[f] for f in ANALYZE_CSV_FIELDS}
        _write(args, emit_report([row], "csv"))
    else:
        _write(args, emit_report([row], args.format))
    return 0


def _cmd_symmetry(args):
    spec = _topology_spec(args)
    g = _build_graph(spec)
    report = symmetry.stabilizer(g.matrix)
    witnesses = [
        None if w is None else [list(r) for r in symmetry._as_matrix(w)]
        for w in report.witnesses
    ]
    row = {
        "topology": spec["kind"],
        "nodes": g.order,
        "symmetric": report.symmetric,
        "members": len(report.members),
        "witnesses": witnesses,
    }
    if args.format == "csv":
        row = {f: row[f] for f in ("topology", "nodes", "symmetric",
                                   "members")}
        _write(args, emit_report([row], "csv"))
    elif args.format == "json":
        _write(args, emit_report([row], "json"))
    else:
        head = {f: row[f] for f in ("topology", "nodes", "symmetric",
                                    "members")}
        text = emit_report([head], "table")
        lines = [text]
        for axis, wit in enumerate(witnesses):
            if wit is None:
                lines.append(f"axis {axis + 1}: no witness\n")
            else:
                flat = "; ".join(
                    " ".join(f"{x:>2}" for x in r) for r in wit
                )
                lines.append(f"axis {axis + 1}: [{flat}]\n")
        _write(args, "".join(lines))
    return 0


def _route_path(g, source, record):
    path = [g.reduce(source)]
    for dim, component in enumerate(record):
        sign = 1 if component > 0 else -1
        for _ in range(abs(component)):
            path.append(g.move(path[-1], dim, sign))
    return path


def _cmd_route(args):
    spec = _topology_spec(args)
    g = _build_graph(spec)
    source = _parse_ints(getattr(args, "from"), "--from")
    target = _parse_ints(args.to, "--to")
    if len(source) != g.n or len(target) != g.n:
        raise UsageError(f"{spec['kind']} vertices have {g.n} coordinates")
    rng = random.Random(args.seed) if args.tie == "random" else None
    record = routing.route(g, source, target, tie=args.tie, rng=rng)
    path = _route_path(g, source, record.r)
    row = {
        "topology": spec["kind"],
        "source": list(g.reduce(source)),
        "target": list(g.reduce(target)),
        "record": list(record.r),
        "norm": record.norm,
        "path": [list(v) for v in path],
    }
    if args.format == "table":
        head = {f: row[f] for f in ("topology", "source", "target",
                                    "record", "norm")}
        text = emit_report([head], "table")
        steps = " -> ".join("(" + ",".join(str(x) for x in v) + ")"
                            for v in path)
        _write(args, text + f"path    {steps}\n")
    elif args.format == "csv":
        flat = dict(row)
        flat["source"] = " ".join(str(x) for x in row["source"])
        flat["target"] = " ".join(str(x) for x in row["target"])
        flat["record"] = " ".join(str(x) for x in row["record"])
        flat["path"] = " -> ".join(
            "(" + ",".join(str(x) for x in v) + ")" for v in path)
        _write(args, emit_report([flat], "csv"))
    else:
        _write(args, emit_report([row], "json"))
    return 0


def _cmd_verify(args):
    spec = _topology_spec(args)
    g = _build_graph(spec)
    if args.router == "generic":
        router = lambda vs, vd: routing.route_generic(g, vs, vd)
    else:
        router = None
    report = routing.verify_minimality(
        g, router=router, max_pairs=args.max_pairs,
        rng=random.Random(args.seed),
    )
    bad = len(report.violations)
    row = {
        "topology": spec["kind"],
        "router": args.router,
        "pairs_checked": report.pairs_checked,
        "violations": bad,
    }
    if args.format == "table":
        _write(args, f"{report.pairs_checked} pairs checked\n"
                     f"{bad} violations\n")
    else:
        _write(args, emit_report([row], args.format))
    return 1 if bad else 0


def _cmd_lift(args):
    left_spec = _topology_spec(args, "left_")
    right_spec = _topology_spec(args, "right_")
    gl = _build_graph(left_spec)
    gr = _build_graph(right_spec)
    try:
        overlap = lattice.lift_overlap(gl, gr)
        lifted = lattice.common_lift(gl, gr)
    except LatticeError as exc:
        print(f"lift failed: {exc}", file=sys.stderr)
        return 1
    row = {
        "left": gl.name,
        "right": gr.name,
        "overlap": overlap,
        "dims": lifted.n,
        "nodes": lifted.order,
        "matrix": _matrix_literal(lifted.hermite),
    }
    _write(args, emit_report([row], args.format))
    return 0


def _sim_config(args):
    if args.config is not None:
        if getattr(args, "topology") is not None or args.matrix is not None:
            raise UsageError("give either --config or topology flags, "
                             "not both")
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(raw) - set(simulator.SimConfig._fields)
        if unknown:
            raise UsageError(f"unknown config fields: {sorted(unknown)}")
        if "topology" not in raw:
            raise UsageError("config needs a topology")
        topo = dict(raw["topology"]) if isinstance(raw["topology"], dict) \
            else raw["topology"]
        if isinstance(topo, dict):
            if "sides" in topo and topo["sides"] is not None:
                topo["sides"] = tuple(topo["sides"])
            if "matrix" in topo and isinstance(topo["matrix"], list):
                topo["matrix"] = tuple(tuple(r) for r in topo["matrix"])
        raw["topology"] = topo
        return simulator.SimConfig(**raw)
    spec = _topology_spec(args)
    return simulator.SimConfig(
        topology=spec, pattern=args.pattern, offered_load=args.load,
        packet_size=args.packet_size, injectors=args.injectors,
        vc_count=args.vcs, queue_capacity=args.queue_capacity,
        warmup_cycles=args.warmup, measure_cycles=args.measure,
        seed=args.seed,
    )


def _cmd_simulate(args):
    cfg = _sim_config(args)
    stats = simulator.run_simulation(cfg)
    row = stats._asdict()
    row["pattern_info"] = dict(stats.pattern_info)
    if args.format == "csv":
        flat = dict(row)
        flat["pattern_info"] = ";".join(
            f"{k}={v}" for k, v in stats.pattern_info)
        _write(args, emit_report([flat], "csv"))
    else:
        _write(args, emit_report([row], args.format))
    return 0


def _cmd_sweep(args):
    cfg = _sim_config(args)
    loads = []
    if args.loads.strip():
        try:
            loads = [float(part) for part in args.loads.split(",")]
        except ValueError:
            raise UsageError(f"malformed --loads {args.loads!r}") from None
    rows = simulator.sweep(cfg, loads, seeds=args.seeds)
    fieldnames = ["topology", "pattern", "offered", "accepted",
                  "avg_latency", "seed_count"]
    _write(args, emit_report(rows, args.format, fieldnames=fieldnames,
                             many=True))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lattice-net",
        description="Analyze, route on, and simulate lattice graph "
                    "interconnection networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, topology=True):
        if topology:
            _add_topology_args(p)
        p.add_argument("--format", choices=("table", "json", "csv"),
                       default="table")
        p.add_argument("--output", default=None,
                       help="write the report to this file (UTF-8)")

    p = sub.add_parser("analyze", help="size, diameter, average distance, "
                                       "throughput bound")
    common(p)

    p = sub.add_parser("symmetry", help="edge-symmetry stabilizer scan")
    common(p)

    p = sub.add_parser("route", help="minimal routing record and path")
    common(p)
    p.add_argument("--from", required=True, help="source vertex x,y,...")
    p.add_argument("--to", required=True, help="target vertex x,y,...")
    p.add_argument("--tie", choices=("lex", "random"), default="lex")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="check routed records against BFS "
                                      "distances")
    common(p)
    p.add_argument("--router", choices=("specialized", "generic"),
                   default="specialized")
    p.add_argument("--max-pairs", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("lift", help="common lift of two topologies")
    _add_topology_args(p, "left-")
    _add_topology_args(p, "right-")
    p.add_argument("--format", choices=("table", "json", "csv"),
                   default="table")
    p.add_argument("--output", default=None)

    p = sub.add_parser("simulate", help="run one simulation")
    common(p)
    p.add_argument("--config", default=None,
                   help="JSON config file (overrides topology flags)")
    p.add_argument("--pattern", choices=simulator.PATTERNS,
                   default="uniform")
    p.add_argument("--load", type=float, default=0.1)
    p.add_argument("--packet-size", type=int, default=16)
    p.add_argument("--injectors", type=int, default=6)
    p.add_argument("--vcs", type=int, default=3)
    p.add_argument("--queue-capacity", type=int, default=4)
    p.add_argument("--warmup", type=int, default=10000)
    p.add_argument("--measure", type=int, default=10000)
    p.add_argument("--seed", type=int, default=1)

    p = sub.add_parser("sweep", help="offered-load sweep, averaged over "
                                     "seeds")
    common(p)
    p.add_argument("--config", default=None)
    p.add_argument("--pattern", choices=simulator.PATTERNS,
                   default="uniform")
    p.add_argument("--loads", default="",
                   help="comma-separated offered loads")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--load", type=float, default=0.1)
    p.add_argument("--packet-size", type=int, default=16)
    p.add_argument("--injectors", type=int, default=6)
    p.add_argument("--vcs", type=int, default=3)
    p.add_argument("--queue-capacity", type=int, default=4)
    p.add_argument("--warmup", type=int, default=10000)
    p.add_argument("--measure", type=int, default=10000)
    p.add_argument("--seed", type=int, default=1)

    return parser


_DISPATCH = {
    "analyze": _cmd_analyze,
    "symmetry": _cmd_symmetry,
    "route": _cmd_route,
    "verify": _cmd_verify,
    "lift": _cmd_lift,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 1
    except LatticeError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
