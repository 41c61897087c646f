"""Command-line front end: ``dynhull <subcommand> [options]``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import bench
from .errors import DegenerateInput
from .hull import OUTSIDE, HullConfig, convex_hull, hull_stats, volume
from .numkernel import format_scalar
from .pointset import read_pointset


def _int_list(text: str) -> list[int]:
    """``"3-6"`` -> [3, 4, 5, 6]; ``"3,5,8"`` -> [3, 5, 8]."""
    out = []
    for part in text.split(","):
        if "-" in part.strip("-"):
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen_points(args) -> int:
    if args.general_position:
        ps, _ = bench.hull_points(args.n, args.dim, args.dist, args.scenario, args.seed)
    else:
        ps = bench.gen_points(args.n, args.dim, args.dist, args.scenario, args.seed)
    _emit(ps.to_text(), args.out)
    return 0


def _cmd_gen_matrix(args) -> int:
    A, updates = bench.gen_matrix(args.dim, args.scenario, args.seed, args.n)
    _emit(bench.write_matrix_stream(A, updates), args.out)
    return 0


def _cmd_bench_det(args) -> int:
    algos = args.algo.split(",") if args.algo else list(bench.DET_ALGORITHMS)
    recs = bench.bench_determinants(_int_list(args.dim), args.scenario.split(","), args.trials,
                                    algos, args.n, args.seed, args.budget_ms, args.count_ops)
    _emit(bench.records_to_csv(recs), args.out)
    return 0


def _cmd_bench_hull(args) -> int:
    variants = args.algo.split(",") if args.algo else list(bench.HULL_VARIANTS)
    kind = "integer" if args.scenario == "d" else "rational"
    recs = bench.bench_hull(_int_list(args.n), _int_list(args.dim), args.dist, kind, variants,
                            args.seed, args.trials, args.budget_ms, args.threshold_dim)
    _emit(bench.records_to_csv(recs), args.out)
    return 0


def _cmd_bench_locate(args) -> int:
    recs = bench.bench_locate(args.n, args.dim, args.dist, args.query_dist, args.queries,
                              args.seed, args.budget_ms, args.check)
    _emit(bench.records_to_csv(recs), args.out)
    return 0


def _hull_config(args) -> HullConfig:
    return HullConfig(predicates=args.algo, threshold_dim=args.threshold_dim,
                      insertion=args.insertion, allow_degenerate=args.allow_degenerate)


def _cmd_hull(args) -> int:
    ps = read_pointset(args.points)
    try:
        t = convex_hull(ps, _hull_config(args))
    except DegenerateInput as e:
        print(f"error: degenerate input: {e}", file=sys.stderr)
        return 2
    vol = volume(t)
    st = hull_stats(t)
    lines = [f"vertices {' '.join(map(str, t.hull_vertices()))}",
             f"volume {format_scalar(vol)}",
             f"cells {st['t_cells']}",
             f"facets {st['n_facets']}"]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_locate(args) -> int:
    ps = read_pointset(args.points)
    qs = read_pointset(args.queries)
    if qs.dim != ps.dim:
        print(f"error: queries have dimension {qs.dim}, points {ps.dim}", file=sys.stderr)
        return 2
    try:
        t = convex_hull(ps, _hull_config(args))
    except DegenerateInput as e:
        print(f"error: degenerate input: {e}", file=sys.stderr)
        return 2
    mode = "auto" if args.algo == "auto" else ("scratch" if args.algo == "laplace" else "hashed")
    lines = []
    for q in qs:
        cid = t.locate(q, mode)
        if cid is OUTSIDE:
            lines.append("outside")
        else:
            lines.append(f"{cid} {' '.join(map(str, t.cells[cid].vertices))}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynhull", description="Exact dynamic determinants, "
                                "convex hulls and point location.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, dim_type=int, n_type=int, n_default=None, dim_default=None):
        sp.add_argument("--dim", type=dim_type, default=dim_default, required=dim_default is None)
        sp.add_argument("--n", type=n_type, default=n_default, required=n_default is None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output path (default: standard output)")

    sp = sub.add_parser("gen-points", help="write a random pointset")
    common(sp)
    sp.add_argument("--dist", choices=["cube", "ball", "sphere"], default="cube")
    sp.add_argument("--scenario", choices=["b", "d"], default="d")
    sp.add_argument("--general-position", action="store_true",
                    help="redraw with derived seeds until a strict hull build succeeds")
    sp.set_defaults(func=_cmd_gen_points)

    sp = sub.add_parser("gen-matrix", help="write a random matrix and an update stream")
    common(sp, n_default=0)
    sp.add_argument("--scenario", choices=list(bench.SCENARIOS), default="d")
    sp.set_defaults(func=_cmd_gen_matrix)

    sp = sub.add_parser("bench-det", help="determinant benchmark (CSV)")
    common(sp, dim_type=str, n_default=100, dim_default="2-10")
    sp.add_argument("--scenario", default="d", help="comma separated subset of a,b,c,d")
    sp.add_argument("--algo", default=None, help="comma separated subset of "
                    + ",".join(bench.DET_ALGORITHMS))
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--budget-ms", type=float, default=5000.0)
    sp.add_argument("--count-ops", action="store_true")
    sp.set_defaults(func=_cmd_bench_det)

    sp = sub.add_parser("bench-hull", help="convex hull benchmark (CSV)")
    common(sp, dim_type=str, n_type=str)
    sp.add_argument("--dist", choices=["cube", "ball", "sphere"], default="sphere")
    sp.add_argument("--scenario", choices=["b", "d"], default="d")
    sp.add_argument("--algo", default=None, help="comma separated subset of "
                    + ",".join(bench.HULL_VARIANTS + ("hashed-inv", "auto")))
    sp.add_argument("--threshold-dim", type=int, default=6)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--budget-ms", type=float, default=60000.0)
    sp.set_defaults(func=_cmd_bench_hull)

    sp = sub.add_parser("bench-locate", help="point location benchmark (CSV)")
    common(sp)
    sp.add_argument("--dist", choices=["cube", "ball", "sphere"], default="sphere",
                    help="distribution of the hull points")
    sp.add_argument("--query-dist", choices=["cube", "ball", "sphere"], default="cube")
    sp.add_argument("--queries", type=int, default=1000)
    sp.add_argument("--budget-ms", type=float, default=60000.0)
    sp.add_argument("--check", action="store_true", help="compare against the exhaustive oracle")
    sp.set_defaults(func=_cmd_bench_locate)

    for name, fn, hlp in (("hull", _cmd_hull, "hull vertices and volume of a pointset file"),
                          ("locate", _cmd_locate, "locate query points in a hull")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("points")
        if name == "locate":
            sp.add_argument("queries")
        sp.add_argument("--algo", choices=["auto", "hashed", "laplace"], default="auto")
        sp.add_argument("--threshold-dim", type=int, default=6)
        sp.add_argument("--insertion", choices=["lex", "locate"], default="lex")
        sp.add_argument("--allow-degenerate", action="store_true")
        sp.add_argument("--out", default=None)
        sp.set_defaults(func=fn)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
