"""Benchmark and command-line namespace: re-exports of :mod:`dynhull.bench` and :mod:`dynhull.cli`."""

from .bench import *  # noqa: F401,F403
from .bench import (bench_determinants, bench_hull, bench_locate, gen_matrix, gen_points,
                    records_to_csv, result_hash)
from .cli import build_parser, main

__all__ = ["bench_determinants", "bench_hull", "bench_locate", "gen_matrix", "gen_points",
           "records_to_csv", "result_hash", "build_parser", "main"]
