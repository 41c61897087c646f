"""Input generators and benchmark runners.

Every generator is a pure function of its parameters and seed.  Coefficient
scenarios:

* ``a``: rationals whose numerator and denominator both have exactly 10000 bits
* ``b``: rationals converted exactly from doubles drawn uniformly in [-100, 100)
* ``c``: integers of exactly 10000 bits
* ``d``: signed 32-bit integers

Point distributions are ``cube`` (uniform in [-100, 100]^d), ``ball``
(uniform in the radius-100 ball) and ``sphere`` (on its surface).  Points
are drawn in floating point and then rounded to integers (scenario ``d``)
or converted exactly to rationals (scenario ``b``), so sphere points are
near the sphere rather than on it.

Benchmark results are emitted as :class:`BenchRecord` rows.  The
``result_hash`` column digests the exact results, so agreement between
algorithms can be checked from the CSV alone.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import gmpy2

from . import determinants
from .dyndet import ColumnUpdate, DynAdjState, DynInvState
from .errors import DegenerateInput, SingularMatrix
from .hull import ExhaustiveLocator, HullConfig, OUTSIDE, convex_hull, hull_stats, volume
from .numkernel import OpCounter, SquareMatrix, counted, format_scalar, parse_scalar, to_rat
from .pointset import PointSet

CSV_VERSION = "# dynhull-bench v1"
CSV_NOTES = ("# times in ns per determinant, per build or per query batch; "
             "memory estimates count 8 bytes per 64-bit limb plus 80 bytes per cache entry")

SCENARIOS = ("a", "b", "c", "d")
DISTRIBUTIONS = {"cube": "cube", "i": "cube", "ball": "ball", "ii": "ball",
                 "sphere": "sphere", "iii": "sphere"}
DET_ALGORITHMS = ("laplace", "bird", "lu", "dyn_inv", "dyn_adj")
HULL_VARIANTS = ("hashed-z", "hashed-q", "laplace")

BIG_BITS = 10000
RADIUS = 100


# -- scalars -----------------------------------------------------------------

def _exact_bits(rng: random.Random, bits: int) -> int:
    return rng.getrandbits(bits - 1) | (1 << (bits - 1))


def random_scalar(rng: random.Random, scenario: str):
    if scenario == "a":
        while True:
            num, den = _exact_bits(rng, BIG_BITS), _exact_bits(rng, BIG_BITS)
            if math.gcd(num, den) == 1:
                break
        return gmpy2.mpq(-num if rng.random() < 0.5 else num, den)
    if scenario == "b":
        return double_to_rat(rng.uniform(-RADIUS, RADIUS))
    if scenario == "c":
        v = _exact_bits(rng, BIG_BITS)
        return gmpy2.mpz(-v if rng.random() < 0.5 else v)
    if scenario == "d":
        return gmpy2.mpz(rng.randint(-2 ** 31, 2 ** 31 - 1))
    raise ValueError(f"unknown scenario {scenario!r}")


def double_to_rat(x: float):
    """Exact rational value of a double, ``m * 2**p``."""
    f = Fraction(x)
    return gmpy2.mpq(f.numerator, f.denominator)


def _is_field_scenario(scenario: str) -> bool:
    return scenario in ("a", "b")


# -- matrices ----------------------------------------------------------------

def gen_matrix(d: int, scenario: str, seed: int, n_updates: int = 0):
    """Random nonsingular ``d x d`` matrix and a stream of column updates.

    Every update is non-singular with respect to the matrix its predecessors
    produce; singular draws are rejected and redrawn.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    rng = random.Random(f"matrix:{d}:{scenario}:{seed}")
    field_kind = _is_field_scenario(scenario)
    state_cls = DynInvState if field_kind else DynAdjState
    while True:
        A = SquareMatrix([[random_scalar(rng, scenario) for _ in range(d)] for _ in range(d)])
        try:
            state = state_cls.from_matrix(A)
            break
        except SingularMatrix:
            continue
    updates = []
    while len(updates) < n_updates:
        upd = ColumnUpdate(rng.randrange(d), [random_scalar(rng, scenario) for _ in range(d)])
        if state.peek_det(upd) == 0:
            continue
        state = state.update(upd)
        updates.append(upd)
    return A, updates


def substituted_matrices(A: SquareMatrix, updates: Iterable[ColumnUpdate]) -> list:
    out = []
    for upd in updates:
        A = A.with_column(upd.i, upd.u)
        out.append(A)
    return out


def write_matrix_stream(A: SquareMatrix, updates: Sequence[ColumnUpdate]) -> str:
    """Text form: ``d m``, the ``d`` rows of ``A``, then ``m`` lines ``i u_0 ... u_{d-1}``."""
    lines = [f"{A.dim} {len(updates)}"]
    lines += [" ".join(map(format_scalar, r)) for r in A.rows]
    lines += [" ".join([str(u.i)] + [format_scalar(x) for x in u.u]) for u in updates]
    return "\n".join(lines) + "\n"


def read_matrix_stream(text: str):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    d, m = map(int, lines[0].split())
    A = SquareMatrix.from_rows([[parse_scalar(x) for x in ln.split()] for ln in lines[1:d + 1]])
    updates = []
    for ln in lines[d + 1:d + 1 + m]:
        f = ln.split()
        updates.append(ColumnUpdate(int(f[0]), [parse_scalar(x) for x in f[1:]]))
    return A, updates


# -- points ------------------------------------------------------------------

def _float_point(rng: random.Random, d: int, dist: str) -> list:
    if dist == "cube":
        return [rng.uniform(-RADIUS, RADIUS) for _ in range(d)]
    while True:
        g = [rng.gauss(0.0, 1.0) for _ in range(d)]
        norm = math.sqrt(sum(x * x for x in g))
        if norm > 1e-12:
            break
    r = RADIUS if dist == "sphere" else RADIUS * rng.random() ** (1.0 / d)
    return [r * x / norm for x in g]


def gen_points(n: int, d: int, dist: str, scenario: str, seed: int) -> PointSet:
    """``n`` distinct points in dimension ``d``.

    Only scenarios ``b`` (rationals from doubles) and ``d`` (integers) apply
    to points.  Duplicates are redrawn and a set of exactly ``d+1`` points is
    redrawn until it spans a simplex.
    """
    if n < d + 1:
        raise ValueError(f"need at least d+1 = {d + 1} points")
    dist = DISTRIBUTIONS[dist]
    if scenario not in ("b", "d"):
        raise ValueError("point generators support scenarios 'b' and 'd' only")
    rng = random.Random(f"points:{n}:{d}:{dist}:{scenario}:{seed}")
    conv = double_to_rat if scenario == "b" else (lambda x: gmpy2.mpz(round(x)))
    while True:
        seen = set()
        pts = []
        while len(pts) < n:
            p = tuple(conv(x) for x in _float_point(rng, d, dist))
            if p not in seen:
                seen.add(p)
                pts.append(p)
        ps = PointSet.from_coords(pts, d)
        if n > d + 1 or determinants.det_bareiss(
                SquareMatrix._trusted(tuple(tuple(map(to_rat, p)) + (to_rat(1),) for p in pts))) != 0:
            return ps


def as_rational(ps: PointSet) -> PointSet:
    return ps if ps.rational else PointSet.from_coords(
        [[to_rat(x) for x in p] for p in ps], ps.dim)


# -- records -----------------------------------------------------------------

@dataclass
class BenchRecord:
    algorithm: str
    d: int
    n: int
    scenario: str = ""
    distribution: str = ""
    seed: int = 0
    wall_time_ns: float | None = None
    op_counts: str = ""
    peak_mem_bytes_estimate: int | None = None
    result_hash: str = ""
    status: str = "ok"
    extra: dict = field(default_factory=dict)

    def row(self) -> dict:
        r = asdict(self)
        r["extra"] = ";".join(f"{k}={v}" for k, v in self.extra.items())
        if r["wall_time_ns"] is None:
            r["wall_time_ns"] = "--"
        if r["peak_mem_bytes_estimate"] is None:
            r["peak_mem_bytes_estimate"] = "--"
        return r


FIELDS = list(BenchRecord.__dataclass_fields__)


def records_to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n" + CSV_NOTES + "\n")
    w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def result_hash(values: Iterable) -> str:
    h = hashlib.sha256()
    for v in values:
        q = to_rat(v)
        h.update(f"{q.numerator}/{q.denominator};".encode())
    return h.hexdigest()[:16]


# -- determinant benchmark -----------------------------------------------------

def _static_runner(name: str) -> Callable:
    fn = {"laplace": determinants.det_laplace, "bird": determinants.det_bird,
          "lu": determinants.det_lu}[name]

    def run(A0, updates, mats):
        t0 = time.perf_counter_ns()
        dets = [fn(M) for M in mats]
        return time.perf_counter_ns() - t0, dets, max(M.nbytes() for M in mats)
    return run


def _dynamic_runner(name: str) -> Callable:
    cls = DynInvState if name == "dyn_inv" else DynAdjState

    def run(A0, updates, mats):
        s = cls.from_matrix(A0)
        mem = s.nbytes()
        dets = []
        t0 = time.perf_counter_ns()
        for upd in updates:
            s = s.update(upd)
            dets.append(s.det)
        elapsed = time.perf_counter_ns() - t0
        return elapsed, dets, max(mem, s.nbytes())
    return run


def _count_ops(name: str, A0: SquareMatrix, upd: ColumnUpdate) -> str:
    ctr = OpCounter()
    if name in ("dyn_inv", "dyn_adj"):
        s = (DynInvState if name == "dyn_inv" else DynAdjState).from_matrix(A0)
        s = type(s)(counted(s.A, ctr), counted(getattr(s, "inv" if name == "dyn_inv" else "adj"), ctr),
                    counted(s.det, ctr))
        s.update(ColumnUpdate(upd.i, counted(list(upd.u), ctr)))
    else:
        M = counted(A0.with_column(upd.i, upd.u), ctr)
        {"laplace": determinants.det_laplace, "bird": determinants.det_bird,
         "lu": determinants.det_lu}[name](M)
    return f"adds={ctr.adds} muls={ctr.muls} divs={ctr.divs} total={ctr.total}"


def bench_determinants(dims: Sequence[int], scenarios: Sequence[str] = ("d",), trials: int = 3,
                       algorithms: Sequence[str] = DET_ALGORITHMS, n_updates: int = 100,
                       seed: int = 0, budget_ms: float = 5000.0,
                       count_ops: bool = False, repeats: int = 1) -> list[BenchRecord]:
    """Time every algorithm on batches of ``n_updates`` chained column updates.

    Each trial draws a fresh base matrix.  Dynamic algorithms start from an
    untimed initialisation and are timed over the update chain; static
    algorithms recompute each substituted matrix from scratch.  The recorded
    time is the average per determinant, taking the fastest of ``repeats``
    runs over the same batch.  Once an algorithm spends more than
    ``budget_ms`` on one dimension it is marked ``skipped`` for the larger
    dimensions of that scenario.
    """
    runners = {a: (_dynamic_runner(a) if a.startswith("dyn") else _static_runner(a))
               for a in algorithms}
    records = []
    for scenario in scenarios:
        skipped: set = set()
        for d in dims:
            spent = {a: 0.0 for a in algorithms}
            for trial in range(trials):
                tseed = seed * 1000003 + trial
                A0, updates = gen_matrix(d, scenario, tseed, n_updates)
                mats = substituted_matrices(A0, updates)
                for a in algorithms:
                    if a in skipped:
                        if trial == 0:
                            records.append(BenchRecord(a, d, n_updates, scenario, "", tseed,
                                                       status="skipped"))
                        continue
                    if spent[a] > budget_ms * 1e6:
                        continue
                    elapsed = math.inf
                    for _ in range(repeats):
                        e, dets, mem = runners[a](A0, updates, mats)
                        spent[a] += e
                        elapsed = min(elapsed, e)
                    ops = _count_ops(a, A0, updates[0]) if count_ops and updates else ""
                    records.append(BenchRecord(a, d, n_updates, scenario, "", tseed,
                                               elapsed / max(1, len(dets)), ops, mem,
                                               result_hash(dets)))
            for a in algorithms:
                if spent[a] > budget_ms * 1e6:
                    skipped.add(a)
    return records


def fastest(records: Iterable[BenchRecord], d: int, scenario: str) -> str:
    """Algorithm with the lowest mean time per determinant for ``(d, scenario)``.

    Only algorithms that completed every trial batch of the other
    algorithms take part.
    """
    times: dict = {}
    for r in records:
        if r.d == d and r.scenario == scenario and r.status == "ok":
            times.setdefault(r.algorithm, []).append(r.wall_time_ns)
    full = max(map(len, times.values()))
    means = {a: sum(v) / len(v) for a, v in times.items() if len(v) == full}
    return min(means, key=means.get)


# -- hull benchmark ----------------------------------------------------------

def _variant_config(variant: str, threshold_dim: int = 6) -> tuple[HullConfig, bool]:
    """Hull configuration and whether the points are converted to rationals."""
    if variant == "hashed-z":
        return HullConfig(predicates="hashed"), False
    if variant == "hashed-q":
        return HullConfig(predicates="hashed"), True
    if variant == "hashed-inv":
        return HullConfig(predicates="hashed", state_kind="inv"), True
    if variant == "laplace":
        return HullConfig(predicates="laplace"), False
    if variant == "auto":
        return HullConfig(threshold_dim=threshold_dim), False
    raise ValueError(f"unknown hull variant {variant!r}")


def hull_points(n: int, d: int, dist: str, scenario: str, seed: int, max_tries: int = 50) -> tuple:
    """Points in general position enough for a strict hull build.

    Draws with successive seeds until a strict check build succeeds and
    returns ``(pointset, seed_used)``.
    """
    for k in range(max_tries):
        s = seed + 7919 * k
        ps = gen_points(n, d, dist, scenario, s)
        try:
            convex_hull(ps, HullConfig(predicates="hashed"))
        except DegenerateInput:
            continue
        return ps, s
    raise DegenerateInput(f"no non-degenerate draw after {max_tries} attempts")


def bench_hull(n_list: Sequence[int], d_list: Sequence[int], distribution: str = "sphere",
               scalar_kind: str = "integer", variants: Sequence[str] = HULL_VARIANTS,
               seed: int = 0, trials: int = 1, budget_ms: float = 60000.0,
               threshold_dim: int = 6) -> list[BenchRecord]:
    """Build the hull of each ``(n, d)`` input with every variant."""
    scenario = "d" if scalar_kind == "integer" else "b"
    records = []
    over: set = set()
    for d in d_list:
        for n in n_list:
            ps, used = hull_points(n, d, distribution, scenario, seed)
            for v in variants:
                if v in over:
                    records.append(BenchRecord(v, d, n, scenario, distribution, used, status="skipped"))
                    continue
                cfg, rational = _variant_config(v, threshold_dim)
                pts = as_rational(ps) if rational else ps
                best = math.inf
                try:
                    for _ in range(trials):
                        t0 = time.perf_counter_ns()
                        t = convex_hull(pts, cfg)
                        best = min(best, time.perf_counter_ns() - t0)
                except MemoryError:
                    records.append(BenchRecord(v, d, n, scenario, distribution, used,
                                               status="out-of-budget"))
                    over.add(v)
                    continue
                st = hull_stats(t)
                vol = volume(t)
                verts = t.hull_vertices()
                records.append(BenchRecord(
                    v, d, n, scenario, distribution, used, best, "",
                    st["cache_bytes_estimate"], result_hash([vol] + verts),
                    extra={"cells": st["t_cells"], "facets": st["n_facets"],
                           "cache_entries": st["cache_entries"], "hull_vertices": len(verts),
                           "volume": f"{vol.numerator}/{vol.denominator}"}))
                if best > budget_ms * 1e6:
                    over.add(v)
    return records


# -- point location benchmark ----------------------------------------------

def _query_coords(q_count: int, d: int, dist: str, seed: int) -> list:
    # queries need not be distinct, so draw them directly
    rng = random.Random(f"queries:{q_count}:{d}:{dist}:{seed}")
    dist = DISTRIBUTIONS[dist]
    return [tuple(gmpy2.mpz(round(x)) for x in _float_point(rng, d, dist)) for _ in range(q_count)]


def time_queries(t, queries: Sequence, mode: str, budget_ms: float = math.inf) -> tuple:
    """Locate ``queries`` in order; returns ``(answers, elapsed_ns)``.

    Stops early once ``budget_ms`` is spent; ``answers`` then covers a prefix.
    """
    t.reset_walk()
    answers = []
    t0 = time.perf_counter_ns()
    limit = t0 + budget_ms * 1e6
    for q in queries:
        answers.append(t.locate(q, mode))
        if time.perf_counter_ns() > limit:
            break
    return answers, time.perf_counter_ns() - t0


def bench_locate(n: int, d: int, build_distribution: str = "sphere",
                 query_distribution: str = "cube", q_count: int = 1000, seed: int = 0,
                 budget_ms: float = 60000.0, check: bool = False) -> list[BenchRecord]:
    """Preprocessing, memory and query times for hashed and scratch predicates."""
    ps, used = hull_points(n, d, build_distribution, "d", seed)
    t0 = time.perf_counter_ns()
    t = convex_hull(ps, HullConfig(predicates="hashed"))
    build_ns = time.perf_counter_ns() - t0
    st = hull_stats(t)
    queries = _query_coords(q_count, d, query_distribution, used)
    hashed, h_ns = time_queries(t, queries, "hashed", budget_ms)
    scratch, s_ns = time_queries(t, queries, "scratch", budget_ms)
    h_per = h_ns / len(hashed)
    s_per = s_ns / len(scratch)
    k = min(len(hashed), len(scratch))
    agree = hashed[:k] == scratch[:k]
    extra = {"build_ns": build_ns, "cells": st["t_cells"], "queries": q_count,
             "answered_hashed": len(hashed), "answered_scratch": len(scratch),
             "agree": agree, "speedup": round(s_per / h_per, 2)}
    if check:
        oracle = ExhaustiveLocator(t)
        extra["oracle_agree"] = all(
            (a is OUTSIDE and not cs) or (a is not OUTSIDE and a in cs)
            for a, cs in zip(hashed, map(oracle.containing_cells, queries)))
    digest = result_hash([-1 if a is OUTSIDE else a for a in hashed])
    common = dict(n=n, scenario="d", distribution=f"{build_distribution}/{query_distribution}",
                  seed=used, peak_mem_bytes_estimate=st["cache_bytes_estimate"], extra=extra)
    return [
        BenchRecord("locate-hashed", d, wall_time_ns=h_per * q_count, result_hash=digest, **common),
        BenchRecord("locate-scratch", d, wall_time_ns=s_per * q_count,
                    result_hash=result_hash([-1 if a is OUTSIDE else a for a in scratch]),
                    status="ok" if len(scratch) == q_count else "partial", **common),
    ]
