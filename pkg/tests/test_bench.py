import random

import gmpy2
import pytest

from dynhull import bench
from dynhull.determinants import adjoint, det_laplace
from dynhull.hull import HullConfig, convex_hull, volume
from dynhull.numkernel import SquareMatrix


def test_gen_matrix_is_deterministic():
    assert bench.gen_matrix(3, "d", 42, 5) == bench.gen_matrix(3, "d", 42, 5)
    assert bench.gen_matrix(3, "d", 42)[0] != bench.gen_matrix(3, "d", 43)[0]


def test_gen_matrix_updates_are_nonsingular():
    for scenario in ("b", "d"):
        A, ups = bench.gen_matrix(4, scenario, 1, 30)
        for M in bench.substituted_matrices(A, ups):
            assert det_laplace(M) != 0
    assert det_laplace(A) != 0


def test_scenario_b_values_are_doubles():
    A, _ = bench.gen_matrix(5, "b", 3)
    for c in A.cols:
        for x in c:
            num, den = int(x.numerator), int(x.denominator)
            assert den & (den - 1) == 0  # power of two
            m = num
            while m and m % 2 == 0:
                m //= 2
            assert abs(m) < 2 ** 53
            assert float(x) == x and abs(x) <= 100


def test_scenario_bit_sizes():
    rng = random.Random(0)
    for _ in range(5):
        c = bench.random_scalar(rng, "c")
        assert 9999 < int(abs(c)).bit_length() <= 10001
        a = bench.random_scalar(rng, "a")
        assert int(abs(a.numerator)).bit_length() == 10000
        assert int(a.denominator).bit_length() == 10000
        d = bench.random_scalar(rng, "d")
        assert -2 ** 31 <= d < 2 ** 31
    with pytest.raises(ValueError):
        bench.random_scalar(rng, "e")


def test_matrix_stream_roundtrip():
    for scenario in ("b", "d"):
        A, ups = bench.gen_matrix(3, scenario, 9, 4)
        assert bench.read_matrix_stream(bench.write_matrix_stream(A, ups)) == (A, ups)


def test_gen_points():
    ps = bench.gen_points(500, 2, "i", "d", 7)
    assert len(ps) == 500 and len(set(ps)) == 500
    assert all(abs(x) <= 100 for p in ps for x in p)
    assert ps == bench.gen_points(500, 2, "cube", "d", 7)
    ball = bench.gen_points(200, 3, "ball", "d", 1)
    assert all(sum(x * x for x in p) <= 101 ** 2 for p in ball)
    sph = bench.gen_points(200, 3, "sphere", "b", 1)
    assert sph.rational
    assert all(abs(sum(float(x) ** 2 for x in p) - 1e4) < 1e-6 for p in sph)
    simplex = bench.gen_points(4, 3, "cube", "d", 2)
    assert convex_hull(simplex, HullConfig(predicates="hashed")).cells
    with pytest.raises(ValueError):
        bench.gen_points(3, 3, "cube", "d", 0)
    with pytest.raises(ValueError):
        bench.gen_points(10, 3, "cube", "c", 0)


def test_result_hash_is_value_based():
    assert bench.result_hash([1, 2]) == bench.result_hash([gmpy2.mpq(2, 2), gmpy2.mpz(2)])
    assert bench.result_hash([1, 2]) != bench.result_hash([2, 1])


def test_bench_determinants_hashes_agree():
    recs = bench.bench_determinants([2, 3, 4], ["b", "d"], trials=2, n_updates=10, count_ops=True)
    by_key = {}
    for r in recs:
        assert r.status == "ok" and r.wall_time_ns > 0 and "total=" in r.op_counts
        by_key.setdefault((r.scenario, r.d, r.seed), set()).add(r.result_hash)
    assert len(by_key) == 12 and all(len(h) == 1 for h in by_key.values())
    assert bench.fastest(recs, 4, "d") in bench.DET_ALGORITHMS


def test_budget_skips_larger_dimensions():
    recs = bench.bench_determinants([6, 7, 8], ["d"], trials=1, algorithms=["laplace", "dyn_adj"],
                                    n_updates=5, budget_ms=0.0)
    laplace = [r for r in recs if r.algorithm == "laplace"]
    assert [r.status for r in laplace] == ["ok", "skipped", "skipped"]
    csv = bench.records_to_csv(recs)
    assert csv.startswith(bench.CSV_VERSION + "\n")
    rows = bench.read_csv(csv)
    assert len(rows) == len(recs)
    assert [r["wall_time_ns"] == "--" for r in rows if r["algorithm"] == "laplace"] == [False, True, True]


def test_bench_hull_is_deterministic():
    a = bench.bench_hull([12], [3], "sphere", "integer", seed=4)
    b = bench.bench_hull([12], [3], "sphere", "integer", seed=4)
    assert [r.extra["cells"] for r in a] == [r.extra["cells"] for r in b]
    assert len({r.result_hash for r in a}) == 1
    ps, _ = bench.hull_points(12, 3, "sphere", "d", 4)
    vol = volume(convex_hull(ps))
    assert a[0].extra["volume"] == f"{vol.numerator}/{vol.denominator}"


def test_bench_locate_flags():
    h, s = bench.bench_locate(15, 3, q_count=50, seed=1, check=True)
    assert h.extra["agree"] and h.extra["oracle_agree"]
    assert h.extra["speedup"] == pytest.approx(s.wall_time_ns / h.wall_time_ns, rel=0.01)
    assert h.result_hash == s.result_hash


def test_variant_configs():
    for v in bench.HULL_VARIANTS + ("hashed-inv", "auto"):
        cfg, _ = bench._variant_config(v)
        assert isinstance(cfg, HullConfig)
    with pytest.raises(ValueError):
        bench._variant_config("cdd")
