import math
import random

import numpy as np
import pytest

import wcr


def full_counters(scale=1.0):
    instr = 1_000_000_000
    cycles = int(800_000_000 * scale)
    f = lambda x: int(instr * x)
    return {
        "instructions": instr,  # alias of instructions_retired
        "cycles": cycles,
        "branch_instructions": f(0.18), "integer_instructions": f(0.30), "fp_instructions": f(0.02),
        "load_instructions": f(0.25), "store_instructions": f(0.10),
        "l1i_misses": f(0.015), "l1i_accesses": f(0.5), "l1d_misses": f(0.02), "l1d_accesses": f(0.35),
        "l2_misses": f(0.005), "l2_accesses": f(0.035), "l3_misses": f(0.001), "l3_accesses": f(0.005),
        "l2_writebacks": f(0.002), "itlb_misses": f(0.0005), "dtlb_load_misses": f(0.001),
        "dtlb_store_misses": f(0.0004), "itlb_walk_cycles": cycles // 100, "dtlb_walk_cycles": cycles // 50,
        "mispredicted_branches": f(0.005), "taken_branches": f(0.1), "indirect_branches": f(0.01),
        "baclears": f(0.002), "uops_retired": f(1.2), "fetch_stall_cycles": cycles // 4,
        "rat_stall_cycles": cycles // 10, "load_buffer_full_cycles": cycles // 40,
        "store_buffer_full_cycles": cycles // 30, "rs_full_cycles": cycles // 8, "rob_full_cycles": cycles // 12,
        "offcore_data_reads": f(0.003), "offcore_rfos": f(0.001), "offcore_code_reads": f(0.0008),
        "snoop_hits": 40_000, "snoop_hitm": 10_000, "snoop_responses": 100_000,
        "offcore_outstanding_occupancy": cycles, "offcore_outstanding_cycles": cycles // 3,
        "uops_executed": f(1.3), "multi_issue_cycles": cycles // 2, "fp_operations": f(0.03),
        "offcore_bytes": f(0.3),
    }


def test_schema():
    metrics = wcr.schema_metrics()
    assert len(metrics) == 45
    assert len({group for _, group, _, _ in metrics}) == 8
    assert wcr.schema_version()


def test_derive_metrics():
    c = full_counters()
    c["instructions"] = 1_000_000_000
    c["l1i_misses"] = 15_000_000
    m = wcr.derive_metrics(c)
    assert m["l1i_mpki"] == 15.0
    assert m["ipc"] == pytest.approx(1.25)
    mix = sum(m[k] for k in ["branch_ratio", "integer_ratio", "fp_ratio", "load_ratio", "store_ratio", "other_ratio"])
    assert abs(mix - 1.0) < 1e-9
    del c["cycles"]
    with pytest.raises(wcr.ValidationError):
        wcr.derive_metrics(c)


def test_classification():
    assert wcr.classify_system_behavior(0.90) == "CpuIntensive"
    assert wcr.classify_system_behavior(0.85) == "Hybrid"
    assert wcr.classify_system_behavior(0.5, weighted_io_ratio=12) == "IoIntensive"
    assert wcr.classify_data_behavior(1000, 1000, 0) == ("Equal", "NoIntermediate")
    assert wcr.classify_data_behavior(1000, 5)[0] == "MuchLess"
    with pytest.raises(ValueError):
        wcr.classify_data_behavior(0, 1)


def test_integer_breakdown_and_share():
    assert wcr.integer_breakdown(64, 18, 18) == pytest.approx((0.64, 0.18, 0.18))
    without, with_branch = wcr.data_movement_share(0.19, 0.38, 0.0, 0.30, 0.12, 0.64, 0.18, 0.18)
    assert without == pytest.approx(0.7316)
    assert with_branch == pytest.approx(0.9216)


def test_pca_and_kmeans():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(40, 4)) * [1, 2, 3, 4]
    z, kept, dropped = wcr.normalize_zscore(x)
    assert kept == [0, 1, 2, 3] and dropped == []
    assert np.allclose(z.mean(axis=0), 0) and np.allclose(z.std(axis=0, ddof=1), 1)
    pca = wcr.fit_pca(z, 1.0)
    comps = pca["components"]
    assert np.allclose(comps @ comps.T, np.eye(4), atol=1e-9)

    pts = np.array([[0, 0], [0, 1], [10, 10], [10, 11]], dtype=float)
    c = wcr.kmeans(pts, 2, seed=42)
    assert c["assignments"][0] == c["assignments"][1] != c["assignments"][2]
    assert c["inertia"] == pytest.approx(1.0)
    assert wcr.choose_k(pts, 1, 4) in (2, 4)
    reps = wcr.select_representatives(pts, c["assignments"], c["centroids"], ["a", "b", "c", "d"])
    assert sorted(reps) == ["a", "c"]


def test_reduce_planted():
    rng = np.random.default_rng(1)
    centers = rng.uniform(0.2, 0.8, size=(3, 45))
    rows = np.vstack([centers[i % 3] + rng.normal(0, 0.01, 45) for i in range(30)])
    ids = [f"w{i:02d}" for i in range(30)]
    r = wcr.reduce(ids, rows, k=3)
    assert len(r["representatives"]) == 3
    assert sorted(r["cluster_sizes"]) == [10, 10, 10]


def test_cache_simulation():
    random.seed(3)
    addrs = [random.randrange(0, 4096) * 64 for _ in range(5000)]
    kinds = [random.randrange(3) for _ in addrs]
    acc, misses, ratio = wcr.simulate(addrs, kinds, 16 * 1024, ways=None)
    assert acc == 5000 and 0 < ratio <= 1
    assert misses == wcr.stack_distance_oracle(addrs, kinds, 256, 1)

    loop = [0x400000 + 64 * (i % 2048) for i in range(2048 * 200)]
    curve = wcr.sweep_capacities(loop, [wcr.IFETCH] * len(loop), kind="instruction")
    assert len(curve) == 10
    assert wcr.estimate_footprint(curve) == 128 * 1024
    assert wcr.estimate_footprint([(16384, 0.5)]) is None
