import math

import pytest

from reworkopt.harness import (ExperimentConfig, _padded_bounds,
                               collect_archives, nondominated, run_experiment,
                               score_archives, seed_dir)


def test_nondominated_filters_and_sorts():
    pts = [(3.0, 1.0), (1.0, 3.0), (2.0, 2.0), (2.0, 2.0), (2.5, 2.5)]
    assert nondominated(pts) == [(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]


def test_padded_bounds_widens_degenerate_axes():
    bounds = _padded_bounds([[(1.0, 5.0)], [(1.0, 7.0)]])
    assert bounds == ((1.0, 5.0), (2.0, 7.0))
    bounds = _padded_bounds([[(4.0, 2.0)]])
    assert bounds == ((4.0, 2.0), (5.0, 3.0))


def test_score_archives_golden():
    per_seed = {0: [(1.0, 3.0), (2.0, 2.0)], 1: [(3.0, 1.0)]}
    rows, agg, ref = score_archives(per_seed)
    assert ref == [(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]
    # normalized fronts: seed 0 -> {(0,1), (.5,.5)}, seed 1 -> {(1,0)}
    (s0, hv0, igd0, rpd0), (s1, hv1, igd1, rpd1) = rows
    assert (s0, s1) == (0, 1)
    assert hv0 == pytest.approx(0.25)
    assert igd0 == pytest.approx(math.sqrt(0.5) / 3)
    assert rpd0 == 0.0
    assert hv1 == 0.0
    assert igd1 == pytest.approx((math.sqrt(2) + math.sqrt(0.5)) / 3)
    assert rpd1 == pytest.approx(200.0)
    assert agg["mean_hv"] == pytest.approx(0.125)
    assert agg["mean_rpd"] == pytest.approx(100.0)
    assert agg["reference_size"] == 3.0


def test_score_archives_empty_seed_and_reference():
    rows, agg, _ = score_archives({0: [(1.0, 1.0), (2.0, 0.5)], 1: []})
    assert rows[1] == (1, 0.0, float("inf"), float("inf"))
    assert math.isinf(agg["mean_igd"])
    with pytest.raises(ValueError):
        score_archives({0: []})


def test_score_archives_accepts_external_reference():
    per_seed = {0: [(2.0, 2.0)]}
    rows, _, ref = score_archives(per_seed, reference=[(1.0, 1.0), (4.0, 4.0)])
    assert ref == [(1.0, 1.0), (4.0, 4.0)]
    # seed best c_max 2.0 against reference best 1.0
    assert rows[0][3] == pytest.approx(100.0)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(seeds=())
    with pytest.raises(ValueError):
        ExperimentConfig(n_jobs=0)
    cfg = ExperimentConfig(n_jobs=0, instance_path="whatever.txt")
    assert cfg.instance_path == "whatever.txt"


def _tiny_cfg(outdir, **kw):
    base = dict(n_jobs=8, gen_seed=3, pop_size=4, max_iter=4, n_rounds=2,
                label_reps=1, det=True, seeds=(0, 1), outdir=str(outdir))
    base.update(kw)
    return ExperimentConfig(**base)


def test_run_experiment_round_trips_through_collect(tmp_path):
    cfg = _tiny_cfg(tmp_path / "solo")
    results, report_path = run_experiment(cfg)
    assert set(results) == {0, 1}
    assert report_path.endswith("report.txt")
    back = collect_archives(cfg.outdir)
    assert set(back) == {0, 1}
    for seed, rows in results.items():
        assert back[seed] == [(r[1], r[2]) for r in rows]


def test_parallel_seeds_match_serial(tmp_path):
    serial = _tiny_cfg(tmp_path / "serial")
    run_experiment(serial)
    parallel = _tiny_cfg(tmp_path / "parallel", jobs=2)
    run_experiment(parallel)
    for seed in (0, 1):
        a = open(seed_dir(serial.outdir, seed) + "/archive.tsv", "rb").read()
        b = open(seed_dir(parallel.outdir, seed) + "/archive.tsv", "rb").read()
        assert a == b
