import os

import pytest

from reworkopt.cli import _parse_seeds, build_parser, main
from reworkopt.storage import (ARCHIVE_TAG, load_archive, load_instance,
                               load_manifest, load_report)


def test_seed_list_parsing():
    assert _parse_seeds("5:8") == (5, 6, 7)
    assert _parse_seeds("1,2,7") == (1, 2, 7)
    assert _parse_seeds("4") == (4,)
    with pytest.raises(Exception):
        _parse_seeds("")


def test_version_flag_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0


def test_generate_writes_a_canonical_instance(tmp_path, capsys):
    out = tmp_path / "case.txt"
    assert main(["generate", "--n-jobs", "12", "--seed", "5",
                 "--out", str(out)]) == 0
    assert "wrote" in capsys.readouterr().out
    inst = load_instance(out)
    assert inst.n_jobs == 12
    first = out.read_bytes()
    assert main(["generate", "--n-jobs", "12", "--seed", "5",
                 "--out", str(out)]) == 0
    assert out.read_bytes() == first


_RUN_ARGS = ["--n-jobs", "8", "--pop-size", "4", "--max-iter", "4",
             "--rounds", "2", "--label-reps", "1", "--det",
             "--seeds", "0,1"]


def _run_into(d):
    assert main(["run", *_RUN_ARGS, "--out", str(d)]) == 0


def test_run_report_pareto_gantt_round_trip(tmp_path, capsys):
    run_dir = tmp_path / "exp"
    _run_into(run_dir)
    out = capsys.readouterr().out
    assert "seed 0:" in out and "seed 1:" in out

    for seed in (0, 1):
        sd = run_dir / ("seed-%d" % seed)
        rows = load_archive(sd / "archive.tsv")
        assert rows
        man = load_manifest(sd / "manifest.txt")
        assert man["seed"] == seed
        assert (sd / "summary.txt").exists()
    per_seed, aggregate = load_report(run_dir / "report.txt")
    assert [s for s, *_ in per_seed] == [0, 1]
    assert set(aggregate) >= {"mean_hv", "mean_igd", "mean_rpd"}

    report_before = (run_dir / "report.txt").read_bytes()
    assert main(["report", "--run-dir", str(run_dir)]) == 0
    assert (run_dir / "report.txt").read_bytes() == report_before

    pooled = tmp_path / "front.tsv"
    assert main(["pareto", "--run-dir", str(run_dir), "--out", str(pooled)]) == 0
    rows = load_archive(pooled)
    assert rows
    pts = [(r[1], r[2]) for r in rows]
    for x, y in pts:
        assert not any(a <= x and b <= y and (a < x or b < y) for a, b in pts)

    svg = tmp_path / "plan.svg"
    assert main(["gantt", "--instance", str(run_dir / "instance.txt"),
                 "--seed", "0", "--online", "--out", str(svg)]) == 0
    head = svg.read_text().splitlines()[0]
    assert "reworkopt-gantt" in head


def test_runs_are_reproducible_across_directories(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    _run_into(a)
    _run_into(b)
    for seed in (0, 1):
        pa = a / ("seed-%d" % seed) / "archive.tsv"
        pb = b / ("seed-%d" % seed) / "archive.tsv"
        assert pa.read_bytes() == pb.read_bytes()
    assert (a / "report.txt").read_bytes() == (b / "report.txt").read_bytes()


def test_oracle_verb_checks_its_own_front(capsys):
    assert main(["oracle", "--seed", "0", "--n-jobs", "3", "--check"]) == 0
    out = capsys.readouterr().out
    assert "c_max=" in out
    assert "feasibility: ok" in out


def test_bench_verb_reports_backends(capsys):
    assert main(["bench", "--draws", "2000"]) == 0
    out = capsys.readouterr().out
    assert "gamma draws" in out
    assert "pure" in out


def test_parser_rejects_unknown_verb():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["conquer"])
