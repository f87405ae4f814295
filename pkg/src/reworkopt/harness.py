"""Seeded experiment runner.

Runs the optimizer over a list of seeds, persists one directory per
seed (manifest, archive, summary) and an aggregate indicator report.
Outputs carry no timestamps, so identical configs rerun to identical
bytes; seeds can execute in parallel because no two seeds share a file.
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import asdict, dataclass

from . import __version__, storage
from .instances import generate_instance
from .metrics import bounds_of, hypervolume, igd, normalize, rpd
from .orchestrator import DpeiaConfig, dpeia


@dataclass
class ExperimentConfig:
    """Everything a run needs; benchmark sizes are 100/200/300 jobs with
    quality spread 0.03/0.06/0.09, but any positive size is accepted."""

    n_jobs: int = 100
    sigma_q: float = 0.06
    type_mix: float = 0.5
    coeff_set: str = "alternate"
    gen_seed: int = 0
    instance_path: str | None = None    # set: load this file, ignore the generator spec
    pop_size: int = 20
    max_iter: int = 60
    n_rounds: int = 4
    elites: int | None = None
    varpi: float = 0.5
    mu_c: float = 0.0
    sigma_c: float = 1.13
    label_reps: int = 5
    det: bool = False
    seeds: tuple[int, ...] = (0,)
    outdir: str = "runs"
    jobs: int = 1                       # concurrent seeds
    reference_path: str | None = None   # archive file with reference points

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("need at least one seed")
        if self.instance_path is None and self.n_jobs < 1:
            raise ValueError("generator spec needs a positive job count")

    def algo(self) -> DpeiaConfig:
        return DpeiaConfig(pop_size=self.pop_size, max_iter=self.max_iter,
                           n_rounds=self.n_rounds, varpi=self.varpi,
                           mu_c=self.mu_c, sigma_c=self.sigma_c,
                           elites=self.elites, label_reps=self.label_reps,
                           det=self.det)


def resolve_instance(cfg: ExperimentConfig):
    if cfg.instance_path is not None:
        return storage.load_instance(cfg.instance_path)
    return generate_instance(cfg.n_jobs, cfg.gen_seed, sigma_q=cfg.sigma_q,
                             coeff_set=cfg.coeff_set, type_mix=cfg.type_mix)


def seed_dir(outdir, seed: int) -> str:
    return os.path.join(outdir, "seed-%d" % seed)


def _run_one_seed(inst, cfg: ExperimentConfig, seed: int):
    res = dpeia(inst, cfg.algo(), seed)
    rows = [(seed, e.objectives.makespan, e.objectives.maint_cost, e.digest)
            for e in res.archive.entries]
    sdir = seed_dir(cfg.outdir, seed)
    storage.ensure_dir(sdir)
    storage.save_archive(rows, os.path.join(sdir, "archive.tsv"))
    config = asdict(cfg)
    config["seeds"] = list(cfg.seeds)
    storage.save_manifest(
        {"version": __version__, "seed": seed, "config": config,
         "budgets": [list(b) for b in res.schedule.rounds],
         "rounds": res.rounds_log, "sim_calls": res.sim_calls,
         "idle_types": list(res.idle_types),
         "archive": [[e.objectives.makespan, e.objectives.maint_cost,
                      e.digest] for e in res.archive.entries]},
        os.path.join(sdir, "manifest.txt"))
    _write_summary(sdir, seed, res, rows)
    return seed, rows


def _write_summary(sdir, seed, res, rows):
    lines = [storage.SUMMARY_TAG, "seed = %d" % seed,
             "sim_calls = %d" % res.sim_calls,
             "archive_size = %d" % len(res.archive)]
    for log in res.rounds_log:
        lines.append("round %d: plan_iters=%d online_iters=%d archive=%d" % (
            log["round"], log["plan_iters"], log["online_iters"],
            log["archive_size"]))
    for _, cmax, cost, digest in sorted(rows, key=lambda r: r[1]):
        lines.append("point %s %s %s" % (repr(cmax), repr(cost), digest))
    with open(os.path.join(sdir, "summary.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _dominates(p, q) -> bool:
    return p[0] <= q[0] and p[1] <= q[1] and (p[0] < q[0] or p[1] < q[1])


def nondominated(points):
    pts = sorted(set(points))
    return [p for p in pts
            if not any(_dominates(q, p) for q in pts if q != p)]


def _padded_bounds(point_sets):
    # a degenerate axis (every archive has the same cost, say) would make
    # normalization blow up; widen it by one unit instead
    (lx, ly), (hx, hy) = bounds_of(*point_sets)
    if hx <= lx:
        hx = lx + 1.0
    if hy <= ly:
        hy = ly + 1.0
    return ((lx, ly), (hx, hy))


def score_archives(per_seed_points: dict[int, list], reference=None):
    """Per-seed (hv, igd, rpd) plus aggregate means.

    The reference front defaults to the nondominated union of all seed
    archives; normalization bounds always span reference plus archives.
    """
    sets = [pts for pts in per_seed_points.values() if pts]
    if reference is None:
        pooled = [p for pts in sets for p in pts]
        reference = nondominated(pooled)
    if not reference:
        raise ValueError("empty reference front")
    bounds = _padded_bounds(sets + [reference])
    ref_n = normalize(reference, bounds)
    best_cmax = min(p[0] for p in reference)
    per_seed = []
    for seed in sorted(per_seed_points):
        pts = per_seed_points[seed]
        if not pts:
            per_seed.append((seed, 0.0, float("inf"), float("inf")))
            continue
        pn = normalize(pts, bounds)
        hv = hypervolume(pn)
        gd = igd(ref_n, pn)
        seed_best = min(p[0] for p in pts)
        dev = rpd(seed_best, best_cmax) if best_cmax > 0 else 0.0
        per_seed.append((seed, hv, gd, dev))
    n = len(per_seed)
    aggregate = {
        "mean_hv": sum(r[1] for r in per_seed) / n,
        "mean_igd": sum(r[2] for r in per_seed) / n,
        "mean_rpd": sum(r[3] for r in per_seed) / n,
        "reference_size": float(len(reference)),
    }
    return per_seed, aggregate, reference


def collect_archives(outdir, seeds=None) -> dict[int, list]:
    """Read per-seed archive files back as {seed: [(c_max, cost), ...]}."""
    out: dict[int, list] = {}
    if seeds is None:
        seeds = sorted(int(name.split("-", 1)[1])
                       for name in os.listdir(outdir)
                       if name.startswith("seed-"))
    for seed in seeds:
        rows = storage.load_archive(os.path.join(seed_dir(outdir, seed),
                                                 "archive.tsv"))
        out[seed] = [(cmax, cost) for _, cmax, cost, _ in rows]
    return out


def write_aggregate_report(outdir, per_seed_points, reference=None) -> str:
    per_seed, aggregate, _ = score_archives(per_seed_points, reference)
    path = os.path.join(outdir, "report.txt")
    storage.save_report(per_seed, aggregate, path)
    return path


def run_experiment(cfg: ExperimentConfig):
    """Run every seed, persist results, write the aggregate report.

    Returns (per_seed_rows, report_path).
    """
    inst = resolve_instance(cfg)
    storage.ensure_dir(cfg.outdir)
    if cfg.instance_path is None:
        storage.save_instance(inst, os.path.join(cfg.outdir, "instance.txt"))
    results = {}
    if cfg.jobs > 1 and len(cfg.seeds) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            futs = [ex.submit(_run_one_seed, inst, cfg, s) for s in cfg.seeds]
            for fut in futs:
                seed, rows = fut.result()
                results[seed] = rows
    else:
        for s in cfg.seeds:
            seed, rows = _run_one_seed(inst, cfg, s)
            results[seed] = rows
    reference = None
    if cfg.reference_path is not None:
        ref_rows = storage.load_archive(cfg.reference_path)
        reference = [(cmax, cost) for _, cmax, cost, _ in ref_rows]
    per_seed_points = {s: [(r[1], r[2]) for r in rows]
                       for s, rows in results.items()}
    report_path = write_aggregate_report(cfg.outdir, per_seed_points, reference)
    return results, report_path
