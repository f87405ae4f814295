"""Command-line front end.

Verbs: generate (instance files), run (seeded experiments), report
(recompute indicators from stored archives), gantt (render one seeded
simulation), pareto (pool per-seed archives), oracle (brute-force front
and feasibility check on small instances), bench (kernel backends).
Every verb derives all randomness from its --seed / --seeds flags.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__, storage
from .encoding import GeneBounds, decode, random_chromosome
from .gantt import export_gantt
from .harness import (ExperimentConfig, collect_archives, nondominated,
                      run_experiment, write_aggregate_report)
from .improver import make_rescheduler
from .instances import generate_instance, oracle_toy, toy_instance
from .oracle import check_feasibility, enumerate_pareto
from .orchestrator import _pilot_idle_types
from .rng import NS_INIT, NS_ONLINE, RngStream
from .simulate import ONLINE, STATIC, SimConfig, simulate


def _parse_seeds(text: str):
    if ":" in text:
        lo, hi = text.split(":")
        seeds = tuple(range(int(lo), int(hi)))
    else:
        seeds = tuple(int(s) for s in text.split(",") if s)
    if not seeds:
        raise argparse.ArgumentTypeError("empty seed list: %r" % text)
    return seeds


def _cmd_generate(args):
    inst = generate_instance(args.n_jobs, args.seed, sigma_q=args.sigma_q,
                             coeff_set=args.coeff_set, type_mix=args.type_mix)
    storage.save_instance(inst, args.out)
    print("wrote %s (%d jobs, %d machines)" % (args.out, inst.n_jobs,
                                               len(inst.machines)))
    return 0


def _cmd_run(args):
    cfg = ExperimentConfig(
        n_jobs=args.n_jobs, sigma_q=args.sigma_q, type_mix=args.type_mix,
        coeff_set=args.coeff_set, gen_seed=args.gen_seed,
        instance_path=args.instance, pop_size=args.pop_size,
        max_iter=args.max_iter, n_rounds=args.rounds, elites=args.elites,
        varpi=args.varpi, mu_c=args.mu_c, sigma_c=args.sigma_c,
        label_reps=args.label_reps, det=args.det, seeds=args.seeds,
        outdir=args.out, jobs=args.jobs, reference_path=args.reference)
    results, report_path = run_experiment(cfg)
    for seed in sorted(results):
        print("seed %d: %d archive points" % (seed, len(results[seed])))
    print("report: %s" % report_path)
    return 0


def _cmd_report(args):
    per_seed_points = collect_archives(args.run_dir, args.seeds)
    reference = None
    if args.reference:
        rows = storage.load_archive(args.reference)
        reference = [(cmax, cost) for _, cmax, cost, _ in rows]
    path = write_aggregate_report(args.run_dir, per_seed_points, reference)
    print("report: %s" % path)
    return 0


def _sim_one(inst, seed: int, mode: str, det: bool):
    master = RngStream.from_seed(seed)
    idle_types = _pilot_idle_types(inst, master)
    chrom = random_chromosome(inst, idle_types, master.substream(NS_INIT, 1),
                              GeneBounds())
    counter = [0]
    hook = make_rescheduler(30, counter) if mode == ONLINE else None
    cfg = SimConfig(mode=mode, det=det, rescheduler=hook, counter=counter)
    return simulate(inst, decode(chrom, inst), master.substream(NS_ONLINE, 0, 0),
                    cfg)


def _cmd_gantt(args):
    if args.instance:
        inst = storage.load_instance(args.instance)
    else:
        inst = toy_instance(seed=args.seed)
    trace = _sim_one(inst, args.seed, ONLINE if args.online else STATIC,
                     args.det)
    export_gantt(trace, args.out, scale=args.scale)
    blocks = (len(trace.job_events) + len(trace.idle_events)
              + len(trace.maint_events))
    print("wrote %s (%d blocks, %d rescheduling points)" % (
        args.out, blocks, len(trace.resched_points)))
    return 0


def _cmd_pareto(args):
    per_seed_points = collect_archives(args.run_dir, args.seeds)
    rows = []
    for seed in sorted(per_seed_points):
        for _, cmax, cost, digest in storage.load_archive(
                os.path.join(args.run_dir, "seed-%d" % seed, "archive.tsv")):
            rows.append((seed, cmax, cost, digest))
    front = set(nondominated([(r[1], r[2]) for r in rows]))
    pooled = [r for r in rows if (r[1], r[2]) in front]
    storage.save_archive(pooled, args.out)
    print("wrote %s (%d pooled points)" % (args.out, len(pooled)))
    return 0


def _cmd_oracle(args):
    inst = oracle_toy(args.seed, n_jobs=args.n_jobs)
    sols = enumerate_pareto(inst, n_u_max=args.n_u_max)
    for sol in sols:
        print("c_max=%r cost=%r zeta=%.4f n_u=%d assign=%s" % (
            sol.objectives.makespan, sol.objectives.maint_cost, sol.zeta,
            sol.n_u, ",".join(str(m) for m in sol.assign)))
    if args.check:
        trace = _sim_one(inst, args.seed, STATIC, det=False)
        violations = check_feasibility(inst, trace)
        for v in violations:
            print("violation: %s" % v)
        print("feasibility: %s" % ("FAIL" if violations else "ok"))
        return 1 if violations else 0
    return 0


def _cmd_bench(args):
    from ._kernel import backends

    mods = backends()
    key, ctr = 0x9E3779B97F4A7C15, 0
    for name in sorted(mods):
        mod = mods[name]
        t0 = time.perf_counter()
        acc = 0.0
        c = ctr
        for _ in range(args.draws):
            x, c = mod.gamma(key, c, 0.8, 1.3)
            acc += x
        dt = time.perf_counter() - t0
        print("%-9s %d gamma draws in %.3fs (checksum %.6f)" % (
            name, args.draws, dt, acc))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="reworkopt", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("generate", help="write a benchmark instance file")
    g.add_argument("--n-jobs", type=int, default=100,
                   help="benchmark sizes are 100/200/300")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sigma-q", type=float, default=0.06,
                   help="benchmark spreads are 0.03/0.06/0.09")
    g.add_argument("--coeff-set", default="alternate")
    g.add_argument("--type-mix", type=float, default=0.5)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_generate)

    r = sub.add_parser("run", help="run the optimizer over seeds")
    r.add_argument("--instance", help="instance file; omit to generate")
    r.add_argument("--n-jobs", type=int, default=100)
    r.add_argument("--sigma-q", type=float, default=0.06)
    r.add_argument("--type-mix", type=float, default=0.5)
    r.add_argument("--coeff-set", default="alternate")
    r.add_argument("--gen-seed", type=int, default=0)
    r.add_argument("--seeds", type=_parse_seeds, default=(0,),
                   help="comma list '0,3,7' or range '0:50'")
    r.add_argument("--pop-size", type=int, default=20)
    r.add_argument("--max-iter", type=int, default=60)
    r.add_argument("--rounds", type=int, default=4)
    r.add_argument("--elites", type=int, default=None)
    r.add_argument("--varpi", type=float, default=0.5)
    r.add_argument("--mu-c", type=float, default=0.0)
    r.add_argument("--sigma-c", type=float, default=1.13)
    r.add_argument("--label-reps", type=int, default=5)
    r.add_argument("--det", action="store_true",
                   help="mean-value dynamics (debugging)")
    r.add_argument("--jobs", type=int, default=1,
                   help="concurrent seeds")
    r.add_argument("--reference", help="archive file used as reference front")
    r.add_argument("--out", required=True)
    r.set_defaults(func=_cmd_run)

    p = sub.add_parser("report", help="recompute indicators for a run directory")
    p.add_argument("--run-dir", required=True)
    p.add_argument("--seeds", type=_parse_seeds, default=None)
    p.add_argument("--reference")
    p.set_defaults(func=_cmd_report)

    ga = sub.add_parser("gantt", help="simulate one seed and render an SVG chart")
    ga.add_argument("--instance", help="instance file; omit for a built-in toy")
    ga.add_argument("--seed", type=int, default=0)
    ga.add_argument("--online", action="store_true",
                    help="enable rework rescheduling")
    ga.add_argument("--det", action="store_true")
    ga.add_argument("--scale", type=float, default=1.0,
                    help="x user units per time unit")
    ga.add_argument("--out", required=True)
    ga.set_defaults(func=_cmd_gantt)

    pa = sub.add_parser("pareto", help="pool per-seed archives into one front")
    pa.add_argument("--run-dir", required=True)
    pa.add_argument("--seeds", type=_parse_seeds, default=None)
    pa.add_argument("--out", required=True)
    pa.set_defaults(func=_cmd_pareto)

    orc = sub.add_parser("oracle", help="brute-force front of a tiny instance")
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--n-jobs", type=int, default=None)
    orc.add_argument("--n-u-max", type=int, default=2)
    orc.add_argument("--check", action="store_true",
                     help="also simulate and run the feasibility checker")
    orc.set_defaults(func=_cmd_oracle)

    b = sub.add_parser("bench", help="compare kernel backends")
    b.add_argument("--draws", type=int, default=200000)
    b.set_defaults(func=_cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
