"""Timing comparison of the pure-Python and compiled kernels.

Raw draw loops run both backends in-process; the end-to-end simulation
comparison respawns the interpreter with REWORKOPT_PURE=1 because the
backend binds at import time.

    python3 benchmarks/bench_kernels.py [--draws N] [--sim-jobs N]
"""

import argparse
import os
import subprocess
import sys
import time

from reworkopt._kernel import backends

_SIM_SNIPPET = """
import time
from reworkopt import _kernel
from reworkopt.encoding import GeneBounds, decode, random_chromosome
from reworkopt.instances import generate_instance
from reworkopt.rng import RngStream
from reworkopt.simulate import SimConfig, simulate

inst = generate_instance(%d, 7)
rng = RngStream.from_seed(11)
chrom = random_chromosome(inst, (), rng, GeneBounds())
plan = decode(chrom, inst)
simulate(inst, plan, RngStream.from_seed(1))          # warm caches
t0 = time.perf_counter()
for s in range(%d):
    tr = simulate(inst, plan, RngStream.from_seed(s))
dt = time.perf_counter() - t0
print("%%s\t%%.4f\t%%r" %% (_kernel.BACKEND, dt, tr.makespan))
"""


def bench_draws(draws: int) -> None:
    key = 0x9E3779B97F4A7C15
    for op, call in [
        ("u01", lambda mod, c: (mod.u01(key, c), c + 1)),
        ("normal", lambda mod, c: mod.normal(key, c, 0.0, 1.0)),
        ("gamma(0.8)", lambda mod, c: mod.gamma(key, c, 0.8, 1.3)),
        ("gamma(3.2)", lambda mod, c: mod.gamma(key, c, 3.2, 1.3)),
    ]:
        times = {}
        sums = {}
        for name, mod in sorted(backends().items()):
            acc, c = 0.0, 0
            t0 = time.perf_counter()
            for _ in range(draws):
                x, c = call(mod, c)
                acc += x
            times[name] = time.perf_counter() - t0
            sums[name] = acc
        line = "  ".join("%s %.3fs" % (n, times[n]) for n in sorted(times))
        if len(set(repr(s) for s in sums.values())) != 1:
            line += "  CHECKSUM MISMATCH %r" % sums
        if "pure" in times and "compiled" in times and times["compiled"] > 0:
            line += "  (x%.1f)" % (times["pure"] / times["compiled"])
        print("%-12s %s" % (op, line))


def bench_sim(n_jobs: int, reps: int) -> None:
    snippet = _SIM_SNIPPET % (n_jobs, reps)
    for forced in (None, "1"):
        env = dict(os.environ)
        env.pop("REWORKOPT_PURE", None)
        if forced:
            env["REWORKOPT_PURE"] = forced
        out = subprocess.run([sys.executable, "-c", snippet], env=env,
                             capture_output=True, text=True, check=True)
        backend, dt, mk = out.stdout.strip().split("\t")
        print("simulate %d jobs x%d  %-9s %ss  makespan %s" % (
            n_jobs, reps, backend, dt, mk))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=200000)
    ap.add_argument("--sim-jobs", type=int, default=100)
    ap.add_argument("--sim-reps", type=int, default=20)
    args = ap.parse_args()
    print("backends found:", ", ".join(sorted(backends())))
    bench_draws(args.draws)
    bench_sim(args.sim_jobs, args.sim_reps)
    return 0


if __name__ == "__main__":
    sys.exit(main())
