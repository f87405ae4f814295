"""Domain model: jobs, machines, quality targets, problem instances.

A problem instance is a set of typed jobs to run on unrelated parallel
machines.  Machines wear (environment plus job-induced), wear degrades
both speed and output quality, and maintenance (preventive, imperfect;
corrective on failure) restores them.  Nonconforming output may be
reworked via copy jobs.  The decision layer optimizes makespan against
maintenance cost.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class IncapableMachineError(ValueError):
    """A slot was assigned to a machine that cannot process its job type."""


@dataclass
class Job:
    """One unit of work. Rework copies point at their origin job."""

    id: int
    type: int
    nominal_times: dict[int, float]   # machine id -> base processing time
    origin: int | None = None

    def capable(self, machine_id: int) -> bool:
        return machine_id in self.nominal_times


@dataclass
class QualitySpec:
    """Per-type quality target and input-quality distribution."""

    target: float           # nominal quality characteristic aimed at
    tol: float              # conformity half-width, strict
    mu_q: float             # mean incoming-material quality
    sigma_q: float
    lo: float               # truncation bounds for incoming quality
    hi: float

    def conforms(self, d: float) -> bool:
        return abs(d - self.target) < self.tol


@dataclass
class MachineParams:
    """Static parameters of one machine."""

    id: int
    w0: float               # wear right after corrective maintenance
    cap: float              # wear failure threshold
    # wear process
    mu_minus: float         # induced wear scale for ineligible inputs
    sigma_minus: float
    mu_plus: float          # induced wear scale per unit processing time
    sigma_plus: float
    alpha: float            # environment shocks: shape rate per time unit
    beta: float             # environment shocks: scale
    # quality response
    ups0: float             # base output quality at zero wear
    a: float                # wear-to-quality drift
    b0: float               # noise gain
    gamma: float            # wear-amplified noise gain
    # maintenance durations / costs
    t_pm: float
    t_ps: float             # setup time attached to every preventive action
    t_cm: float
    c_pm: float
    c_ps: float
    c_cm: float

    @property
    def t_pm_full(self) -> float:
        return self.t_pm + self.t_ps

    @property
    def c_pm_full(self) -> float:
        return self.c_pm + self.c_ps


@dataclass
class GlobalParams:
    eta: float              # wear-to-slowdown coefficient
    theta: float            # residual wear fraction after preventive action
    varphi: float           # preventive-wear penalty per prior action
    noise_sigma: float = 1.0


@dataclass
class ProblemInstance:
    jobs: list[Job]
    machines: list[MachineParams]
    quality: dict[int, QualitySpec]       # by job type
    globals: GlobalParams
    idle_nominal: dict[int, dict[int, float]] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._by_id = {m.id: m for m in self.machines}
        if not self.idle_nominal:
            self.idle_nominal = _mean_nominals(self.jobs)

    @property
    def n_jobs(self) -> int:
        return len(self.jobs)

    def machine(self, machine_id: int) -> MachineParams:
        return self._by_id[machine_id]

    def capable_machines(self, job_type: int) -> list[int]:
        """Machine ids that can run the given type, ascending."""
        out: set[int] = set()
        for j in self.jobs:
            if j.type == job_type:
                out.update(j.nominal_times)
        return sorted(out)

    def job_types(self) -> list[int]:
        return sorted({j.type for j in self.jobs})


@dataclass(frozen=True)
class ObjectivePair:
    """Makespan and total maintenance cost, both minimized."""

    makespan: float
    maint_cost: float

    def dominates(self, other: "ObjectivePair") -> bool:
        return (self.makespan <= other.makespan
                and self.maint_cost <= other.maint_cost
                and (self.makespan < other.makespan
                     or self.maint_cost < other.maint_cost))

    def as_tuple(self) -> tuple[float, float]:
        return (self.makespan, self.maint_cost)


def _mean_nominals(jobs: list[Job]) -> dict[int, dict[int, float]]:
    acc: dict[int, dict[int, list[float]]] = {}
    for j in jobs:
        per = acc.setdefault(j.type, {})
        for mid, o in j.nominal_times.items():
            per.setdefault(mid, []).append(o)
    return {t: {mid: sum(v) / len(v) for mid, v in per.items()}
            for t, per in acc.items()}


def validate_instance(inst: ProblemInstance) -> list[str]:
    """Collect invariant violations; an empty list means the instance is
    usable."""
    errs: list[str] = []
    seen_jobs: set[int] = set()
    mids = {m.id for m in inst.machines}
    if len(mids) != len(inst.machines):
        errs.append("duplicate machine ids")
    for j in inst.jobs:
        if j.id in seen_jobs:
            errs.append(f"duplicate job id {j.id}")
        seen_jobs.add(j.id)
        if not j.nominal_times:
            errs.append(f"job {j.id}: no capable machine")
        for mid, o in j.nominal_times.items():
            if mid not in mids:
                errs.append(f"job {j.id}: unknown machine {mid}")
            if not o > 0:
                errs.append(f"job {j.id}: nonpositive nominal time on machine {mid}")
        if j.type not in inst.quality:
            errs.append(f"job {j.id}: no quality spec for type {j.type}")
        if j.origin is not None and j.origin not in seen_jobs and not any(
                x.id == j.origin for x in inst.jobs):
            errs.append(f"job {j.id}: origin {j.origin} not in instance")
    for m in inst.machines:
        if not (0.0 <= m.w0 < m.cap):
            errs.append(f"machine {m.id}: initial wear {m.w0} outside [0, cap)")
        if m.sigma_minus < 0 or m.sigma_plus < 0:
            errs.append(f"machine {m.id}: negative wear sigma")
        if m.alpha < 0 or m.beta < 0:
            errs.append(f"machine {m.id}: negative environment parameter")
        for name in ("t_pm", "t_ps", "t_cm", "c_pm", "c_ps", "c_cm"):
            if getattr(m, name) < 0:
                errs.append(f"machine {m.id}: negative {name}")
    for t, q in inst.quality.items():
        if not q.tol > 0:
            errs.append(f"type {t}: nonpositive tolerance")
        if q.sigma_q < 0:
            errs.append(f"type {t}: negative sigma_q")
        if not q.lo <= q.hi:
            errs.append(f"type {t}: empty quality truncation interval")
    g = inst.globals
    if g.eta < 0:
        errs.append("eta must be nonnegative")
    if not (0.0 < g.theta <= 1.0):
        errs.append("theta must be in (0, 1]")
    if g.varphi < 0:
        errs.append("varphi must be nonnegative")
    if g.noise_sigma < 0:
        errs.append("noise sigma must be nonnegative")
    return errs
