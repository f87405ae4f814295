"""Event-driven execution of a schedule on degrading machines.

The loop advances machine frontiers in global time order.  At each job
start the machine first absorbs environment wear for the time it sat
exposed, then the job's actual duration and quality outcome are realized
from the wear at that instant, then the job-induced wear lands.  Failure
(wear past the threshold) triggers corrective maintenance immediately at
the completion that caused it; preventive maintenance is a threshold
policy with joint grouping and a payoff screen.

Quality outcomes are consumed strictly in completion-time order (a heap
decouples them from the per-machine stepping), so rework triggers can
never rewrite work that already started: a trigger at time T reshuffles
only slots starting at or after T.

Modes: static execution runs idle placeholders as time reservations and
never reworks; online execution skips unfilled placeholders and hands
rework triggers to a pluggable rescheduler.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from . import _kernel
from .encoding import Chromosome, SchedulePlan, decode, planned_starts
from .maintenance import (MachineState, MaintenanceEvent,
                          UndefinedLifecycleStats, cm_required,
                          corrective_maintenance, group_pms, imperfect_pm,
                          pm_due, pm_suspension_check)
from .model import Job, ObjectivePair, ProblemInstance
from .rng import NS_ENV, NS_JOB, NS_PILOT, NS_PROP2, NS_RESCHED, RngStream

STATIC = "static"
ONLINE = "online"


class _Ent:
    """Runtime slot entry: a real job, a rework copy, or an idle space."""

    __slots__ = ("eid", "slot", "job", "idle_type")

    def __init__(self, eid: int, slot: int, job: Job | None, idle_type: int | None):
        self.eid = eid
        self.slot = slot
        self.job = job
        self.idle_type = idle_type

    @property
    def is_idle(self) -> bool:
        return self.job is None


@dataclass
class JobEvent:
    eid: int
    job_id: int
    origin: int | None
    type: int
    machine_id: int
    slot: int
    start: float
    duration: float
    d: float
    qualified: bool
    upsilon: float
    eps: float
    du_minus: float
    du_plus: float
    dv: float
    w_before: float
    w_after: float

    @property
    def completion(self) -> float:
        return self.start + self.duration


@dataclass
class IdleEvent:
    eid: int
    slot: int
    idle_type: int
    machine_id: int
    start: float
    duration: float
    dv: float
    du_plus: float
    w_before: float
    w_after: float


@dataclass
class ReschedulePoint:
    time: float
    round_index: int
    n_copies: int
    window_total: int
    window_nonconforming: int
    f_r: float | None = None


@dataclass
class RoundStats:
    """One inter-trigger segment of the horizon."""

    t0: float
    t1: float
    maint_cost: float
    q_sum: int

    @property
    def span(self) -> float:
        return self.t1 - self.t0


@dataclass
class ScheduleTrace:
    mode: str
    det: bool
    job_events: list[JobEvent]
    idle_events: list[IdleEvent]
    maint_events: list[MaintenanceEvent]
    resched_points: list[ReschedulePoint]
    final_states: dict[int, MachineState]
    makespan: float
    maint_cost: float
    q_count: int

    def rounds(self) -> list[RoundStats]:
        """Horizon segments between rework triggers (always >= 1)."""
        cuts = [p.time for p in self.resched_points]
        bounds = [0.0] + cuts + [max(self.makespan, cuts[-1] if cuts else 0.0)]
        out = []
        for i in range(len(bounds) - 1):
            t0, t1 = bounds[i], bounds[i + 1]
            cost = sum(ev.cost for ev in self.maint_events
                       if (ev.time > t0 or i == 0 and ev.time == 0.0) and ev.time <= t1)
            q = sum(1 for ev in self.job_events
                    if ev.qualified and (ev.completion > t0 or i == 0) and ev.completion <= t1)
            out.append(RoundStats(t0, t1, cost, q))
        return out


@dataclass
class RescheduleContext:
    """Everything a rescheduler may look at when a rework trigger fires."""

    inst: ProblemInstance
    trigger_time: float
    round_index: int
    states: dict[int, MachineState]          # snapshots, safe to mutate
    pending: dict[int, list[_Ent]]           # slots not started yet, in order
    copies: list[_Ent]                       # fresh rework copies to place
    chrom: Chromosome
    det: bool
    prop2: bool
    rng: RngStream                           # candidate-evaluation stream root
    baseline_starts: dict[int, float]        # published timetable of the plan


@dataclass
class SimConfig:
    mode: str = STATIC
    det: bool = False
    prop2: bool = True
    rescheduler: "object" = None             # callable(ctx) -> (queues, f_r)
    counter: list | None = None              # shared invocation counter


def _entities_from_plan(plan: SchedulePlan, inst: ProblemInstance) -> dict[int, list[_Ent]]:
    n = inst.n_jobs
    queues: dict[int, list[_Ent]] = {}
    for mid, slots in plan.order.items():
        row = []
        for s in slots:
            if s < n:
                row.append(_Ent(s, s, inst.jobs[s], None))
            else:
                row.append(_Ent(s, s, None, plan.chrom.idle_types[s - n]))
        queues[mid] = row
    return queues


class _Sim:
    """One simulation run; see simulate() for the public entry."""

    def __init__(self, inst: ProblemInstance, queues: dict[int, list[_Ent]],
                 states: dict[int, MachineState], chrom: Chromosome,
                 root: RngStream, det: bool, prop2: bool,
                 skip_idle: bool, rework: bool,
                 rescheduler=None, starts: dict[int, float] | None = None,
                 baseline_starts: dict[int, float] | None = None,
                 eid_base: int = 0, copy_id_base: int = 0,
                 round_base: int = 0, counter: list | None = None):
        self.inst = inst
        self.queues = queues
        self.ptr = {mid: 0 for mid in queues}
        self.states = states
        self.chrom = chrom
        self.root = root
        self.det = det
        self.prop2 = prop2
        self.skip_idle = skip_idle
        self.rework = rework
        self.rescheduler = rescheduler
        self.starts = starts
        self.baseline_starts = baseline_starts or {}
        self.env = {mid: root.substream(NS_ENV, mid) for mid in queues}
        self.job_events: list[JobEvent] = []
        self.idle_events: list[IdleEvent] = []
        self.maint_events: list[MaintenanceEvent] = []
        self.resched_points: list[ReschedulePoint] = []
        self.heap: list = []
        self.seq = 0
        self.window_total = 0
        self.window_nc = 0
        self.window_copy_jobs: list[Job] = []
        self.copied: set[int] = set()
        self.next_eid = eid_base
        self.next_copy_id = copy_id_base
        self.round_index = round_base
        self.next_gid = 0
        self.prop2_checks: dict[int, int] = {mid: 0 for mid in queues}
        self.pending_trigger: float | None = None
        if counter is not None:
            counter[0] += 1

    # -- helpers -------------------------------------------------------

    def _effective_start(self, mid: int) -> float:
        st = self.states[mid]
        t = st.ready
        if self.starts is not None:
            ent = self.queues[mid][self.ptr[mid]]
            ps = self.starts.get(ent.slot)
            if ps is not None and ps > t:
                t = ps
        return t

    def _active(self) -> list[int]:
        return [mid for mid in self.queues if self.ptr[mid] < len(self.queues[mid])]

    def _drain(self, upto: float) -> None:
        while self.heap and self.heap[0][0] <= upto:
            ct, _, _, ent, q = heapq.heappop(self.heap)
            self.window_total += 1
            if not q:
                self.window_nc += 1
                job = ent.job
                if job.origin is None and job.id not in self.copied:
                    self.copied.add(job.id)
                    self.window_copy_jobs.append(job)
            if (self.rework and self.window_nc >= 1 and self.window_copy_jobs
                    and self.window_nc / self.window_total >= self.chrom.thr_r):
                self.pending_trigger = ct
                return

    def _apply_cm(self, mid: int, at: float) -> None:
        st = self.states[mid]
        mp = self.inst.machine(mid)
        st.cyc_cost += mp.c_cm
        ev = MaintenanceEvent("cm", mid, at, mp.t_cm, mp.c_cm, None,
                              w_before=st.w, w_after=mp.w0, n_pm_after=0)
        corrective_maintenance(st, mp)
        st.ready = at + mp.t_cm
        st.maint_acc += mp.t_cm
        self.maint_events.append(ev)

    def _suspend_if_unprofitable(self, mid: int) -> bool:
        """Run the payoff screen; returns True if the machine got
        suspended (preventive action skipped)."""
        st = self.states[mid]
        mp = self.inst.machine(mid)
        try:
            gain = self._project_gain(mid)
            if pm_suspension_check(gain, st.cyc_jobs, st.cyc_busy, st.cyc_cost,
                                   mp.t_pm_full, mp.c_pm_full):
                st.suspended = True
                return True
        except UndefinedLifecycleStats:
            pass
        return False

    def _project_gain(self, mid: int) -> int:
        """Projected extra jobs this life cycle if we PM now vs. not,
        paired mini-runs over the machine's remaining real slots."""
        st = self.states[mid]
        mp = self.inst.machine(mid)
        g = self.inst.globals
        self.prop2_checks[mid] += 1
        base = self.root.substream(NS_PROP2, mid, self.prop2_checks[mid])
        jkey = base.substream(1).key
        ekey = base.substream(2).key
        remaining = [e for e in self.queues[mid][self.ptr[mid]:] if not e.is_idle]
        out = []
        for do_pm in (True, False):
            w, npm = st.w, st.n_pm
            t, last_start, maint_acc = st.ready, st.last_start, st.maint_acc
            if do_pm:
                w = imperfect_pm(w, npm, g.theta, g.varphi)
                npm += 1
                t += mp.t_pm_full
                maint_acc += mp.t_pm_full
            jctr = ectr = 0
            count = 0
            for ent in remaining:
                spec = self.inst.quality[ent.job.type]
                dt = (t - last_start) - maint_acc
                if dt < 0.0:
                    dt = 0.0
                o = ent.job.nominal_times[mid]
                (p, _, _, _, _, _, _, _, w, jctr, ectr) = _kernel.job_step(
                    jkey, jctr, ekey, ectr, 1 if self.det else 0, 0, w, dt, o,
                    g.eta, mp.alpha, mp.beta, mp.mu_minus, mp.sigma_minus,
                    mp.mu_plus, mp.sigma_plus, mp.ups0, mp.a, mp.b0, mp.gamma,
                    spec.target, spec.tol, spec.mu_q, spec.sigma_q,
                    spec.lo, spec.hi, g.noise_sigma)
                last_start = t
                maint_acc = 0.0
                t += p
                count += 1
                if cm_required(w, mp.cap):
                    break
            out.append(count)
        return out[0] - out[1]

    def _try_pm(self, mid: int, t: float) -> bool:
        """Threshold check, screening, grouping.  Returns True if any
        preventive action was performed (frontiers moved)."""
        st = self.states[mid]
        mp = self.inst.machine(mid)
        g = self.inst.globals
        if not pm_due(st, self.chrom.zeta, self.chrom.n_u, mp):
            return False
        if self.prop2 and self._suspend_if_unprofitable(mid):
            return False
        window = self.chrom.psi * max(m.t_pm_full for m in self.inst.machines)
        due = [(mid, t)]
        for mid2 in self._active():
            if mid2 == mid:
                continue
            st2 = self.states[mid2]
            if not (t <= st2.ready <= t + window):
                continue
            if not pm_due(st2, self.chrom.zeta, self.chrom.n_u,
                          self.inst.machine(mid2)):
                continue
            if self.prop2 and self._suspend_if_unprofitable(mid2):
                continue
            due.append((mid2, st2.ready))
        machines = {m.id: m for m in self.inst.machines}
        for grp in group_pms(due, machines, self.chrom.psi, self.next_gid):
            self.next_gid += 1
            for member in grp.members:
                ms = self.states[member]
                w_before = ms.w
                ms.w = imperfect_pm(ms.w, ms.n_pm, g.theta, g.varphi)
                ms.n_pm += 1
                cost = grp.member_cost[member]
                ms.cyc_cost += cost
                self.maint_events.append(MaintenanceEvent(
                    "pm", member, grp.start, grp.duration, cost, grp.group_id,
                    w_before=w_before, w_after=ms.w, n_pm_after=ms.n_pm))
                ms.ready = grp.start + grp.duration
                ms.maint_acc += grp.duration
        return True

    def _make_copies(self) -> list[_Ent]:
        out = []
        for job in self.window_copy_jobs:
            cid = self.next_copy_id
            self.next_copy_id += 1
            copy = Job(id=cid, type=job.type,
                       nominal_times=dict(job.nominal_times), origin=job.id)
            out.append(_Ent(self.next_eid, -1, copy, None))
            self.next_eid += 1
        return out

    def _do_reschedule(self, at: float) -> None:
        self.round_index += 1
        copies = self._make_copies()
        pending = {mid: list(self.queues[mid][self.ptr[mid]:]) for mid in self.queues}
        ctx = RescheduleContext(
            inst=self.inst, trigger_time=at, round_index=self.round_index,
            states={mid: s.copy() for mid, s in self.states.items()},
            pending=pending, copies=copies, chrom=self.chrom, det=self.det,
            prop2=self.prop2,
            rng=self.root.substream(NS_RESCHED, self.round_index),
            baseline_starts=self.baseline_starts)
        if self.rescheduler is not None:
            queues, f_r = self.rescheduler(ctx)
        else:
            queues, f_r = fill_idle_slots(ctx), None
        for mid, row in queues.items():
            for ent in row:
                if not ent.is_idle and mid not in ent.job.nominal_times:
                    raise ValueError(
                        f"reschedule put job {ent.job.id} on incapable machine {mid}")
        self.queues = queues
        self.ptr = {mid: 0 for mid in queues}
        self.resched_points.append(ReschedulePoint(
            at, self.round_index, len(copies), self.window_total,
            self.window_nc, f_r))
        self.window_total = 0
        self.window_nc = 0
        self.window_copy_jobs = []
        self.pending_trigger = None

    # -- main loop -----------------------------------------------------

    def run(self) -> None:
        g = self.inst.globals
        while True:
            while True:
                active = self._active()
                if not active:
                    break
                mid = min(active, key=lambda m: (self._effective_start(m), m))
                t = self._effective_start(mid)
                self._drain(t)
                if self.pending_trigger is not None:
                    self._do_reschedule(self.pending_trigger)
                    continue
                st = self.states[mid]
                mp = self.inst.machine(mid)
                ent = self.queues[mid][self.ptr[mid]]
                if ent.is_idle and self.skip_idle:
                    self.ptr[mid] += 1
                    continue
                if cm_required(st.w, mp.cap):
                    self._apply_cm(mid, st.ready)
                    continue
                if self._try_pm(mid, t):
                    continue
                t = self._effective_start(mid)
                dt = (t - st.last_start) - st.maint_acc
                if dt < 0.0:
                    dt = 0.0
                jrng = self.root.substream(NS_JOB, ent.eid)
                erng = self.env[mid]
                if ent.is_idle:
                    o = self.inst.idle_nominal[ent.idle_type][mid]
                    spec = self.inst.quality[ent.idle_type]
                    (p, _, _, _, _, dv, _, du_p, w_after, jctr, ectr) = _kernel.job_step(
                        jrng.key, jrng.ctr, erng.key, erng.ctr,
                        1 if self.det else 0, 1, st.w, dt, o,
                        g.eta, mp.alpha, mp.beta, mp.mu_minus, mp.sigma_minus,
                        mp.mu_plus, mp.sigma_plus, mp.ups0, mp.a, mp.b0,
                        mp.gamma, spec.target, spec.tol, spec.mu_q,
                        spec.sigma_q, spec.lo, spec.hi, g.noise_sigma)
                    erng.ctr = ectr
                    self.idle_events.append(IdleEvent(
                        ent.eid, ent.slot, ent.idle_type, mid, t, p, dv, du_p,
                        st.w, w_after))
                else:
                    job = ent.job
                    o = job.nominal_times[mid]
                    spec = self.inst.quality[job.type]
                    (p, d, q, ups, eps, dv, du_m, du_p, w_after, jctr, ectr) = \
                        _kernel.job_step(
                            jrng.key, jrng.ctr, erng.key, erng.ctr,
                            1 if self.det else 0, 0, st.w, dt, o,
                            g.eta, mp.alpha, mp.beta, mp.mu_minus,
                            mp.sigma_minus, mp.mu_plus, mp.sigma_plus,
                            mp.ups0, mp.a, mp.b0, mp.gamma, spec.target,
                            spec.tol, spec.mu_q, spec.sigma_q, spec.lo,
                            spec.hi, g.noise_sigma)
                    erng.ctr = ectr
                    self.job_events.append(JobEvent(
                        ent.eid, job.id, job.origin, job.type, mid, ent.slot,
                        t, p, d, bool(q), ups, eps, du_m, du_p, dv,
                        st.w, w_after))
                    st.cyc_jobs += 1
                    st.cyc_busy += p
                    heapq.heappush(self.heap, (t + p, self.seq, mid, ent, q))
                    self.seq += 1
                st.last_start = t
                st.maint_acc = 0.0
                st.w = w_after
                st.ready = t + p
                self.ptr[mid] += 1
                # a crossing is repaired at the completion that caused it,
                # even when the machine has nothing left to do
                if cm_required(st.w, mp.cap):
                    self._apply_cm(mid, st.ready)
            self._drain(math.inf)
            if self.pending_trigger is None:
                break
            self._do_reschedule(self.pending_trigger)

    def trace(self, mode: str) -> ScheduleTrace:
        makespan = max((ev.completion for ev in self.job_events), default=0.0)
        cost = sum(ev.cost for ev in self.maint_events)
        q = sum(1 for ev in self.job_events if ev.qualified)
        return ScheduleTrace(mode, self.det, self.job_events, self.idle_events,
                             self.maint_events, self.resched_points,
                             self.states, makespan, cost, q)


def fill_idle_slots(ctx: RescheduleContext) -> dict[int, list[_Ent]]:
    """Default placement of rework copies: earliest pending idle slots of
    capable machines first, leftovers appended to the least loaded
    capable machine."""
    queues = {mid: list(row) for mid, row in ctx.pending.items()}
    loads = {mid: sum(e.job.nominal_times[mid] for e in row if not e.is_idle)
             for mid, row in queues.items()}
    leftover = []
    for copy in ctx.copies:
        spots = []
        for mid, row in queues.items():
            if mid not in copy.job.nominal_times:
                continue
            for pos, ent in enumerate(row):
                if ent.is_idle and ent.idle_type == copy.job.type:
                    spots.append((pos, mid))
                    break
        if spots:
            pos, mid = min(spots)
            queues[mid][pos] = copy
            loads[mid] += copy.job.nominal_times[mid]
        else:
            leftover.append(copy)
    for copy in leftover:
        cands = [mid for mid in queues if mid in copy.job.nominal_times]
        mid = min(cands, key=lambda m: (loads[m], m))
        queues[mid].append(copy)
        loads[mid] += copy.job.nominal_times[mid]
    return queues


def append_copies(ctx: RescheduleContext) -> dict[int, list[_Ent]]:
    """Right-shift fallback: keep the pending plan untouched and push the
    copies to the tail of the least loaded capable machine."""
    queues = {mid: list(row) for mid, row in ctx.pending.items()}
    loads = {mid: sum(e.job.nominal_times[mid] for e in row if not e.is_idle)
             for mid, row in queues.items()}
    for copy in ctx.copies:
        cands = [mid for mid in queues if mid in copy.job.nominal_times]
        mid = min(cands, key=lambda m: (loads[m], m))
        queues[mid].append(copy)
        loads[mid] += copy.job.nominal_times[mid]
    return queues


def simulate(inst: ProblemInstance, plan: SchedulePlan, root: RngStream,
             cfg: SimConfig | None = None) -> ScheduleTrace:
    """Execute a plan.  See the module docstring for the semantics."""
    cfg = cfg or SimConfig()
    queues = _entities_from_plan(plan, inst)
    states = {m.id: MachineState(m.id, m.w0) for m in inst.machines}
    online = cfg.mode == ONLINE
    base = planned_starts(plan, inst)
    sim = _Sim(inst, queues, states, plan.chrom, root, cfg.det, cfg.prop2,
               skip_idle=online, rework=online,
               rescheduler=cfg.rescheduler, starts=plan.starts,
               baseline_starts=base,
               eid_base=plan.chrom.n_slots,
               copy_id_base=inst.n_jobs + plan.chrom.n_slots,
               counter=cfg.counter)
    sim.run()
    return sim.trace(cfg.mode)


def simulate_suffix(ctx: RescheduleContext, queues: dict[int, list[_Ent]],
                    eval_rng: RngStream, counter: list | None = None
                    ) -> tuple[float, float, int]:
    """Project the rest of the horizon under a candidate suffix plan.

    Runs the same event loop from the snapshot states with rework
    disabled, on the candidate-evaluation stream family so that all
    candidates of one trigger share draws entity for entity.

    Returns (suffix span from the trigger, maintenance cost, qualified).
    """
    states = {mid: s.copy() for mid, s in ctx.states.items()}
    sim = _Sim(ctx.inst, {mid: list(row) for mid, row in queues.items()},
               states, ctx.chrom, eval_rng, ctx.det, ctx.prop2,
               skip_idle=True, rework=False, counter=counter)
    sim.run()
    end = max((ev.completion for ev in sim.job_events), default=ctx.trigger_time)
    cost = sum(ev.cost for ev in sim.maint_events)
    q = sum(1 for ev in sim.job_events if ev.qualified)
    return end - ctx.trigger_time, cost, q


def compact(plan: SchedulePlan) -> SchedulePlan:
    """Drop explicit start times: every slot begins as soon as its
    machine frees up.  Left-shifting never hurts the deterministic
    makespan because waiting only adds environment wear."""
    return SchedulePlan({m: list(s) for m, s in plan.order.items()},
                        plan.chrom, None)


def idle_space_count(inst: ProblemInstance, rng: RngStream,
                     chrom_defaults: Chromosome | None = None) -> dict[int, int]:
    """Idle spaces to reserve per type, from one nominal-plan pilot run.

    The pilot spreads jobs round-robin over capable machines in id
    order, simulates once stochastically, and sizes the reservation as
    the observed nonconforming count divided by the number of machines
    capable of that type, rounded up.
    """
    assign: list[int] = []
    key: list[float] = []
    rr: dict[int, int] = {}
    caps_by_type = {t: inst.capable_machines(t) for t in inst.job_types()}
    for i, job in enumerate(inst.jobs):
        caps = caps_by_type[job.type]
        assign.append(caps[rr.get(job.type, 0) % len(caps)])
        rr[job.type] = rr.get(job.type, 0) + 1
        key.append((i + 1.0) / (inst.n_jobs + 1.0))
    chrom = chrom_defaults.copy() if chrom_defaults else Chromosome(
        assign, key, ())
    chrom.assign, chrom.key, chrom.idle_types = assign, key, ()
    plan = decode(chrom, inst)
    trace = simulate(inst, plan, rng.substream(NS_PILOT),
                     SimConfig(mode=STATIC))
    bad: dict[int, int] = {}
    for ev in trace.job_events:
        if not ev.qualified:
            bad[ev.type] = bad.get(ev.type, 0) + 1
    return {t: math.ceil(bad.get(t, 0) / len(caps_by_type[t]))
            for t in caps_by_type}


# -- fitness and objectives -------------------------------------------


def fitness_static(trace: ScheduleTrace) -> float:
    """Planning fitness: squared qualified count against cost and span."""
    if trace.makespan <= 0.0:
        return 0.0
    return (trace.q_count * trace.q_count) / (max(trace.maint_cost, 1.0)
                                              * trace.makespan)


def fitness_resched(q_sum: int, maint_cost: float, span: float) -> float:
    """Rescheduling fitness of one suffix projection."""
    if span <= 0.0:
        return 0.0
    return (q_sum * q_sum) / (max(maint_cost, 1.0) * span)


def fitness_eval(trace: ScheduleTrace, d_o: float) -> float:
    """Execution fitness: inverse of cost, span and planned-vs-real drift."""
    if trace.makespan <= 0.0:
        return 0.0
    return 1.0 / (max(trace.maint_cost, 1.0) * trace.makespan * d_o)


def objectives(trace: ScheduleTrace) -> ObjectivePair:
    return ObjectivePair(trace.makespan, trace.maint_cost)
