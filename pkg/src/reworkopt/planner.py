"""Population search over chromosomes.

Two regimes alternate along one run, steered by a control value that
decays from 2 to 0: while it is above 1 the population explores with a
similarity-guided recombination and a differential operator on the
slot keys; afterwards it refines with beneficial adjacent swaps (backed
by a deterministic preview) and load moves from the busiest machine to
the idlest.  Survivors are picked by fitness-proportional roulette with
the incumbent best and the leaders of the population's own cost-level
front always retained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .encoding import (Chromosome, GeneBounds, SchedulePlan, decode,
                       random_chromosome)
from .model import ProblemInstance
from .rng import NS_LABEL, NS_SEARCH, RngStream
from .simulate import (STATIC, ScheduleTrace, SimConfig, fitness_static,
                       simulate)


@dataclass
class Individual:
    chrom: Chromosome
    label: float = 0.0
    kind: str = "static"        # which fitness produced the label
    obj: tuple[float, float] | None = None   # (C_max, maint cost) behind it


@dataclass
class PlannerConfig:
    pop_size: int = 20
    label_reps: int = 5
    det: bool = False
    prop2: bool = True
    bounds: GeneBounds = field(default_factory=GeneBounds)
    counter: list | None = None


def control_param(iteration: int, max_iter: int) -> float:
    """Linear decay from 2 (start) to 0 (budget exhausted)."""
    return 2.0 * (1.0 - iteration / max_iter)


def label_static(inst: ProblemInstance, chrom: Chromosome,
                 master: RngStream, cfg: PlannerConfig) -> float:
    """Planning fitness, averaged over replications.

    Replication r draws from the run-wide substream (label, r): every
    chromosome sees the same worlds, so labels are paired.
    """
    return label_static_obj(inst, chrom, master, cfg)[0]


def label_static_obj(inst: ProblemInstance, chrom: Chromosome,
                     master: RngStream, cfg: PlannerConfig
                     ) -> tuple[float, tuple[float, float]]:
    """label_static plus the replication-averaged raw objectives.

    Selection keeps the leader of every cost level on the population's
    own front, and needs the objectives behind each label for that.
    """
    plan = decode(chrom, inst)
    total = 0.0
    mk = 0.0
    mc = 0.0
    for r in range(cfg.label_reps):
        tr = simulate(inst, plan, master.substream(NS_LABEL, r),
                      SimConfig(mode=STATIC, det=cfg.det, prop2=cfg.prop2,
                                counter=cfg.counter))
        total += fitness_static(tr)
        mk += tr.makespan
        mc += tr.maint_cost
    n = cfg.label_reps
    return total / n, (mk / n, mc / n)


def de_operator(parent: Chromosome, pop: list[Individual],
                inst: ProblemInstance, rng: RngStream,
                bounds: GeneBounds) -> Chromosome:
    """Differential step on the full slot keys (machine + fraction).

    The difference of two population members perturbs the parent; the
    integer part is re-legalized to a capable machine, the fraction
    wrapped into [0, 1).  A zero step or identical donors reproduce the
    parent exactly.
    """
    i1 = rng.randrange(len(pop))
    i2 = rng.randrange(len(pop))
    a1, a2 = pop[i1].chrom, pop[i2].chrom
    f = 0.3 + 0.6 * rng.uniform()
    child = parent.copy()
    n = inst.n_jobs
    for slot in range(parent.n_slots):
        k = ((parent.assign[slot] + parent.key[slot])
             + f * ((a1.assign[slot] + a1.key[slot])
                    - (a2.assign[slot] + a2.key[slot])))
        m = math.floor(k)
        frac = k - m
        if frac >= 1.0:               # guards the k == floor+1.0 float edge
            frac = 0.0
        t = parent.slot_type(inst, slot)
        caps = (inst.jobs[slot].nominal_times if slot < n
                else inst.capable_machines(t))
        if m not in caps:
            caps_l = sorted(caps) if not isinstance(caps, list) else caps
            m = caps_l[rng.randrange(len(caps_l))]
        child.assign[slot] = m
        child.key[slot] = frac
    child.zeta = _clip(parent.zeta + f * (a1.zeta - a2.zeta), bounds.zeta)
    child.psi = _clip(parent.psi + f * (a1.psi - a2.psi), bounds.psi)
    child.thr_r = _clip(parent.thr_r + f * (a1.thr_r - a2.thr_r), bounds.thr_r)
    n_u = parent.n_u + round(f * (a1.n_u - a2.n_u))
    child.n_u = max(0, min(bounds.n_u_max, n_u))
    return child


def _clip(x: float, rng_pair: tuple[float, float]) -> float:
    lo, hi = rng_pair
    return lo if x < lo else hi if x > hi else x


def similarity(a: Chromosome, b: Chromosome) -> float:
    """Fraction of slots sharing their machine assignment."""
    same = sum(1 for x, y in zip(a.assign, b.assign) if x == y)
    return same / len(a.assign)


def re_operator(parent: Chromosome, pop: list[Individual],
                inst: ProblemInstance, rng: RngStream,
                bounds: GeneBounds) -> Chromosome:
    """Recombination with a similarity-ranked donor, then a load
    rebalance toward capability-weighted per-machine targets."""
    ranked = sorted(range(len(pop)),
                    key=lambda i: similarity(parent, pop[i].chrom))
    # rank-proportional roulette: most similar gets the largest share
    total = len(ranked) * (len(ranked) + 1) / 2
    x = rng.uniform() * total
    acc = 0.0
    donor = pop[ranked[-1]].chrom
    for pos, i in enumerate(ranked):
        acc += pos + 1
        if x <= acc:
            donor = pop[i].chrom
            break
    child = parent.copy()
    for slot in range(parent.n_slots):
        if rng.uniform() < 0.5:
            child.assign[slot] = donor.assign[slot]
            child.key[slot] = donor.key[slot]
    if rng.uniform() < 0.5:
        child.zeta, child.psi = donor.zeta, donor.psi
        child.thr_r, child.n_u = donor.thr_r, donor.n_u
    rebalance(child, inst, rng)
    return child


def rebalance(chrom: Chromosome, inst: ProblemInstance, rng: RngStream,
              max_moves: int | None = None) -> None:
    """Move slots off overloaded machines toward the capability-weighted
    mean count.  Only moves that shrink the worst overload are taken, so
    the slot-closure invariant is untouched and the loop terminates."""
    n = inst.n_jobs
    type_counts: dict[int, int] = {}
    for slot in range(chrom.n_slots):
        t = chrom.slot_type(inst, slot)
        type_counts[t] = type_counts.get(t, 0) + 1
    caps_of = {t: inst.capable_machines(t) for t in type_counts}
    target = {m.id: 0.0 for m in inst.machines}
    for t, c in type_counts.items():
        for mid in caps_of[t]:
            target[mid] += c / len(caps_of[t])
    counts = {m.id: 0 for m in inst.machines}
    for mid in chrom.assign:
        counts[mid] += 1
    moves = max_moves if max_moves is not None else 2 * chrom.n_slots
    for _ in range(moves):
        over = max(counts, key=lambda m: (counts[m] - target[m], m))
        dev_over = counts[over] - target[over]
        if dev_over <= 1.0:
            break
        slots_here = [s for s in range(chrom.n_slots) if chrom.assign[s] == over]
        rng.shuffle(slots_here)
        moved = False
        for s in slots_here:
            t = chrom.slot_type(inst, s)
            dests = [mid for mid in caps_of[t] if mid != over]
            if not dests:
                continue
            dest = min(dests, key=lambda m: (counts[m] - target[m], m))
            if counts[dest] - target[dest] + 1.0 < dev_over:
                chrom.assign[s] = dest
                counts[over] -= 1
                counts[dest] += 1
                moved = True
                break
        if not moved:
            break


def det_preview(inst: ProblemInstance, chrom: Chromosome,
                master: RngStream, cfg: PlannerConfig) -> tuple[SchedulePlan, ScheduleTrace]:
    """Deterministic static run used to audit swaps and measure load."""
    plan = decode(chrom, inst)
    tr = simulate(inst, plan, master.substream(NS_LABEL, 0),
                  SimConfig(mode=STATIC, det=True, prop2=cfg.prop2,
                            counter=cfg.counter))
    return plan, tr


def prop1_swap(inst: ProblemInstance, preview: ScheduleTrace,
               plan: SchedulePlan, machine_id: int, pos: int) -> bool:
    """Is swapping the adjacent pair (pos, pos+1) on this machine safe
    and potentially useful?

    Rules, judged on the deterministic preview: two nonconforming jobs
    in longest-first order always swap; two conforming jobs of one type
    swap when the longer one leads and the extra wear the swap puts in
    front of it cannot push its quality outside the tolerance (no
    maintenance may sit between the two).
    """
    slots = plan.order[machine_id]
    if pos < 0 or pos + 1 >= len(slots):
        return False
    s1, s2 = slots[pos], slots[pos + 1]
    n = inst.n_jobs
    if s1 >= n or s2 >= n:
        return False
    by_slot = {ev.slot: ev for ev in preview.job_events
               if ev.machine_id == machine_id}
    if s1 not in by_slot or s2 not in by_slot:
        return False
    ev1, ev2 = by_slot[s1], by_slot[s2]
    for mev in preview.maint_events:
        if mev.machine_id == machine_id and ev1.start <= mev.time <= ev2.completion:
            return False
    j1, j2 = inst.jobs[s1], inst.jobs[s2]
    o1 = j1.nominal_times[machine_id]
    o2 = j2.nominal_times[machine_id]
    if not ev1.qualified and not ev2.qualified:
        return o1 > o2
    if ev1.qualified and ev2.qualified and j1.type == j2.type and o1 > o2:
        mp = inst.machine(machine_id)
        g = inst.globals
        spec = inst.quality[j1.type]
        w1 = ev1.w_before + ev1.dv
        lam = mp.mu_plus + mp.alpha * mp.beta
        extra_wear = lam * (o2 * (1.0 + g.eta * w1))
        margin = spec.tol - abs(ev1.d - spec.target)
        return abs(mp.a) * extra_wear < margin
    return False


def _apply_swap(chrom: Chromosome, plan: SchedulePlan, machine_id: int,
                pos: int) -> Chromosome:
    child = chrom.copy()
    s1 = plan.order[machine_id][pos]
    s2 = plan.order[machine_id][pos + 1]
    child.key[s1], child.key[s2] = child.key[s2], child.key[s1]
    return child


def busiest_idlest_move(chrom: Chromosome, inst: ProblemInstance,
                        preview: ScheduleTrace, rng: RngStream) -> Chromosome:
    """Shift one random slot from the machine with the highest busy
    ratio to the one with the lowest, capability permitting."""
    if preview.makespan <= 0.0:
        return chrom.copy()
    busy = {m.id: 0.0 for m in inst.machines}
    for ev in preview.job_events:
        busy[ev.machine_id] += ev.duration
    for ev in preview.idle_events:
        busy[ev.machine_id] += ev.duration
    busiest = max(busy, key=lambda m: (busy[m], -m))
    idlest = min(busy, key=lambda m: (busy[m], m))
    child = chrom.copy()
    if busiest == idlest:
        return child
    movable = []
    n = inst.n_jobs
    for slot in range(chrom.n_slots):
        if chrom.assign[slot] != busiest:
            continue
        t = chrom.slot_type(inst, slot)
        ok = (inst.jobs[slot].capable(idlest) if slot < n
              else idlest in inst.capable_machines(t))
        if ok:
            movable.append(slot)
    if not movable:
        return child
    slot = movable[rng.randrange(len(movable))]
    child.assign[slot] = idlest
    child.key[slot] = rng.uniform()
    return child


def mutate_genes(chrom: Chromosome, rng: RngStream, bounds: GeneBounds,
                 rate: float = 0.1) -> None:
    """Occasional fresh draw of each policy gene and of one slot key.

    Recombination and differentials both feed on pool diversity; once
    every survivor carries the same threshold, the same action cap or
    the same sequencing keys, neither can bring the lost values back.
    A small resample probability keeps every region of the gene box —
    and every within-machine order — reachable for the whole run.
    """
    if rng.uniform() < rate:
        lo, hi = bounds.zeta
        chrom.zeta = lo + (hi - lo) * rng.uniform()
    if rng.uniform() < rate:
        lo, hi = bounds.psi
        chrom.psi = lo + (hi - lo) * rng.uniform()
    if rng.uniform() < rate:
        lo, hi = bounds.thr_r
        chrom.thr_r = lo + (hi - lo) * rng.uniform()
    if rng.uniform() < rate:
        chrom.n_u = rng.randrange(bounds.n_u_max + 1)
    if chrom.n_slots and rng.uniform() < rate:
        chrom.key[rng.randrange(chrom.n_slots)] = rng.uniform()


def _front_leaders(pool: list[Individual], cap: int) -> list[Individual]:
    """Best-labeled member of each cost level on the pool's own
    (makespan, cost) front.

    The scalar label collapses the two objectives, so the roulette alone
    converges on whichever corner scores highest and progress elsewhere
    on the trade-off is pure drift.  Carrying one leader per front cost
    level gives every corner the same ratchet the global best enjoys.
    """
    objs = [ind.obj for ind in pool if ind.obj is not None]
    leaders: dict[float, Individual] = {}
    for ind in pool:
        if ind.obj is None:
            continue
        m, c = ind.obj
        if any(o[0] <= m and o[1] <= c and (o[0] < m or o[1] < c)
               for o in objs):
            continue
        cur = leaders.get(c)
        if cur is None or ind.label > cur.label:
            leaders[c] = ind
    return sorted(leaders.values(), key=lambda i: -i.label)[:cap]


def _roulette(pool: list[Individual], size: int, rng: RngStream) -> list[Individual]:
    """Fitness-proportional pick with the best and the front leaders
    kept; labels of mixed provenance are min-max normalized first."""
    best = max(pool, key=lambda ind: ind.label)
    out = [best]
    for ld in _front_leaders(pool, max(1, size // 8)):
        if len(out) < size and ld is not best:
            out.append(ld)
    vals = [ind.label for ind in pool]
    lo, hi = min(vals), max(vals)
    if hi > lo:
        norm = [0.05 + (v - lo) / (hi - lo) for v in vals]
    else:
        norm = [1.0] * len(vals)
    total = sum(norm)
    while len(out) < size:
        x = rng.uniform() * total
        acc = 0.0
        pick = pool[-1]
        for ind, wgt in zip(pool, norm):
            acc += wgt
            if x <= acc:
                pick = ind
                break
        out.append(pick)
    return out


def emode_step(pop: list[Individual], iteration: int, max_iter: int,
               inst: ProblemInstance, master: RngStream,
               cfg: PlannerConfig) -> list[Individual]:
    """One generation: produce a child per parent, then roulette over
    parents plus children."""
    nu = control_param(iteration, max_iter)
    srng = master.substream(NS_SEARCH, iteration)
    children: list[Individual] = []
    for ind in pop:
        if nu > 1.0:
            if srng.uniform() < 0.7:
                child = re_operator(ind.chrom, pop, inst, srng, cfg.bounds)
            else:
                child = de_operator(ind.chrom, pop, inst, srng, cfg.bounds)
        else:
            plan, preview = det_preview(inst, ind.chrom, master, cfg)
            cands = [(mid, pos) for mid, slots in plan.order.items()
                     for pos in range(len(slots) - 1)]
            child = None
            if cands:
                mid, pos = cands[srng.randrange(len(cands))]
                if prop1_swap(inst, preview, plan, mid, pos):
                    child = _apply_swap(ind.chrom, plan, mid, pos)
            if child is None:
                child = busiest_idlest_move(ind.chrom, inst, preview, srng)
        mutate_genes(child, srng, cfg.bounds)
        lbl, obj = label_static_obj(inst, child, master, cfg)
        children.append(Individual(child, lbl, "static", obj))
    return _roulette(pop + children, len(pop), srng)


def init_population(inst: ProblemInstance, idle_types: tuple[int, ...],
                    master: RngStream, cfg: PlannerConfig) -> list[Individual]:
    irng = master.substream(NS_SEARCH, 0)
    pop = []
    for _ in range(cfg.pop_size):
        ch = random_chromosome(inst, idle_types, irng, cfg.bounds)
        lbl, obj = label_static_obj(inst, ch, master, cfg)
        pop.append(Individual(ch, lbl, "static", obj))
    return pop


def plan(inst: ProblemInstance, iters: int, master: RngStream,
         cfg: PlannerConfig | None = None,
         idle_types: tuple[int, ...] = (),
         pop: list[Individual] | None = None,
         iter_offset: int = 0, max_iter: int | None = None
         ) -> tuple[list[Individual], list[tuple[int, float, float]]]:
    """Run the population search for a number of generations.

    Returns the final population and a history of (generation, best
    label, mean label).  An existing population can be passed in to
    continue a previous run (iter_offset keeps the control value on its
    global decay path).
    """
    cfg = cfg or PlannerConfig()
    if pop is None:
        pop = init_population(inst, idle_types, master, cfg)
    max_iter = max_iter or (iter_offset + iters)
    history = []
    for k in range(iters):
        it = iter_offset + k + 1
        pop = emode_step(pop, it, max_iter, inst, master, cfg)
        labels = [ind.label for ind in pop]
        history.append((it, max(labels), sum(labels) / len(labels)))
    return pop, history
