"""Solution encoding and decoding.

A chromosome covers one slot per real job plus one per reserved idle
space.  Each slot carries a machine assignment and a fractional sort key
(sequencing on its machine), and four policy genes ride along: the
preventive-maintenance wear fraction zeta, the joint-maintenance window
factor psi, the rework trigger threshold thr_r and the per-cycle
preventive cap n_u.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .model import IncapableMachineError, ProblemInstance
from .rng import RngStream


@dataclass
class Chromosome:
    assign: list[int]               # slot -> machine id
    key: list[float]                # slot -> fractional priority
    idle_types: tuple[int, ...]     # types of the trailing idle slots
    zeta: float = 0.6
    psi: float = 0.5
    thr_r: float = 0.5
    n_u: int = 2

    @property
    def n_slots(self) -> int:
        return len(self.assign)

    def copy(self) -> "Chromosome":
        return Chromosome(list(self.assign), list(self.key), self.idle_types,
                          self.zeta, self.psi, self.thr_r, self.n_u)

    def digest(self) -> str:
        h = hashlib.sha1()
        h.update(repr((self.assign, self.key, self.idle_types, self.zeta,
                       self.psi, self.thr_r, self.n_u)).encode())
        return h.hexdigest()[:16]

    def slot_type(self, inst: ProblemInstance, slot: int) -> int:
        n = inst.n_jobs
        return inst.jobs[slot].type if slot < n else self.idle_types[slot - n]

    def slot_is_idle(self, inst: ProblemInstance, slot: int) -> bool:
        return slot >= inst.n_jobs


@dataclass
class GeneBounds:
    """Sampling/mutation ranges for the policy genes."""

    zeta: tuple[float, float] = (0.05, 0.95)
    psi: tuple[float, float] = (0.0, 1.0)
    thr_r: tuple[float, float] = (0.05, 0.95)
    n_u_max: int = 4


@dataclass
class SchedulePlan:
    """A decoded chromosome: per-machine slot sequences.

    starts is None for a tight plan (every slot begins as soon as its
    machine frees up); an explicit map pins earliest start times.
    """

    order: dict[int, list[int]]     # machine id -> slot ids in sequence
    chrom: Chromosome
    starts: dict[int, float] | None = None

    def machine_of(self, slot: int) -> int:
        return self.chrom.assign[slot]

    def copy(self) -> "SchedulePlan":
        return SchedulePlan({m: list(s) for m, s in self.order.items()},
                            self.chrom.copy(),
                            None if self.starts is None else dict(self.starts))


def random_chromosome(inst: ProblemInstance, idle_types: tuple[int, ...],
                      rng: RngStream, bounds: GeneBounds | None = None) -> Chromosome:
    bounds = bounds or GeneBounds()
    assign: list[int] = []
    key: list[float] = []
    n = inst.n_jobs
    for slot in range(n + len(idle_types)):
        t = inst.jobs[slot].type if slot < n else idle_types[slot - n]
        caps = (list(inst.jobs[slot].nominal_times) if slot < n
                else inst.capable_machines(t))
        assign.append(caps[rng.randrange(len(caps))])
        key.append(rng.uniform())
    lo, hi = bounds.zeta
    zeta = lo + rng.uniform() * (hi - lo)
    lo, hi = bounds.psi
    psi = lo + rng.uniform() * (hi - lo)
    lo, hi = bounds.thr_r
    thr_r = lo + rng.uniform() * (hi - lo)
    n_u = rng.randint(0, bounds.n_u_max)
    return Chromosome(assign, key, idle_types, zeta, psi, thr_r, n_u)


def decode(chrom: Chromosome, inst: ProblemInstance) -> SchedulePlan:
    """Chromosome -> per-machine sequences, keys ascending, ties by slot id.

    Raises IncapableMachineError if any slot sits on a machine that
    cannot process its type.
    """
    order: dict[int, list[int]] = {m.id: [] for m in inst.machines}
    n = inst.n_jobs
    for slot, mid in enumerate(chrom.assign):
        if mid not in order:
            raise IncapableMachineError(f"slot {slot}: unknown machine {mid}")
        if slot < n:
            if not inst.jobs[slot].capable(mid):
                raise IncapableMachineError(
                    f"slot {slot}: machine {mid} cannot run job {inst.jobs[slot].id}")
        else:
            t = chrom.idle_types[slot - n]
            if mid not in inst.capable_machines(t):
                raise IncapableMachineError(
                    f"idle slot {slot}: machine {mid} cannot host type {t}")
        order[mid].append(slot)
    for mid in order:
        order[mid].sort(key=lambda s: (chrom.key[s], s))
    return SchedulePlan(order, chrom)


def planned_starts(plan: SchedulePlan, inst: ProblemInstance) -> dict[int, float]:
    """Nominal published timetable: tight sequences at nominal durations,
    no wear, no maintenance.  This is the baseline that execution drift
    is measured against."""
    out: dict[int, float] = {}
    n = inst.n_jobs
    for mid, slots in plan.order.items():
        t = 0.0
        for s in slots:
            out[s] = t
            if s < n:
                t += inst.jobs[s].nominal_times[mid]
            else:
                t += inst.idle_nominal[plan.chrom.idle_types[s - n]][mid]
    return out
