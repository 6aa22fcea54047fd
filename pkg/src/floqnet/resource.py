"""Closed-form cycle timing and Bell-pair throughput accounting.

A syndrome cycle is R sub-rounds.  Within one sub-round every node fires
its non-local checks over its Bell channels; the serialization factor
c_seq is the worst per-node queue depth, so the herald deadline is paid
c_seq times before the gate and readout land.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from floqnet.floquet import CheckSchedule
from floqnet.network import (
    NodePartition,
    PhysicalParams,
    herald_time,
    partition_checks,
)


@dataclass(frozen=True)
class CycleEstimate:
    sub_rounds: int
    tau_sub: float
    tau_cycle: float
    bell_pairs_per_cycle: int
    c_seq: int
    distill_rounds: int
    nonlocal_total: int
    t_herald: float
    reaction_limit: float  # R * tau_meas, the instant-herald lower bound

    def to_dict(self) -> dict:
        return {
            "sub_rounds": self.sub_rounds,
            "tau_sub": self.tau_sub,
            "tau_cycle": self.tau_cycle,
            "bell_pairs_per_cycle": self.bell_pairs_per_cycle,
            "c_seq": self.c_seq,
            "distill_rounds": self.distill_rounds,
            "nonlocal_total": self.nonlocal_total,
            "t_herald": self.t_herald,
            "reaction_limit": self.reaction_limit,
        }


def estimate_cycle(
    s: CheckSchedule,
    part: NodePartition,
    p: PhysicalParams,
    distill_rounds: int = 0,
) -> CycleEstimate:
    """Tag the schedule against the partition and price one cycle.

    c_seq is the worst node's ceil(queue / channels) where the queue is
    its non-local check count in its busiest sub-round times the Bell
    pairs each check consumes (2^distill_rounds).
    """
    if distill_rounds < 0:
        raise ValueError("distill_rounds must be >= 0")
    report = partition_checks(s, part)
    pairs_per_check = 2 ** distill_rounds

    worst_per_node = [0] * part.node_count
    for rnd in s.rounds:
        touched = [0] * part.node_count
        for check in rnd:
            if check.locality != "non_local":
                continue
            qa, qb = check.qubits
            touched[part.node_of(qa)] += 1
            touched[part.node_of(qb)] += 1
        for node, count in enumerate(touched):
            worst_per_node[node] = max(worst_per_node[node], count)

    c_seq = max(
        (
            math.ceil(worst * pairs_per_check / part.channels_per_node)
            for worst in worst_per_node
        ),
        default=0,
    )

    stats = herald_time(p)
    tau_sub = c_seq * stats.t_herald + p.tau_gate + p.tau_meas
    return CycleEstimate(
        sub_rounds=s.period,
        tau_sub=tau_sub,
        tau_cycle=s.period * tau_sub,
        bell_pairs_per_cycle=report.nonlocal_total * pairs_per_check,
        c_seq=c_seq,
        distill_rounds=distill_rounds,
        nonlocal_total=report.nonlocal_total,
        t_herald=stats.t_herald,
        reaction_limit=s.period * p.tau_meas,
    )


@dataclass(frozen=True)
class SweepPoint:
    label: str
    estimate: CycleEstimate
    k: int
    n: int

    @property
    def pairs_per_second(self) -> float:
        return self.estimate.bell_pairs_per_cycle / self.estimate.tau_cycle

    @property
    def rate(self) -> float:
        return self.k / self.n


def sweep_point(
    label: str,
    s: CheckSchedule,
    part: NodePartition,
    p: PhysicalParams,
    distill_rounds: int = 0,
) -> SweepPoint:
    return SweepPoint(
        label=label,
        estimate=estimate_cycle(s, part, p, distill_rounds),
        k=s.parent_k,
        n=s.n,
    )


_CSV_COLUMNS = [
    "label",
    "sub_rounds",
    "c_seq",
    "tau_sub_s",
    "tau_cycle_s",
    "bell_pairs_per_cycle",
    "pairs_per_second",
    "k",
    "n",
    "rate",
    "reaction_limit_s",
]


@dataclass
class ThroughputReport:
    points: list

    def __post_init__(self):
        if not self.points:
            raise ValueError("throughput report needs at least one sweep point")

    @property
    def linear_scaling_ok(self) -> bool:
        """Pairs per cycle must track cut size exactly at fixed distillation."""
        for point in self.points:
            est = point.estimate
            want = est.nonlocal_total * 2 ** est.distill_rounds
            if est.bell_pairs_per_cycle != want:
                return False
        return True

    def rows(self):
        for point in self.points:
            est = point.estimate
            yield {
                "label": point.label,
                "sub_rounds": est.sub_rounds,
                "c_seq": est.c_seq,
                "tau_sub_s": est.tau_sub,
                "tau_cycle_s": est.tau_cycle,
                "bell_pairs_per_cycle": est.bell_pairs_per_cycle,
                "pairs_per_second": point.pairs_per_second,
                "k": point.k,
                "n": point.n,
                "rate": point.rate,
                "reaction_limit_s": est.reaction_limit,
            }

    def to_table(self) -> str:
        header = (
            f"{'label':<18} {'R':>3} {'c_seq':>5} {'tau_sub':>10} {'tau_cycle':>10} "
            f"{'pairs/cyc':>9} {'pairs/s':>12} {'k/n':>9}"
        )
        lines = [header, "-" * len(header)]
        for row in self.rows():
            lines.append(
                f"{row['label']:<18} {row['sub_rounds']:>3} {row['c_seq']:>5} "
                f"{row['tau_sub_s'] * 1e6:>8.2f}us {row['tau_cycle_s'] * 1e6:>8.2f}us "
                f"{row['bell_pairs_per_cycle']:>9} {row['pairs_per_second']:>12.3e} "
                f"{row['k']:>4}/{row['n']:<4}"
            )
        return "\n".join(lines)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.DictWriter(fh, fieldnames=_CSV_COLUMNS)
            writer.writeheader()
            for row in self.rows():
                writer.writerow(row)

    def to_dict(self) -> dict:
        return {
            "linear_scaling_ok": self.linear_scaling_ok,
            "points": [
                {**row, "estimate": point.estimate.to_dict()}
                for row, point in zip(self.rows(), self.points)
            ],
        }


def throughput_report(points) -> ThroughputReport:
    return ThroughputReport(list(points))
