"""Distributed-hardware model: nodes, heralded Bell pairs, purification.

The entanglement link is a double-click protocol: each attempt succeeds
with probability eta^2/2, attempts are i.i.d., and dead-time or tuning
dynamics are folded into tau_attempt.  Photon loss therefore costs time,
never fidelity; the pair fidelity is a separate hardware figure.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field, fields, replace

import numpy as np

from floqnet.floquet import CheckSchedule


@dataclass(frozen=True)
class PhysicalParams:
    """Hardware figures for one network node; all times in seconds.

    Defaults are documentation-grade and every field is overridable via
    the config file.  bell_fidelity is a plain configuration knob, not a
    derived device figure.  classical_latency is an optional additive
    term on the herald deadline, default off.
    """

    tau_attempt: float = 100e-9
    eta: float = 0.4
    f_target: float = 0.996
    tau_gate: float = 1e-6
    tau_meas: float = 60e-9
    p_gate_err: float = 1e-3
    p_meas_err: float = 1e-3
    bell_fidelity: float = 0.99
    purcell: float = 30.0
    mw_rabi: float = 30e6
    t2_e: float = 2.2e-3
    t2_n: float = 10e-3
    t1_e: float = 17e-3
    linewidth: float = 38e6
    zfs_d: float = 11_160e6
    zfs_e: float = 541e6
    classical_latency: float = 0.0

    def __post_init__(self):
        for name in ("tau_attempt", "tau_gate", "tau_meas", "t2_e", "t2_n", "t1_e"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("p_gate_err", "p_meas_err", "bell_fidelity"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must lie in (0, 1]")
        if not 0 < self.f_target < 1:
            raise ValueError("f_target must lie in (0, 1)")
        if self.classical_latency < 0:
            raise ValueError("classical_latency must be non-negative")

    def override(self, **changes) -> "PhysicalParams":
        known = {f.name for f in fields(self)}
        bad = set(changes) - known
        if bad:
            raise ValueError(f"unknown physical parameters: {sorted(bad)}")
        return replace(self, **changes)


@dataclass(frozen=True)
class HeraldStats:
    p_succ: float
    attempts_quantile: int
    t_herald: float
    expected_attempts: float
    fidelity: float  # carried along so callers see loss costs time, not fidelity


def double_click_success(eta: float) -> float:
    """Per-attempt success probability: both photons detected, and the
    Bell-state measurement resolves half the Bell basis."""
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    return eta * eta / 2.0


def herald_time(p: PhysicalParams) -> HeraldStats:
    """Geometric quantile of the attempt process.

    attempts_quantile is the smallest n with 1 - (1 - p_succ)^n >= f_target,
    so a fraction f_target of node pairs herald within the deadline.
    """
    p_succ = double_click_success(p.eta)
    if p_succ >= 1.0:
        n = 1
    else:
        n = max(1, math.ceil(math.log1p(-p.f_target) / math.log1p(-p_succ)))
        # nudge across float error at the quantile boundary
        while n > 1 and 1.0 - (1.0 - p_succ) ** (n - 1) >= p.f_target:
            n -= 1
        while 1.0 - (1.0 - p_succ) ** n < p.f_target:
            n += 1
    return HeraldStats(
        p_succ=p_succ,
        attempts_quantile=n,
        t_herald=n * p.tau_attempt + p.classical_latency,
        expected_attempts=1.0 / p_succ,
        fidelity=p.bell_fidelity,
    )


@dataclass
class HeraldSample:
    """Empirical attempt counts for a batch of independently driven pairs."""

    attempts: np.ndarray
    deadline_attempts: int
    success_fraction: float
    stats: HeraldStats

    def histogram(self):
        counts = Counter(self.attempts.tolist())
        return sorted(counts.items())

    def write_histogram_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh)
            writer.writerow(["attempts", "count"])
            for attempts, count in self.histogram():
                writer.writerow([attempts, count])


def simulate_heralding(p: PhysicalParams, pair_count: int, seed: int = 0) -> HeraldSample:
    """Draw the attempt loop for pair_count independent links.

    Each link retries Bernoulli(p_succ) attempts until its first success;
    success_fraction is the share that land within the f_target deadline.
    """
    if pair_count < 1:
        raise ValueError("pair_count must be >= 1")
    stats = herald_time(p)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    attempts = rng.geometric(stats.p_succ, size=pair_count)
    fraction = float(np.mean(attempts <= stats.attempts_quantile))
    return HeraldSample(
        attempts=attempts,
        deadline_attempts=stats.attempts_quantile,
        success_fraction=fraction,
        stats=stats,
    )


def purify(f_in: float) -> tuple:
    """One recurrence round on two Werner pairs of fidelity f_in.

    Returns (f_out, p_accept).  Below F = 1/2 the recurrence cannot
    improve the pair, so such inputs are rejected.
    """
    if not 0.5 < f_in <= 1.0:
        raise ValueError("purification needs f_in in (0.5, 1]")
    g = (1.0 - f_in) / 3.0
    p_accept = f_in * f_in + 2.0 * f_in * g + 5.0 * g * g
    f_out = (f_in * f_in + g * g) / p_accept
    return f_out, p_accept


# ---------------------------------------------------------------------------
# partitions


@dataclass
class NodePartition:
    node_count: int
    assignment: np.ndarray  # qubit index -> node id
    channels_per_node: int = 1

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=np.int64)
        if self.node_count < 1:
            raise ValueError("node_count must be >= 1")
        if self.channels_per_node < 1:
            raise ValueError("channels_per_node must be >= 1")
        if self.assignment.ndim != 1:
            raise ValueError("assignment must be a flat qubit -> node map")
        if self.assignment.size and not (
            (0 <= self.assignment).all() and (self.assignment < self.node_count).all()
        ):
            raise ValueError("assignment references a node id out of range")

    def node_of(self, qubit: int) -> int:
        return int(self.assignment[qubit])


def single_node(n: int, channels_per_node: int = 1) -> NodePartition:
    return NodePartition(1, np.zeros(n, dtype=np.int64), channels_per_node)


def round_robin(n: int, node_count: int, channels_per_node: int = 1) -> NodePartition:
    return NodePartition(node_count, np.arange(n) % node_count, channels_per_node)


def block_partition(n: int, node_count: int, channels_per_node: int = 1) -> NodePartition:
    """Contiguous index blocks, sizes as equal as the division allows."""
    bounds = np.linspace(0, n, node_count + 1).astype(np.int64)
    assignment = np.zeros(n, dtype=np.int64)
    for node in range(node_count):
        assignment[bounds[node] : bounds[node + 1]] = node
    return NodePartition(node_count, assignment, channels_per_node)


def bisect_lattice(lat, channels_per_node: int = 1) -> NodePartition:
    """Split a brick-wall lattice into two nodes down the middle column."""
    assignment = np.zeros(lat.n, dtype=np.int64)
    half = lat.width // 2
    for y in range(lat.height):
        for x in range(lat.width):
            assignment[lat.vertex(x, y)] = 0 if x < half else 1
    return NodePartition(2, assignment, channels_per_node)


@dataclass(frozen=True)
class PartitionReport:
    node_count: int
    nonlocal_per_round: tuple
    nonlocal_total: int

    @property
    def bell_pairs_per_cycle(self) -> int:
        # one shared pair per non-local check per cycle
        return self.nonlocal_total


def partition_checks(s: CheckSchedule, part: NodePartition) -> PartitionReport:
    """Tag every check local or non-local in place and count the crossings."""
    if part.assignment.size != s.n:
        raise ValueError(
            f"partition covers {part.assignment.size} qubits, schedule has {s.n}"
        )
    per_round = []
    for rnd in s.rounds:
        crossing = 0
        for check in rnd:
            qa, qb = check.qubits
            check.locality = (
                "local" if part.node_of(qa) == part.node_of(qb) else "non_local"
            )
            crossing += check.locality == "non_local"
        per_round.append(crossing)
    return PartitionReport(
        node_count=part.node_count,
        nonlocal_per_round=tuple(per_round),
        nonlocal_total=sum(per_round),
    )


@dataclass(frozen=True)
class NonlocalCost:
    time: float
    bell_pairs: int


def nonlocal_check_cost(p: PhysicalParams, distill_rounds: int = 0) -> NonlocalCost:
    """Time and pair budget for one non-local weight-two check: herald the
    pairs (serialized on one channel), one local gate, one optical readout."""
    if distill_rounds < 0:
        raise ValueError("distill_rounds must be >= 0")
    pairs = 2 ** distill_rounds
    stats = herald_time(p)
    return NonlocalCost(
        time=stats.t_herald * pairs + p.tau_gate + p.tau_meas,
        bell_pairs=pairs,
    )
