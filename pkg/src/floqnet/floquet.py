"""Weight-two measurement schedules and their verification.

Two synthesizers are provided.  honeycomb_schedule emits the period-3
edge-color schedule of the brick-wall lattice, the reference instance
whose verification is guaranteed to pass.  pairwise_decompose splits the
rows of any CSS code into slots of weight-two checks; that direct
decomposition makes no regeneration promise, so verify_period runs the
schedule through the stabilizer tableau and reports what actually holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from floqnet.honeycomb import COLOR_PAULI, HoneycombLattice
from floqnet.pauli import PauliString
from floqnet.tableau import StabilizerTableau

LOCALITIES = ("local", "non_local")


@dataclass
class Check:
    """One weight-two Pauli measurement inside a schedule round."""

    pauli: PauliString
    round_index: int
    locality: str = "local"
    slot: int | None = None  # decomposition slot, when synthesized from rows

    def __post_init__(self):
        if self.locality not in LOCALITIES:
            raise ValueError(f"bad locality {self.locality!r}")

    @property
    def qubits(self) -> tuple:
        support = self.pauli.support()
        if support.size != 2:
            raise ValueError("check is not weight-two")
        return int(support[0]), int(support[1])

    def as_line(self) -> str:
        qa, qb = self.qubits
        return (
            f"{self.round_index} {qa} {self.pauli.symbol_at(qa)} "
            f"{qb} {self.pauli.symbol_at(qb)} {self.locality}"
        )


@dataclass
class CheckSchedule:
    """Periodic rounds of weight-two checks plus parent-code metadata."""

    n: int
    period: int
    rounds: list
    parent_stabilizers: list
    parent_k: int
    logical_observables: list = field(default_factory=list)
    nominal_slots: int | None = None

    def all_checks(self):
        for rnd in self.rounds:
            yield from rnd

    @property
    def check_count(self) -> int:
        return sum(len(r) for r in self.rounds)

    @property
    def nonlocal_count(self) -> int:
        return sum(1 for c in self.all_checks() if c.locality == "non_local")

    @property
    def period_factor(self) -> float | None:
        """Achieved period over the nominal ceil(w/2) slot count."""
        if not self.nominal_slots:
            return None
        return self.period / self.nominal_slots

    # -- file format ---------------------------------------------------
    # header "n period", then one check per line:
    # "round qubit_a pauli_a qubit_b pauli_b locality"

    def save(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"{self.n} {self.period}\n")
            for check in self.all_checks():
                fh.write(check.as_line() + "\n")

    @classmethod
    def load(cls, path) -> "CheckSchedule":
        """Rebuild rounds from a schedule file.

        Parent stabilizers and logical observables are not part of the
        file format and come back empty; the loaded value round-trips the
        check structure byte-exactly.
        """
        with open(path, "r", encoding="ascii") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: bad schedule header")
            n, period = int(header[0]), int(header[1])
            rounds = [[] for _ in range(period)]
            for line in fh:
                parts = line.split()
                if not parts:
                    continue
                if len(parts) != 6:
                    raise ValueError(f"{path}: bad check line {line!r}")
                rnd, qa, pa, qb, pb, locality = parts
                rnd, qa, qb = int(rnd), int(qa), int(qb)
                if not 0 <= rnd < period:
                    raise ValueError(f"{path}: round {rnd} out of range")
                pauli = PauliString.single(n, qa, pa) * PauliString.single(n, qb, pb)
                rounds[rnd].append(Check(pauli, rnd, locality))
        return cls(
            n=n,
            period=period,
            rounds=rounds,
            parent_stabilizers=[],
            parent_k=0,
        )


def honeycomb_schedule(lat: HoneycombLattice) -> CheckSchedule:
    """Period-3 schedule: round r measures the color-r Pauli on every
    color-r edge; parent stabilizers are the 6-body plaquettes."""
    rounds = []
    for color in range(3):
        rounds.append(
            [
                Check(PauliString.two_body(lat.n, COLOR_PAULI[color], a, b), color)
                for a, b, _ in lat.edges_of_color(color)
            ]
        )
    parents = [
        PauliString.uniform(lat.n, COLOR_PAULI[color], qubits)
        for qubits, color, _ in lat.plaquettes
    ]
    return CheckSchedule(
        n=lat.n,
        period=3,
        rounds=rounds,
        parent_stabilizers=parents,
        parent_k=2,  # torus instance, two encoded qubits
        logical_observables=lat.logical_operators(),
        nominal_slots=3,
    )


def pairwise_decompose(code) -> CheckSchedule:
    """Split each parity-check row into ceil(w/2) slots of weight-two checks.

    Pairing is deterministic: ascending support, pairs (q1,q2), (q3,q4),
    ...; an odd leftover pairs with q1.  X rows emit XX checks, Z rows ZZ.
    Slot k of every row lands in layer k, and each layer is greedily
    first-fit colored into qubit-disjoint sub-rounds, so conflicts extend
    the period beyond the nominal slot count rather than failing.
    """
    rows = []
    for kind, matrix in (("X", code.hx), ("Z", code.hz)):
        dense = matrix.to_dense()
        for r in range(matrix.rows):
            support = [int(q) for q in np.flatnonzero(dense[r])]
            rows.append((kind, support))
    weights = [len(s) for _, s in rows]
    if not rows:
        raise ValueError("code has no check rows to decompose")
    if max(weights) > 7:
        raise ValueError(f"check weight {max(weights)} exceeds the supported 7")
    if min(weights) < 2:
        raise ValueError("weight-1 rows cannot be covered by weight-two checks")

    nominal = math.ceil(max(weights) / 2)
    pairs_per_row = []
    for kind, support in rows:
        pairs = [
            (support[i], support[i + 1]) for i in range(0, len(support) - 1, 2)
        ]
        if len(support) % 2:
            pairs.append((support[-1], support[0]))
        pairs_per_row.append((kind, pairs))

    rounds = []
    for slot in range(nominal):
        layer = [
            (kind, pairs[slot])
            for kind, pairs in pairs_per_row
            if slot < len(pairs)
        ]
        sub_rounds: list = []
        used: list = []
        for kind, (qa, qb) in layer:
            for i, busy in enumerate(used):
                if qa not in busy and qb not in busy:
                    sub_rounds[i].append((kind, qa, qb, slot))
                    busy.update((qa, qb))
                    break
            else:
                sub_rounds.append([(kind, qa, qb, slot)])
                used.append({qa, qb})
        rounds.extend(sub_rounds)

    built = []
    for round_index, entries in enumerate(rounds):
        built.append(
            [
                Check(
                    PauliString.two_body(code.n, kind, qa, qb),
                    round_index,
                    slot=slot,
                )
                for kind, qa, qb, slot in entries
            ]
        )

    parents = []
    for kind, support in rows:
        parents.append(PauliString.uniform(code.n, kind, support))
    return CheckSchedule(
        n=code.n,
        period=len(built),
        rounds=built,
        parent_stabilizers=parents,
        parent_k=code.k,
        nominal_slots=nominal,
    )


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class StabilizerVerdict:
    text: str
    in_isg: bool
    sign: int | None
    formed_after_period: int | None


@dataclass
class VerificationReport:
    n: int
    period: int
    periods_run: int
    weight_two_ok: bool
    rounds_disjoint_ok: bool
    ancilla_free_ok: bool
    parent_k: int
    k_inst: int
    stabilizers: list
    failures: list

    @property
    def all_parents_in_isg(self) -> bool:
        return all(s.in_isg for s in self.stabilizers)

    @property
    def k_matches(self) -> bool:
        return self.k_inst == self.parent_k

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "period": self.period,
            "periods_run": self.periods_run,
            "weight_two_ok": self.weight_two_ok,
            "rounds_disjoint_ok": self.rounds_disjoint_ok,
            "ancilla_free_ok": self.ancilla_free_ok,
            "parent_k": self.parent_k,
            "k_inst": self.k_inst,
            "k_matches": self.k_matches,
            "all_parents_in_isg": self.all_parents_in_isg,
            "passed": self.passed,
            "failures": list(self.failures),
            "stabilizers": [
                {
                    "text": s.text,
                    "in_isg": s.in_isg,
                    "sign": s.sign,
                    "formed_after_period": s.formed_after_period,
                }
                for s in self.stabilizers
            ],
        }


def verify_period(s: CheckSchedule, periods: int = 2, seed: int = 0) -> VerificationReport:
    """Run the schedule from the maximally mixed state and report what the
    resulting ISG contains.

    The default of two periods covers the warm-up transient: a period-3
    pairwise schedule grows one plaquette color class per round, so the
    class completed by the final round of a period first appears one round
    into the next period.  From the second period boundary on, the ISG is
    steady and every parent stabilizer must be regenerated each period;
    formed_after_period records when each one first appeared.  Random
    measurement outcomes are drawn from a generator seeded by `seed`.
    """
    if periods < 1:
        raise ValueError("periods must be >= 1")
    failures = []

    weight_two_ok = all(c.pauli.weight == 2 for c in s.all_checks())
    if not weight_two_ok:
        failures.append("a check is not weight-two")

    rounds_disjoint_ok = True
    for rnd in s.rounds:
        seen: set = set()
        for c in rnd:
            qs = set(c.pauli.support().tolist())
            if seen & qs:
                rounds_disjoint_ok = False
            seen |= qs
    if not rounds_disjoint_ok:
        failures.append("checks within a round share qubits")

    ancilla_free_ok = all(c.pauli.n == s.n for c in s.all_checks()) and all(
        p.n == s.n for p in s.parent_stabilizers
    )
    if not ancilla_free_ok:
        failures.append("operator qubit counts disagree with schedule n")

    rng = np.random.default_rng(seed)
    tab = StabilizerTableau(s.n)
    formed: list = [None] * len(s.parent_stabilizers)
    for period in range(1, periods + 1):
        for rnd in s.rounds:
            for check in rnd:
                tab.measure(check.pauli, rng=rng)
        for i, parent in enumerate(s.parent_stabilizers):
            if formed[i] is None and tab.contains(parent).in_group:
                formed[i] = period

    verdicts = []
    for i, parent in enumerate(s.parent_stabilizers):
        membership = tab.contains(parent)
        verdicts.append(
            StabilizerVerdict(
                text=parent.to_text(),
                in_isg=membership.in_group,
                sign=membership.sign,
                formed_after_period=formed[i],
            )
        )
        if not membership.in_group:
            failures.append(f"parent stabilizer {i} missing from the final ISG")

    k_inst = tab.logical_count()
    if k_inst != s.parent_k:
        failures.append(f"k_inst={k_inst} differs from parent k={s.parent_k}")

    return VerificationReport(
        n=s.n,
        period=s.period,
        periods_run=periods,
        weight_two_ok=weight_two_ok,
        rounds_disjoint_ok=rounds_disjoint_ok,
        ancilla_free_ok=ancilla_free_ok,
        parent_k=s.parent_k,
        k_inst=k_inst,
        stabilizers=verdicts,
        failures=failures,
    )
