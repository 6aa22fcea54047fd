"""Monte Carlo logical-error estimation for weight-two schedules.

The sampler is a Pauli-frame simulation: a frame of accumulated errors
rides along the measurement sequence, each check outcome flips when the
frame anticommutes with the check, and detectors are outcome index sets
whose flip parity is zero in every noiseless run.  Detector sets come
from a symbolic determinism scan of the stabilizer tableau, so the same
machinery serves any schedule that passes verification.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from floqnet.floquet import CheckSchedule, verify_period
from floqnet.pauli import PauliString
from floqnet.tableau import StabilizerTableau

# fixed sampling chunk: noise tables are drawn per chunk from spawned
# seeds, so results never depend on how many chunks a run is split into
CHUNK = 4096

_T_DEP, _T_BELL, _T_MEAS, _T_SKIP, _T_IDLE = range(5)


@dataclass(frozen=True)
class NoiseModel:
    """Per-location error probabilities.

    p_check: two-qubit depolarizing after each check (gate budget).
    p_meas_flip: classical flip of each check outcome.
    p_bell: two-qubit depolarizing on the pair consumed by a non-local
        check, injected before the outcome since the pair itself is bad.
    p_idle: single-qubit depolarizing per round on untouched qubits.
    p_skip: chance a non-local check misses its herald deadline; the
        outcome then never happens and its detectors are erased.
    """

    p_check: float = 0.0
    p_meas_flip: float = 0.0
    p_bell: float = 0.0
    p_idle: float = 0.0
    p_skip: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{f.name}={value} outside [0, 1]")

    @classmethod
    def from_params(cls, p) -> "NoiseModel":
        return cls(
            p_check=p.p_gate_err,
            p_meas_flip=p.p_meas_err,
            p_bell=1.0 - p.bell_fidelity,
            p_idle=0.0,
        )

    @property
    def is_zero(self) -> bool:
        return all(getattr(self, f.name) == 0.0 for f in fields(self))

    def with_overrides(self, **changes) -> "NoiseModel":
        return replace(self, **changes)


@dataclass
class EventTable:
    """Time-ordered measurement events plus virtual logical readouts.

    Events 0..event_count-1 are the schedule checks over all periods;
    the trailing entries of ev_x/ev_z are the logical observables,
    evaluated once against the final frame.
    """

    n: int
    words: int
    periods: int
    events_per_period: int
    paulis: list  # PauliString per event, logicals appended
    ev_x: np.ndarray  # (event_count + logicals, words) uint64
    ev_z: np.ndarray
    ev_qa: np.ndarray  # (event_count,) int32
    ev_qb: np.ndarray
    bell_col: np.ndarray  # (event_count,) int32, -1 for local checks
    bell_count: int
    idle_evt: np.ndarray  # (K,) int32: inject after this event
    idle_qubit: np.ndarray  # (K,) int32

    @property
    def event_count(self) -> int:
        return self.ev_qa.size

    @property
    def logical_count(self) -> int:
        return self.ev_x.shape[0] - self.event_count


def _pack_rows(paulis, n):
    words = max(1, (n + 63) // 64)
    xs = np.zeros((len(paulis), words), dtype=np.uint64)
    zs = np.zeros((len(paulis), words), dtype=np.uint64)
    for i, p in enumerate(paulis):
        for q in np.flatnonzero(p.x):
            xs[i, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
        for q in np.flatnonzero(p.z):
            zs[i, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
    return xs, zs


def build_event_table(s: CheckSchedule, periods: int) -> EventTable:
    paulis = []
    qa, qb, bell_col, rounds_of = [], [], [], []
    bell_count = 0
    idle_evt, idle_qubit = [], []
    for _ in range(periods):
        for rnd in s.rounds:
            touched = set()
            for check in rnd:
                a, b = check.qubits
                paulis.append(check.pauli)
                qa.append(a)
                qb.append(b)
                touched.update((a, b))
                if check.locality == "non_local":
                    bell_col.append(bell_count)
                    bell_count += 1
                else:
                    bell_col.append(-1)
            last_event = len(paulis) - 1
            for q in range(s.n):
                if q not in touched:
                    idle_evt.append(last_event)
                    idle_qubit.append(q)
    event_count = len(paulis)
    paulis = paulis + list(s.logical_observables)
    ev_x, ev_z = _pack_rows(paulis, s.n)
    return EventTable(
        n=s.n,
        words=ev_x.shape[1],
        periods=periods,
        events_per_period=event_count // periods,
        paulis=paulis,
        ev_x=ev_x,
        ev_z=ev_z,
        ev_qa=np.asarray(qa, dtype=np.int32),
        ev_qb=np.asarray(qb, dtype=np.int32),
        bell_col=np.asarray(bell_col, dtype=np.int32),
        bell_count=bell_count,
        idle_evt=np.asarray(idle_evt, dtype=np.int32),
        idle_qubit=np.asarray(idle_qubit, dtype=np.int32),
    )


def _mask_bits(mask: int):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass
class DetectorModel:
    """Detectors plus the event table they index into."""

    table: EventTable
    detectors: list  # tuples of outcome indices, flip parity 0 noiselessly
    logical_observables: list  # tuples of virtual outcome indices
    cycles: int
    noisy_events: int  # events in [noisy_start, noisy_events) receive noise
    noisy_start: int = 0
    ev_det_ptr: np.ndarray = field(default=None, repr=False)
    ev_det_idx: np.ndarray = field(default=None, repr=False)
    _decoder: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.ev_det_ptr is None:
            counts = np.zeros(self.table.event_count + 1, dtype=np.int32)
            for det in self.detectors:
                for e in det:
                    counts[e + 1] += 1
            ptr = np.cumsum(counts).astype(np.int32)
            idx = np.zeros(int(ptr[-1]), dtype=np.int32)
            cursor = ptr[:-1].copy()
            for d, det in enumerate(self.detectors):
                for e in det:
                    idx[cursor[e]] = d
                    cursor[e] += 1
            self.ev_det_ptr = ptr
            self.ev_det_idx = idx

    @property
    def detector_count(self) -> int:
        return len(self.detectors)

    @property
    def logical_count(self) -> int:
        return len(self.logical_observables)

    def detectors_of_event(self, e: int):
        return self.ev_det_idx[self.ev_det_ptr[e] : self.ev_det_ptr[e + 1]]

    def decoder(self):
        if self._decoder is None:
            from floqnet.decoder import MatchingDecoder, build_fault_dictionary

            self._decoder = MatchingDecoder(
                build_fault_dictionary(self), self.detector_count
            )
        return self._decoder


def build_detectors(s: CheckSchedule, cycles: int, verify_seed: int = 0) -> DetectorModel:
    """Scan `cycles` periods of the schedule for deterministic outcomes.

    Each check outcome gets a global index; when the tableau reports an
    outcome as deterministic, the eliminating subset's recorded origins
    plus the outcome itself form a set with deterministic flip parity.
    Those raw sets mix the outcomes that re-derive a stabilizer this
    period with the fixed history that first formed it, so each one is
    differenced against the raw set of the same event slot one period
    earlier: the shared history cancels, leaving the comparison of
    consecutive derivations of the same stabilizer.  Slots deterministic
    for the first time keep their raw set, which is what the opening
    periods produce.  A final polish pass strips support explained by
    other detectors, normalizing slots where the elimination picked a
    sum of stabilizers over a single one.  The schedule must pass
    verification first.
    """
    if cycles < 1:
        raise ValueError("cycles must be >= 1")
    report = verify_period(s, periods=2, seed=verify_seed)
    if not report.passed:
        raise ValueError(
            "schedule failed verification: " + "; ".join(report.failures)
        )
    table = build_event_table(s, cycles)
    epp = table.events_per_period
    tab = StabilizerTableau(s.n)
    compared = []
    raw_by_event = {}
    for t in range(table.event_count):
        res = tab.measure(table.paulis[t], rng=None, tag=t)
        if res.deterministic:
            raw = frozenset(_mask_bits(res.provenance) + [t])
            raw_by_event[t] = raw
            prev = raw_by_event.get(t - epp)
            compared.append(raw ^ prev if prev else raw)
    detectors = []
    for cur in compared:
        # each set keeps its defining outcome (every partner's indices
        # are smaller), so reduction never empties it
        shrinking = True
        while shrinking:
            shrinking = False
            for other in detectors:
                merged = cur ^ other
                if merged and len(merged) < len(cur):
                    cur = merged
                    shrinking = True
        detectors.append(cur)
    detectors = [tuple(sorted(d)) for d in detectors]
    logical_sets = [
        (table.event_count + l,) for l in range(table.logical_count)
    ]
    return DetectorModel(
        table=table,
        detectors=detectors,
        logical_observables=logical_sets,
        cycles=cycles,
        noisy_events=table.event_count,
    )


# ---------------------------------------------------------------------------
# noise table generation


@dataclass
class NoiseTables:
    dep: np.ndarray  # (S, noisy_events) uint8: 0 none, else 2-qubit pauli
    bell: np.ndarray  # (S, bell_cols) uint8
    meas: np.ndarray  # (S, noisy_events) uint8 0/1
    skip: np.ndarray  # (S, bell_cols) uint8 0/1
    idle: np.ndarray  # (S, idle_cols) uint8: 0 none, else 1-qubit pauli

    @property
    def shots(self) -> int:
        return self.dep.shape[0]


def _chunk_rng(seed: int, table_id: int, chunk_index: int):
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(table_id, chunk_index))
    )


def draw_noise_tables(
    dm: DetectorModel, nm: NoiseModel, shots: int, seed: int, chunk_index: int
) -> NoiseTables:
    e0, e_noisy = dm.noisy_start, dm.noisy_events
    width = e_noisy - e0
    noisy_bell = int(np.sum(dm.table.bell_col[e0:e_noisy] >= 0))
    idle_evt = dm.table.idle_evt
    noisy_idle = int(np.sum((idle_evt >= e0) & (idle_evt < e_noisy)))

    rng = _chunk_rng(seed, _T_DEP, chunk_index)
    hit = rng.random((shots, width)) < nm.p_check
    which = rng.integers(1, 16, size=(shots, width), dtype=np.uint8)
    dep = np.where(hit, which, 0).astype(np.uint8)

    rng = _chunk_rng(seed, _T_BELL, chunk_index)
    hit = rng.random((shots, noisy_bell)) < nm.p_bell
    which = rng.integers(1, 16, size=(shots, noisy_bell), dtype=np.uint8)
    bell = np.where(hit, which, 0).astype(np.uint8)

    rng = _chunk_rng(seed, _T_MEAS, chunk_index)
    meas = (rng.random((shots, width)) < nm.p_meas_flip).astype(np.uint8)

    rng = _chunk_rng(seed, _T_SKIP, chunk_index)
    skip = (rng.random((shots, noisy_bell)) < nm.p_skip).astype(np.uint8)

    rng = _chunk_rng(seed, _T_IDLE, chunk_index)
    hit = rng.random((shots, noisy_idle)) < nm.p_idle
    which = rng.integers(1, 4, size=(shots, noisy_idle), dtype=np.uint8)
    idle = np.where(hit, which, 0).astype(np.uint8)

    return NoiseTables(dep=dep, bell=bell, meas=meas, skip=skip, idle=idle)


def run_tables(dm: DetectorModel, tables: NoiseTables, kernel: str | None = None):
    """Feed explicit noise tables through a sampling kernel.

    `kernel` overrides the active choice ("compiled" or "python"), which
    lets tests and benchmarks compare both on identical noise.
    """
    from floqnet import kernels

    t = dm.table
    shots = tables.shots
    det = np.zeros((shots, dm.detector_count), dtype=np.uint8)
    log = np.zeros((shots, dm.logical_count), dtype=np.uint8)
    erased = np.zeros((shots, dm.detector_count), dtype=np.uint8)
    # bell/skip table columns cover only the noisy window, so shift the
    # per-event column map down and blank entries outside the window
    bell_col = t.bell_col.copy()
    bell_col[: dm.noisy_start] = -1
    bell_col[dm.noisy_events :] = -1
    shift = np.int32(np.sum(t.bell_col[: dm.noisy_start] >= 0))
    bell_col[bell_col >= 0] -= shift
    lo = int(np.searchsorted(t.idle_evt, dm.noisy_start, side="left"))
    hi = int(np.searchsorted(t.idle_evt, dm.noisy_events, side="left"))
    kernels.get(kernel).run_batch(
        t.ev_x,
        t.ev_z,
        t.ev_qa,
        t.ev_qb,
        dm.ev_det_ptr,
        dm.ev_det_idx,
        bell_col,
        dm.noisy_start,
        dm.noisy_events,
        t.idle_evt[lo:hi],
        t.idle_qubit[lo:hi],
        tables.dep,
        tables.bell,
        tables.meas,
        tables.skip,
        tables.idle,
        det,
        log,
        erased,
    )
    return det, log, erased


@dataclass(frozen=True)
class ShotSample:
    detectors: np.ndarray
    logicals: np.ndarray
    erased: np.ndarray


def sample_shot(s: CheckSchedule, dm: DetectorModel, nm: NoiseModel, seed: int) -> ShotSample:
    """One Pauli-frame shot; deterministic given seed."""
    if s.n != dm.table.n:
        raise ValueError("schedule does not match the detector model")
    tables = draw_noise_tables(dm, nm, shots=1, seed=seed, chunk_index=0)
    det, log, erased = run_tables(dm, tables)
    return ShotSample(detectors=det[0], logicals=log[0], erased=erased[0])


# ---------------------------------------------------------------------------
# logical error estimation


@dataclass(frozen=True)
class MCResult:
    shots: int
    logical_failures: int
    logical_error_rate: float
    std_err: float
    decode_failures: int = 0
    detector_count: int = 0
    cycles: int = 0
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "shots": self.shots,
            "logical_failures": self.logical_failures,
            "logical_error_rate": self.logical_error_rate,
            "std_err": self.std_err,
            "decode_failures": self.decode_failures,
            "detector_count": self.detector_count,
            "cycles": self.cycles,
            "seed": self.seed,
        }


def _binomial_std_err(failures: int, shots: int) -> float:
    rate = failures / shots
    return math.sqrt(rate * (1.0 - rate) / shots)


WARMUP_PERIODS = 2
CLOSE_PERIODS = 2


def windowed_detector_model(s: CheckSchedule, cycles: int) -> DetectorModel:
    """Detector model with `cycles` noisy periods between noiseless padding."""
    dm = build_detectors(s, WARMUP_PERIODS + cycles + CLOSE_PERIODS)
    epp = dm.table.events_per_period
    dm.noisy_start = WARMUP_PERIODS * epp
    dm.noisy_events = (WARMUP_PERIODS + cycles) * epp
    return dm


def estimate_logical_error(
    s: CheckSchedule, nm: NoiseModel, cycles: int, shots: int, seed: int = 0
) -> MCResult:
    """Sample `shots` noisy runs of `cycles` periods and decode each.

    Noise is confined to a window of `cycles` periods.  Two noiseless
    warm-up periods precede it so the instantaneous group is fully
    formed before the first fault can land, and two noiseless periods
    follow it so faults in the last noisy period still produce their
    complete syndrome downstream.  Without the padding, edge faults
    fall where detector coverage is absent by construction and no
    decoder could remove the resulting floor.  A shot fails when the
    decoder's predicted logical flips differ from the actual frame
    flips.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if cycles < 1:
        raise ValueError("cycles must be >= 1")
    dm = windowed_detector_model(s, cycles)
    decoder = dm.decoder()

    failures = 0
    decode_failures = 0
    done = 0
    while done < shots:
        batch = min(CHUNK, shots - done)
        tables = draw_noise_tables(dm, nm, batch, seed, chunk_index=done // CHUNK)
        det, log, erased = run_tables(dm, tables)
        fired_any = det.any(axis=1)
        erased_any = erased.any(axis=1)
        actual_mask = np.zeros(batch, dtype=np.int64)
        for l in range(dm.logical_count):
            actual_mask |= log[:, l].astype(np.int64) << l
        for i in range(batch):
            if not fired_any[i] and not erased_any[i]:
                predicted = 0
            else:
                fired = np.flatnonzero(det[i])
                erased_ids = np.flatnonzero(erased[i]) if erased_any[i] else None
                outcome = decoder.decode(fired, erased=erased_ids)
                predicted = outcome.mask
                if outcome.failed:
                    decode_failures += 1
                    failures += 1
                    continue
            if predicted != int(actual_mask[i]):
                failures += 1
        done += batch

    return MCResult(
        shots=shots,
        logical_failures=failures,
        logical_error_rate=failures / shots,
        std_err=_binomial_std_err(failures, shots),
        decode_failures=decode_failures,
        detector_count=dm.detector_count,
        cycles=cycles,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# sweeps

SWEEP_CSV_COLUMNS = ["p_check", "lattice", "shots", "failures", "rate", "std_err"]


def run_sweep(
    schedules: dict,
    p_values,
    shots: int,
    cycles: int,
    seed: int = 0,
    nm_base: NoiseModel = None,
    on_row=None,
):
    """Estimate logical error for every (lattice label, p_check) pair.

    Only the p_check axis is swept; other noise fields come from
    nm_base when given, so lattice comparisons see one strength knob.
    The point at index i of p_values runs with seed + 7919 * i for
    every lattice, so size comparisons share the strength stream.
    on_row, when given, is called with the rows list after each point.
    """
    nm_base = nm_base or NoiseModel()
    rows = []
    for label, schedule in schedules.items():
        for sub_seed, p in enumerate(p_values):
            nm = nm_base.with_overrides(p_check=p)
            result = estimate_logical_error(
                schedule, nm, cycles=cycles, shots=shots,
                seed=seed + 7919 * sub_seed,
            )
            rows.append(
                {
                    "p_check": p,
                    "lattice": label,
                    "shots": result.shots,
                    "failures": result.logical_failures,
                    "rate": result.logical_error_rate,
                    "std_err": result.std_err,
                }
            )
            if on_row is not None:
                on_row(rows)
    return rows


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def estimate_crossing(rows, small: str, large: str):
    """Locate where the small-minus-large rate difference changes sign.

    Returns the log-interpolated p estimate, or None when the sweep
    shows no reversal.
    """
    by_p = {}
    for row in rows:
        by_p.setdefault(row["p_check"], {})[row["lattice"]] = row["rate"]
    ps = sorted(p for p, rates in by_p.items() if small in rates and large in rates)
    diffs = [by_p[p][small] - by_p[p][large] for p in ps]
    for i in range(len(ps) - 1):
        if diffs[i] > 0 >= diffs[i + 1]:
            d0, d1 = diffs[i], diffs[i + 1]
            if d0 == d1:
                return ps[i + 1]
            x0, x1 = math.log(ps[i]), math.log(ps[i + 1])
            return math.exp(x0 + (x1 - x0) * d0 / (d0 - d1))
    return None
