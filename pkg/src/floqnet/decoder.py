"""Single-fault dictionary and minimum-weight matching decoder.

The dictionary enumerates weight-one fault primitives (one Pauli on one
qubit at one insertion slot, or one flipped outcome); every multi-qubit
noise draw the sampler makes factors into these.  Each primitive's
detector signature is computed once and equivalent faults collapse into
one record.  Decoding tries an exact signature lookup first (a weight-one
explanation beats any matching), then minimum-weight matching on the
fault graph: two-detector records are edges, single-detector records are
boundary edges, wider records are greedily split into edges (logged,
since that is an approximation).  Matching is exact subset DP when few
detectors fire and greedy nearest-pair above that.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

_INF = float("inf")
EXACT_LIMIT = 20  # fired detectors; above this the greedy matcher runs


def _anticommutes(fault, pauli) -> int:
    """fault: [(qubit, idx)]; idx encodes (x<<1)|z, nonzero."""
    parity = 0
    for q, a in fault:
        b = (int(pauli.x[q]) << 1) | int(pauli.z[q])
        parity ^= (b != 0) and (b != a)
    return parity


@dataclass(frozen=True)
class FaultRecord:
    kind: str  # pauli | meas
    event: int  # first event the fault can touch (meas: the flipped event)
    qubit: int  # faulted qubit, -1 for meas
    value: int  # Pauli index 1..3, 1 for meas
    detectors: tuple
    logical_mask: int
    multiplicity: int = 1  # enumerated faults collapsed into this record


@dataclass
class FaultDictionary:
    records: list  # deduped FaultRecords
    signatures: dict  # detector tuple -> {logical mask: multiplicity}
    conflicts: list  # detector tuples with more than one mask
    undetectable: list  # records with no detectors but a logical flip
    hyperedge_count: int
    fault_count: int  # before dedup

    def dump_text(self) -> str:
        lines = []
        for i, rec in enumerate(self.records):
            dets = ",".join(str(d) for d in rec.detectors) or "-"
            lines.append(f"{i} {dets} {rec.logical_mask}")
        return "\n".join(lines)


def enumerate_faults(dm):
    """Yield weight-one fault primitives: (kind, first_event, qubit, value).

    "meas" flips one outcome.  "pauli" inserts one single-qubit Pauli just
    before `first_event`, the next check touching that qubit; one extra slot
    past the window catches noise landing after a qubit's last noisy check.
    Every multi-qubit noise draw factors into these primitives, which keeps
    the matching graph made of low-degree edges.
    """
    t = dm.table
    e0, e_noisy = dm.noisy_start, dm.noisy_events
    for e in range(e0, e_noisy):
        yield "meas", e, -1, 1
    qubit_events = _qubit_event_index(dm)
    for q in range(t.n):
        slots = [e for e in qubit_events[q] if e0 <= e < e_noisy]
        tail = [e for e in qubit_events[q] if e >= e_noisy]
        if tail:
            slots.append(tail[0])
        for e in slots:
            for v in range(1, 4):
                yield "pauli", e, q, v


def fault_signature(dm, pauli, first_event):
    """Detector and logical bits of one inserted Pauli.

    Only events sharing a qubit with the fault can flip, so the scan
    touches a handful of events rather than the whole table.
    """
    t = dm.table
    qubit_events = _qubit_event_index(dm)
    fired = {}
    seen = set()
    for q, _ in pauli:
        for e in qubit_events[q]:
            if e < first_event or e in seen:
                continue
            seen.add(e)
            if _anticommutes(pauli, t.paulis[e]):
                for d in dm.detectors_of_event(e):
                    fired[int(d)] = fired.get(int(d), 0) ^ 1
    detectors = tuple(sorted(d for d, bit in fired.items() if bit))
    mask = 0
    for l in range(t.logical_count):
        if _anticommutes(pauli, t.paulis[t.event_count + l]):
            mask |= 1 << l
    return detectors, mask


def _qubit_event_index(dm):
    cached = getattr(dm, "_qubit_events", None)
    if cached is None:
        t = dm.table
        cached = [[] for _ in range(t.n)]
        for e in range(t.event_count):
            cached[int(t.ev_qa[e])].append(e)
            cached[int(t.ev_qb[e])].append(e)
        dm._qubit_events = cached
    return cached


def build_fault_dictionary(dm) -> FaultDictionary:
    signatures = {}
    exemplars = {}
    counts = {}
    fault_count = 0
    for kind, event, qubit, value in enumerate_faults(dm):
        fault_count += 1
        if kind == "meas":
            detectors = tuple(sorted(int(d) for d in dm.detectors_of_event(event)))
            mask = 0
        else:
            detectors, mask = fault_signature(dm, [(qubit, value)], event)
        per_mask = signatures.setdefault(detectors, {})
        per_mask[mask] = per_mask.get(mask, 0) + 1
        key = (detectors, mask)
        counts[key] = counts.get(key, 0) + 1
        if key not in exemplars:
            exemplars[key] = FaultRecord(kind, event, qubit, value, detectors, mask)

    records = [
        replace(exemplars[k], multiplicity=counts[k])
        for k in sorted(exemplars, key=lambda k: (k[0], k[1]))
    ]
    conflicts = [dets for dets, masks in sorted(signatures.items()) if len(masks) > 1]
    undetectable = [r for r in records if not r.detectors and r.logical_mask]
    hyperedges = sum(1 for r in records if len(r.detectors) > 2)
    return FaultDictionary(
        records=records,
        signatures=signatures,
        conflicts=conflicts,
        undetectable=undetectable,
        hyperedge_count=hyperedges,
        fault_count=fault_count,
    )


@dataclass(frozen=True)
class DecodeOutcome:
    mask: int
    failed: bool
    method: str


class MatchingDecoder:
    """Minimum-weight decoder over the single-fault dictionary.

    A syndrome equal to a known single-fault signature has a weight-one
    explanation, which no matching of two or more graph edges can beat,
    so an exact signature lookup runs first.  Degenerate signatures
    (several masks share one signature) resolve to the most frequent
    mask; such faults are inherently ambiguous and the losing side is
    counted as decoder failure.  Everything else goes through matching
    on the fault graph.
    """

    def __init__(self, dictionary: FaultDictionary, detector_count: int):
        self.dictionary = dictionary
        self.detector_count = detector_count
        self.lookup = {
            dets: max(per_mask.items(), key=lambda kv: (kv[1], -kv[0]))[0]
            for dets, per_mask in dictionary.signatures.items()
            if dets
        }
        self._weight = {
            dets: sum(per_mask.values())
            for dets, per_mask in dictionary.signatures.items()
            if dets
        }
        edges = {}
        boundary = {}
        wide = []
        for rec in dictionary.records:
            dets = rec.detectors
            if len(dets) == 1:
                boundary.setdefault(dets[0], rec.logical_mask)
            elif len(dets) == 2:
                edges.setdefault((dets[0], dets[1]), rec.logical_mask)
            elif len(dets) > 2:
                wide.append(rec)
        self.edges = edges
        self.boundary = boundary
        # a wide record must act like a product of graphlike ones, so
        # split it into disjoint existing edges with matching total mask;
        # failures fall back to synthetic consecutive pairs (approximate)
        self.decomposed = 0
        self.synthetic = 0
        for rec in wide:
            if self._decompose(rec.detectors, rec.logical_mask) is not None:
                self.decomposed += 1
                continue
            self.synthetic += 1
            dets = rec.detectors
            for i in range(0, len(dets) - 1, 2):
                pair_mask = rec.logical_mask if i == 0 else 0
                edges.setdefault((dets[i], dets[i + 1]), pair_mask)
            if len(dets) % 2:
                boundary.setdefault(dets[-1], 0)
        self._build_distances()

    def _decompose(self, dets, mask):
        """Partition `dets` into existing edges/boundaries XORing to `mask`."""

        def walk(rest, acc):
            if not rest:
                return acc if acc == mask else None
            u = rest[0]
            for j in range(1, len(rest)):
                m = self.edges.get((u, rest[j]))
                if m is not None:
                    got = walk(rest[1:j] + rest[j + 1 :], acc ^ m)
                    if got is not None:
                        return got
            m = self.boundary.get(u)
            if m is not None:
                return walk(rest[1:], acc ^ m)
            return None

        return walk(list(dets), 0)

    def _build_distances(self):
        d = self.detector_count
        adj = [[] for _ in range(d)]
        for (u, v), mask in sorted(self.edges.items()):
            adj[u].append((v, mask))
            adj[v].append((u, mask))
        for lst in adj:
            lst.sort()

        dist = np.full((d, d), np.iinfo(np.int32).max, dtype=np.int32)
        mask = np.zeros((d, d), dtype=np.int64)
        for src in range(d):
            dist[src, src] = 0
            frontier = [src]
            while frontier:
                nxt = []
                for u in frontier:
                    for v, m in adj[u]:
                        if dist[src, v] > dist[src, u] + 1:
                            dist[src, v] = dist[src, u] + 1
                            mask[src, v] = mask[src, u] ^ m
                            nxt.append(v)
                frontier = nxt
        self.dist = dist
        self.mask = mask

        bdist = np.full(d, np.iinfo(np.int32).max, dtype=np.int32)
        bmask = np.zeros(d, dtype=np.int64)
        frontier = []
        for u, m in sorted(self.boundary.items()):
            bdist[u] = 1
            bmask[u] = m
            frontier.append(u)
        while frontier:
            nxt = []
            for u in frontier:
                for v, m in adj[u]:
                    if bdist[v] > bdist[u] + 1:
                        bdist[v] = bdist[u] + 1
                        bmask[v] = bmask[u] ^ m
                        nxt.append(v)
            frontier = nxt
        self.bdist = bdist
        self.bmask = bmask

    # -- decoding ------------------------------------------------------

    def decode(self, fired, erased=None) -> DecodeOutcome:
        fired = [int(f) for f in np.atleast_1d(np.asarray(fired, dtype=np.int64))]
        if erased is not None and len(erased):
            return self._decode_erased(fired, erased)
        if not fired:
            return DecodeOutcome(mask=0, failed=False, method="empty")
        hit = self.lookup.get(tuple(sorted(fired)))
        if hit is not None:
            return DecodeOutcome(mask=hit, failed=False, method="lookup")
        pair = self._decode_pair(fired)
        if pair is not None:
            return DecodeOutcome(mask=pair, failed=False, method="pair")
        if len(fired) <= EXACT_LIMIT:
            return self._decode_exact(fired)
        return self._decode_greedy(fired)

    def _decode_pair(self, fired):
        """Mask of the most probable two-fault explanation, if one exists."""
        target = frozenset(fired)
        best = None
        for s1, m1 in self.lookup.items():
            rest = target.symmetric_difference(s1)
            if not rest:
                continue
            m2 = self.lookup.get(tuple(sorted(rest)))
            if m2 is None:
                continue
            w = self._weight[s1] * self._weight[tuple(sorted(rest))]
            key = (w, -(m1 ^ m2))
            if best is None or key > best[0]:
                best = (key, m1 ^ m2)
        return None if best is None else best[1]

    def _pair_cost(self, u, v):
        c = int(self.dist[u, v])
        return (c, int(self.mask[u, v])) if c < np.iinfo(np.int32).max else (None, 0)

    def _bnd_cost(self, u):
        c = int(self.bdist[u])
        return (c, int(self.bmask[u])) if c < np.iinfo(np.int32).max else (None, 0)

    def _decode_exact(self, fired):
        f = len(fired)
        memo = {}

        def best(state):
            if state == 0:
                return 0.0, 0
            hit = memo.get(state)
            if hit is not None:
                return hit
            i = (state & -state).bit_length() - 1
            rest = state ^ (1 << i)
            best_cost, best_mask = _INF, 0
            c, m = self._bnd_cost(fired[i])
            if c is not None:
                sub_cost, sub_mask = best(rest)
                if c + sub_cost < best_cost:
                    best_cost, best_mask = c + sub_cost, m ^ sub_mask
            j_state = rest
            while j_state:
                j = (j_state & -j_state).bit_length() - 1
                j_state ^= 1 << j
                c, m = self._pair_cost(fired[i], fired[j])
                if c is None:
                    continue
                sub_cost, sub_mask = best(rest ^ (1 << j))
                if c + sub_cost < best_cost:
                    best_cost, best_mask = c + sub_cost, m ^ sub_mask
            memo[state] = (best_cost, best_mask)
            return best_cost, best_mask

        cost, mask = best((1 << f) - 1)
        if cost == _INF:
            return DecodeOutcome(mask=0, failed=True, method="exact")
        return DecodeOutcome(mask=mask, failed=False, method="exact")

    def _decode_greedy(self, fired):
        remaining = list(fired)
        mask = 0
        big = np.iinfo(np.int32).max
        while remaining:
            ids = np.asarray(remaining, dtype=np.int64)
            sub = self.dist[np.ix_(ids, ids)].astype(np.int64)
            np.fill_diagonal(sub, big)
            pair_pos = np.unravel_index(np.argmin(sub), sub.shape)
            pair_best = int(sub[pair_pos])
            bnd = self.bdist[ids].astype(np.int64)
            bnd_pos = int(np.argmin(bnd))
            bnd_best = int(bnd[bnd_pos])
            if pair_best >= big and bnd_best >= big:
                return DecodeOutcome(mask=0, failed=True, method="greedy")
            if pair_best <= bnd_best:
                i, j = sorted((int(pair_pos[0]), int(pair_pos[1])))
                mask ^= int(self.mask[ids[i], ids[j]])
                for pos in (j, i):
                    remaining.pop(pos)
            else:
                mask ^= int(self.bmask[ids[bnd_pos]])
                remaining.pop(bnd_pos)
        return DecodeOutcome(mask=mask, failed=False, method="greedy")

    def _decode_erased(self, fired, erased):
        """Erased detectors carry no information: drop them from every
        signature and match on the surviving graph.  Small instances
        only; the graph is rebuilt per call."""
        erased_set = {int(e) for e in erased}
        filtered = []
        signatures = {}
        for rec in self.dictionary.records:
            dets = tuple(d for d in rec.detectors if d not in erased_set)
            filtered.append(replace(rec, detectors=dets))
            per_mask = signatures.setdefault(dets, {})
            per_mask[rec.logical_mask] = (
                per_mask.get(rec.logical_mask, 0) + rec.multiplicity
            )
        reduced_dict = FaultDictionary(
            records=filtered,
            signatures=signatures,
            conflicts=[d for d, m in signatures.items() if len(m) > 1],
            undetectable=[],
            hyperedge_count=0,
            fault_count=self.dictionary.fault_count,
        )
        reduced = MatchingDecoder(reduced_dict, self.detector_count)
        fired = [f for f in fired if f not in erased_set]
        outcome = reduced.decode(fired)
        return DecodeOutcome(outcome.mask, outcome.failed, method="erased")


def decode(dm, syndrome, erased=None) -> DecodeOutcome:
    """Decode a syndrome against a detector model's cached decoder.

    syndrome may be a bit array over all detectors or a list of fired
    detector indices.
    """
    syndrome = np.asarray(syndrome)
    if syndrome.dtype == bool or (
        syndrome.size == dm.detector_count and syndrome.max(initial=0) <= 1
    ):
        fired = np.flatnonzero(syndrome)
    else:
        fired = syndrome
    return dm.decoder().decode(fired, erased=erased)
