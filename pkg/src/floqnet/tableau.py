"""Stabilizer tableau tracking an instantaneous stabilizer group (ISG).

The tableau stores up to n independent commuting generators as rows of
x/z bit matrices with exact sign bits.  Only Pauli measurements are
supported; that is all a measurement schedule needs.  Membership queries
run symplectic Gaussian elimination per call and the reduced form is
cached between mutations, which makes steady-state verification sweeps
(where every measurement is deterministic) cheap.

Each generator also carries an "origin" bitmask over measurement-outcome
indices: the set of past outcomes whose product fixed this generator's
sign.  Deterministic measurements report the XOR of the origins they
eliminated against, which is exactly the outcome set a detector needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from floqnet.gf2 import rank as gf2_rank
from floqnet.pauli import PauliString, mul_phase_sum


@dataclass(frozen=True)
class Membership:
    """Result of a group-membership query: in_group(+/-) or not_in_group.

    provenance is the XOR of origin masks over the generators whose
    product realizes the queried Pauli; outcome tags recorded during
    measure() land here, so the mask names the outcomes that fixed the
    group's sign for this element.
    """

    in_group: bool
    sign: int | None = None
    provenance: int = 0

    def __str__(self) -> str:
        if not self.in_group:
            return "not_in_group"
        return "in_group(+)" if self.sign == 1 else "in_group(-)"


@dataclass(frozen=True)
class MeasureResult:
    """Outcome of one Pauli measurement.

    kind is "deterministic" or "random"; sign is the realized outcome.
    For deterministic outcomes, provenance is the XOR of the origin masks
    of the generators whose product reproduces the measured operator.
    """

    kind: str
    sign: int
    provenance: int = 0

    @property
    def deterministic(self) -> bool:
        return self.kind == "deterministic"


class StabilizerTableau:
    """Mutable, single-owner stabilizer group on n qubits."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self._xs = np.zeros((n, n), dtype=np.uint8)
        self._zs = np.zeros((n, n), dtype=np.uint8)
        self._phases = np.zeros(n, dtype=np.uint8)  # sign bit per generator
        self._origins: list[int] = [0] * n
        self.m = 0
        self._rref = None

    @classmethod
    def from_generators(cls, n: int, generators) -> "StabilizerTableau":
        t = cls(n)
        for g in generators:
            res = t.measure(g)
            if res.deterministic and res.sign != 1:
                raise ValueError(f"contradictory generator {g!r}")
        return t

    # -- queries -------------------------------------------------------

    def logical_count(self) -> int:
        return self.n - self.m

    def generators(self) -> list[PauliString]:
        return [
            PauliString(self._xs[i], self._zs[i], 2 * int(self._phases[i]))
            for i in range(self.m)
        ]

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau(self.n)
        t._xs[: self.m] = self._xs[: self.m]
        t._zs[: self.m] = self._zs[: self.m]
        t._phases[: self.m] = self._phases[: self.m]
        t._origins = list(self._origins)
        t.m = self.m
        return t

    def contains(self, p: PauliString) -> Membership:
        """Membership of p's Pauli body, with the group's sign for it.

        The query's own sign is ignored; the returned sign is relative to
        the positive form, so contains(-YY) and contains(+YY) agree.
        """
        if p.n != self.n:
            raise ValueError("qubit counts differ")
        if p.is_identity:
            return Membership(True, 1)
        if self._anticommute_vector(p).any():
            return Membership(False)
        sol = self._solve(p.x, p.z)
        if sol is None:
            return Membership(False)
        _, sign_bit, provenance = sol
        return Membership(True, 1 if sign_bit == 0 else -1, provenance)

    def check_invariants(self) -> None:
        """Assert mutual commutation and symplectic independence."""
        xs, zs = self._xs[: self.m], self._zs[: self.m]
        sym = (xs.astype(np.int64) @ zs.T + zs.astype(np.int64) @ xs.T) & 1
        if sym.any():
            raise AssertionError("generators do not all commute")
        if gf2_rank(np.concatenate([xs, zs], axis=1)) != self.m:
            raise AssertionError("generators are dependent")

    # -- measurement -----------------------------------------------------

    def measure(self, p: PauliString, rng=None, tag: int | None = None) -> MeasureResult:
        """Projective measurement of a Hermitian Pauli.

        Random outcomes are drawn from rng when given, else fixed to +1.
        tag, if given, is the outcome index recorded in origin masks.
        """
        if p.n != self.n:
            raise ValueError("qubit counts differ")
        if p.is_identity:
            raise ValueError("cannot measure the identity")
        p_bit = p.phase >> 1  # raises below if non-Hermitian
        if p.phase & 1:
            raise ValueError("cannot measure a non-Hermitian string")

        anti = self._anticommute_vector(p)
        hits = np.flatnonzero(anti)
        if hits.size:
            return self._measure_random(p, p_bit, int(hits[0]), hits[1:], rng, tag)

        sol = self._solve(p.x, p.z)
        if sol is None:
            # commutes with everything but is new: group grows by one
            sign = self._draw_sign(rng)
            self._insert_row(self.m, p, p_bit, sign, tag)
            self.m += 1
            self._rref = None
            return MeasureResult("random", sign)
        used, sign_bit, provenance = sol
        sign = 1 if (sign_bit ^ p_bit) == 0 else -1
        return MeasureResult("deterministic", sign, provenance)

    # -- internals -------------------------------------------------------

    def _anticommute_vector(self, p: PauliString) -> np.ndarray:
        xs, zs = self._xs[: self.m], self._zs[: self.m]
        acc = (xs & p.z).sum(axis=1, dtype=np.int64)
        acc += (zs & p.x).sum(axis=1, dtype=np.int64)
        return (acc & 1).astype(np.uint8)

    def _draw_sign(self, rng) -> int:
        if rng is None:
            return 1
        return 1 if int(rng.integers(2)) == 0 else -1

    def _insert_row(self, i: int, p: PauliString, p_bit: int, sign: int, tag) -> None:
        self._xs[i] = p.x
        self._zs[i] = p.z
        self._phases[i] = (1 if sign < 0 else 0) ^ p_bit
        self._origins[i] = (1 << tag) if tag is not None else 0

    def _measure_random(self, p, p_bit, pivot, rest, rng, tag) -> MeasureResult:
        if rest.size:
            # multiply the other anticommuting rows by the pivot row
            tsum = mul_phase_sum(
                self._xs[pivot], self._zs[pivot], self._xs[rest], self._zs[rest]
            )
            tsum += 2 * int(self._phases[pivot]) + 2 * self._phases[rest]
            if np.any(tsum & 1):
                raise AssertionError("commuting product gained an i phase")
            self._phases[rest] = (tsum >> 1) & 1
            self._xs[rest] ^= self._xs[pivot]
            self._zs[rest] ^= self._zs[pivot]
            opiv = self._origins[pivot]
            for r in rest:
                self._origins[int(r)] ^= opiv
        sign = self._draw_sign(rng)
        self._insert_row(pivot, p, p_bit, sign, tag)
        self._rref = None
        return MeasureResult("random", sign)

    def _build_rref(self):
        m, n = self.m, self.n
        rows = np.concatenate([self._xs[:m], self._zs[:m]], axis=1).copy()
        comb = np.eye(m, dtype=np.uint8)
        leads = []
        r = 0
        for c in range(2 * n):
            if r == m:
                break
            sub = np.flatnonzero(rows[r:, c])
            if sub.size == 0:
                continue
            piv = r + int(sub[0])
            if piv != r:
                rows[[r, piv]] = rows[[piv, r]]
                comb[[r, piv]] = comb[[piv, r]]
            others = np.flatnonzero(rows[:, c])
            others = others[others != r]
            if others.size:
                rows[others] ^= rows[r]
                comb[others] ^= comb[r]
            leads.append(c)
            r += 1
        self._rref = (rows, comb, leads)
        return self._rref

    def _solve(self, x: np.ndarray, z: np.ndarray):
        """Express the positive Pauli (x, z) as a product of generators.

        Returns (generator index array, product sign bit, provenance mask)
        or None when the operator is outside the group.
        """
        rows, comb, leads = self._rref or self._build_rref()
        target = np.concatenate([x, z]).copy()
        used = np.zeros(self.m, dtype=np.uint8)
        for i, c in enumerate(leads):
            if target[c]:
                target ^= rows[i]
                used ^= comb[i]
        if target.any():
            return None
        subset = np.flatnonzero(used)
        # multiply the subset out to get the exact product sign
        px = np.zeros(self.n, dtype=np.uint8)
        pz = np.zeros(self.n, dtype=np.uint8)
        exponent = 0
        provenance = 0
        for i in subset:
            i = int(i)
            exponent += 2 * int(self._phases[i])
            exponent += int(mul_phase_sum(px, pz, self._xs[i], self._zs[i]))
            px ^= self._xs[i]
            pz ^= self._zs[i]
            provenance ^= self._origins[i]
        if exponent & 1:
            raise AssertionError("product of commuting Hermitians gained i")
        if not (np.array_equal(px, x) and np.array_equal(pz, z)):
            raise AssertionError("elimination produced the wrong operator")
        return subset, (exponent >> 1) & 1, provenance


# -- free-function conveniences over the tableau methods ---------------------


def measure_pauli(t: StabilizerTableau, p: PauliString, rng=None, tag=None):
    """Measure p on t (mutating t); returns the MeasureResult."""
    return t.measure(p, rng=rng, tag=tag)


def contains(t: StabilizerTableau, p: PauliString) -> Membership:
    return t.contains(p)


def logical_count(t: StabilizerTableau) -> int:
    return t.logical_count()
