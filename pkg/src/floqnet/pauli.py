"""Pauli strings on bit vectors.

A single-qubit Pauli is two bits (x, z): I=(0,0), Z=(0,1), X=(1,0),
Y=(1,1).  A string stores one x bit and one z bit per qubit plus a global
phase exponent t, and denotes i**t times the tensor product of the
per-qubit symbols.  Hermitian strings have t in {0, 2}; products of
Hermitian strings may pick up odd t, which is kept exact internally.
"""

from __future__ import annotations

import numpy as np

# i-exponent of a single-qubit product, indexed [(xa<<1)|za, (xb<<1)|zb].
# Example: X*Z = -iY gives _MUL_PHASE[2, 1] = 3.
_MUL_PHASE = np.array(
    [
        [0, 0, 0, 0],
        [0, 0, 1, 3],
        [0, 3, 0, 1],
        [0, 1, 3, 0],
    ],
    dtype=np.uint8,
)

_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_IDX_TO_CHAR = "IZXY"  # index (x<<1)|z

PAULI_CHARS = "IXYZ"


def _as_bits(arr, n: int) -> np.ndarray:
    out = np.asarray(arr, dtype=np.uint8).reshape(n).copy()
    if not np.all(out <= 1):
        raise ValueError("bit vector entries must be 0 or 1")
    return out


class PauliString:
    """A signed n-qubit Pauli operator."""

    __slots__ = ("x", "z", "phase")

    def __init__(self, x, z, phase: int = 0):
        x = np.asarray(x, dtype=np.uint8)
        self.x = _as_bits(x, x.size)
        self.z = _as_bits(z, x.size)
        self.phase = int(phase) % 4

    # -- constructors ------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        """Parse "+XIZ" style strings; sign prefix optional, ASCII or U+2212."""
        text = text.strip()
        phase = 0
        if text and text[0] in "+-−":
            if text[0] != "+":
                phase = 2
            text = text[1:]
        if not text:
            raise ValueError("empty Pauli string")
        x = np.zeros(len(text), np.uint8)
        z = np.zeros(len(text), np.uint8)
        for i, ch in enumerate(text):
            try:
                x[i], z[i] = _CHAR_TO_BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli character {ch!r}") from None
        return cls(x, z, phase)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliString":
        p = cls.identity(n)
        p.x[qubit], p.z[qubit] = _CHAR_TO_BITS[kind]
        return p

    @classmethod
    def two_body(cls, n: int, kind: str, qa: int, qb: int) -> "PauliString":
        """Weight-two string with the same symbol on both qubits."""
        if qa == qb:
            raise ValueError("two_body requires distinct qubits")
        p = cls.identity(n)
        xb, zb = _CHAR_TO_BITS[kind]
        p.x[qa] = p.x[qb] = xb
        p.z[qa] = p.z[qb] = zb
        return p

    @classmethod
    def uniform(cls, n: int, kind: str, qubits) -> "PauliString":
        """Same symbol on every listed qubit, identity elsewhere."""
        p = cls.identity(n)
        xb, zb = _CHAR_TO_BITS[kind]
        for q in qubits:
            if p.x[q] or p.z[q]:
                raise ValueError("duplicate qubit in uniform support")
            p.x[q], p.z[q] = xb, zb
        return p

    # -- basic queries -----------------------------------------------

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    @property
    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    @property
    def sign(self) -> int:
        """+1 or -1; raises for non-Hermitian (odd i-exponent) strings."""
        if self.phase & 1:
            raise ValueError("string has imaginary phase, no Hermitian sign")
        return 1 if self.phase == 0 else -1

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x | self.z)

    def symbol_at(self, qubit: int) -> str:
        return _IDX_TO_CHAR[(int(self.x[qubit]) << 1) | int(self.z[qubit])]

    def copy(self) -> "PauliString":
        return PauliString(self.x, self.z, self.phase)

    def with_sign(self, sign: int) -> "PauliString":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return PauliString(self.x, self.z, 0 if sign == 1 else 2)

    # -- algebra -----------------------------------------------------

    def commutes_with(self, other: "PauliString") -> bool:
        return symplectic_parity(self.x, self.z, other.x, other.z) == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("qubit counts differ")
        ia = (self.x << 1) | self.z
        ib = (other.x << 1) | other.z
        phase = (self.phase + other.phase + int(_MUL_PHASE[ia, ib].sum())) % 4
        return PauliString(self.x ^ other.x, self.z ^ other.z, phase)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    __hash__ = None

    # -- text form ---------------------------------------------------

    def to_text(self) -> str:
        body = "".join(
            _IDX_TO_CHAR[(int(xb) << 1) | int(zb)] for xb, zb in zip(self.x, self.z)
        )
        return ("+" if self.sign == 1 else "-") + body

    def __repr__(self) -> str:
        if self.phase & 1:
            body = "".join(
                _IDX_TO_CHAR[(int(xb) << 1) | int(zb)]
                for xb, zb in zip(self.x, self.z)
            )
            return f"PauliString(i^{self.phase}*{body})"
        return f"PauliString({self.to_text()!r})"


def symplectic_parity(x1, z1, x2, z2) -> int:
    """Symplectic inner product of two Paulis given as bit vectors; 1 means
    the operators anticommute."""
    return int((np.bitwise_and(x1, z2).sum() + np.bitwise_and(z1, x2).sum()) & 1)


def mul_phase_sum(xa, za, xb, zb):
    """Summed i-exponent picked up by the qubit-wise product a*b.

    Accepts (n,) against (n,) or broadcastable (k, n) stacks; returns an
    int64 scalar or vector of per-row exponent sums (not reduced mod 4).
    """
    ia = (np.asarray(xa, np.uint8) << 1) | za
    ib = (np.asarray(xb, np.uint8) << 1) | zb
    return _MUL_PHASE[ia, ib].sum(axis=-1, dtype=np.int64)
