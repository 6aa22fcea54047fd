"""Bit-packed linear algebra over GF(2).

Rows are packed into uint64 words, little-endian within each word: column
c lives in word c >> 6 at bit c & 63.  All arithmetic is mod 2.
"""

from __future__ import annotations

import numpy as np


class BinaryMatrix:
    """Dense bit-packed matrix over GF(2)."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = int(rows)
        self.cols = int(cols)
        nwords = (cols + 63) >> 6
        if words is None:
            words = np.zeros((rows, nwords), dtype=np.uint64)
        else:
            words = np.asarray(words, dtype=np.uint64)
            if words.shape != (rows, nwords):
                raise ValueError("word array shape mismatch")
        self.words = words

    # -- conversions ---------------------------------------------------

    @classmethod
    def from_dense(cls, arr) -> "BinaryMatrix":
        arr = np.atleast_2d(np.asarray(arr, dtype=np.uint8))
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        if arr.size and arr.max() > 1:
            raise ValueError("entries must be 0 or 1")
        rows, cols = arr.shape
        nwords = (cols + 63) >> 6
        padded = np.zeros((rows, nwords * 64), dtype=np.uint64)
        padded[:, :cols] = arr
        weights = (np.uint64(1) << np.arange(64, dtype=np.uint64))
        words = (padded.reshape(rows, nwords, 64) * weights).sum(
            axis=2, dtype=np.uint64
        )
        return cls(rows, cols, words)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for c in range(self.cols):
            out[:, c] = (self.words[:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)
        return out

    def row_dense(self, i: int) -> np.ndarray:
        out = np.zeros(self.cols, dtype=np.uint8)
        for c in range(self.cols):
            out[c] = (self.words[i, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)
        return out

    # -- algebra -------------------------------------------------------

    def rank(self) -> int:
        """GF(2) row rank by Gaussian elimination on a scratch copy."""
        w = self.words.copy()
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            word, bit = c >> 6, np.uint64(c & 63)
            col = (w[r:, word] >> bit) & np.uint64(1)
            hits = np.flatnonzero(col)
            if hits.size == 0:
                continue
            pivot = r + int(hits[0])
            if pivot != r:
                w[[r, pivot]] = w[[pivot, r]]
            below = r + 1 + np.flatnonzero((w[r + 1 :, word] >> bit) & np.uint64(1))
            if below.size:
                w[below] ^= w[r]
            r += 1
        return r

    def mul_transpose_parity(self, other: "BinaryMatrix") -> np.ndarray:
        """self @ other.T over GF(2), returned dense (rows x other.rows)."""
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        if self.rows == 0 or other.rows == 0:
            return np.zeros((self.rows, other.rows), dtype=np.uint8)
        acc = np.bitwise_count(self.words[:, None, :] & other.words[None, :, :])
        return (acc.sum(axis=2) & 1).astype(np.uint8)

    @property
    def is_zero(self) -> bool:
        return not self.words.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols})"

    # -- file format -----------------------------------------------------
    # First line "rows cols", then one line of 0/1 characters per row.

    def save(self, path) -> None:
        dense = self.to_dense()
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"{self.rows} {self.cols}\n")
            for row in dense:
                fh.write("".join("1" if b else "0" for b in row) + "\n")

    @classmethod
    def load(cls, path) -> "BinaryMatrix":
        with open(path, "r", encoding="ascii") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: bad matrix header")
            rows, cols = int(header[0]), int(header[1])
            dense = np.zeros((rows, cols), dtype=np.uint8)
            for i in range(rows):
                line = fh.readline().strip()
                if len(line) != cols or set(line) - {"0", "1"}:
                    raise ValueError(f"{path}: bad matrix row {i}")
                dense[i] = np.frombuffer(line.encode("ascii"), np.uint8) - ord("0")
            if fh.read().strip():
                raise ValueError(f"{path}: trailing data after {rows} rows")
        return cls.from_dense(dense) if rows else cls(0, cols)


def rank(m) -> int:
    """GF(2) rank of a BinaryMatrix or any 0/1 array."""
    if isinstance(m, BinaryMatrix):
        return m.rank()
    return BinaryMatrix.from_dense(m).rank()
