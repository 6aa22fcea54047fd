"""CSS code construction and validation.

Covers generic CSS containers, the bivariate-bicycle (two-block cyclic
group algebra) family, and re-exports the honeycomb lattice builder so
all code constructions live behind one import.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from floqnet.gf2 import BinaryMatrix, rank
from floqnet.honeycomb import HoneycombLattice, build_honeycomb  # noqa: F401

__all__ = [
    "BivariateSpec",
    "CssCode",
    "CssValidation",
    "build_bb_code",
    "build_honeycomb",
    "css_validate",
    "HoneycombLattice",
]


@dataclass(frozen=True)
class BivariateSpec:
    """Polynomial spec a(x, y), b(x, y) over Z_ell x Z_m.

    Terms are (i, j) exponent pairs meaning x^i * y^j; exponents are
    reduced mod (ell, m) on construction.
    """

    ell: int
    m: int
    a_terms: tuple
    b_terms: tuple

    def __post_init__(self):
        if self.ell < 1 or self.m < 1:
            raise ValueError("cyclic orders must be >= 1")
        if not self.a_terms or not self.b_terms:
            raise ValueError("term lists must be non-empty")
        for name in ("a_terms", "b_terms"):
            reduced = tuple(
                (int(i) % self.ell, int(j) % self.m) for i, j in getattr(self, name)
            )
            object.__setattr__(self, name, reduced)

    @property
    def n(self) -> int:
        return 2 * self.ell * self.m


@dataclass
class CssCode:
    """A CSS code given by its two parity-check matrices."""

    n: int
    hx: BinaryMatrix
    hz: BinaryMatrix
    k: int
    check_weights: list
    distance: int | None = None  # optional metadata, never computed here

    @classmethod
    def from_checks(cls, hx: BinaryMatrix, hz: BinaryMatrix,
                    validate: bool = True, distance: int | None = None) -> "CssCode":
        if hx.cols != hz.cols:
            raise ValueError("hx and hz act on different qubit counts")
        n = hx.cols
        weights = [int(w) for w in np.bitwise_count(hx.words).sum(axis=1)]
        weights += [int(w) for w in np.bitwise_count(hz.words).sum(axis=1)]
        code = cls(
            n=n,
            hx=hx,
            hz=hz,
            k=n - hx.rank() - hz.rank(),
            check_weights=weights,
            distance=distance,
        )
        if validate:
            report = css_validate(code)
            if not report.passed:
                raise ValueError(f"invalid CSS code: {report.failures}")
        return code


@dataclass(frozen=True)
class CssValidation:
    orthogonal: bool
    k_expected: int
    k_consistent: bool
    weight_histogram: dict
    min_weight: int
    failures: tuple

    @property
    def passed(self) -> bool:
        return not self.failures


def css_validate(code: CssCode) -> CssValidation:
    """Recompute the CSS invariants of a code value; never mutates."""
    orthogonal = bool(code.hx.mul_transpose_parity(code.hz).max(initial=0) == 0)
    k_expected = code.n - code.hx.rank() - code.hz.rank()
    k_consistent = code.k == k_expected
    hist: dict = {}
    for w in code.check_weights:
        hist[w] = hist.get(w, 0) + 1
    min_weight = min(code.check_weights, default=1)
    failures = []
    if not orthogonal:
        failures.append("hx and hz rows are not orthogonal")
    if not k_consistent:
        failures.append(f"stored k={code.k} but rank gives {k_expected}")
    if min_weight < 1:
        failures.append("zero-weight check row")
    return CssValidation(
        orthogonal=orthogonal,
        k_expected=k_expected,
        k_consistent=k_consistent,
        weight_histogram=hist,
        min_weight=min_weight,
        failures=tuple(failures),
    )


def _cyclic_shift(order: int, power: int) -> np.ndarray:
    return np.roll(np.eye(order, dtype=np.uint8), shift=power, axis=1)


def _block(spec: BivariateSpec, terms) -> np.ndarray:
    size = spec.ell * spec.m
    acc = np.zeros((size, size), dtype=np.uint8)
    for i, j in terms:
        acc ^= np.kron(_cyclic_shift(spec.ell, i), _cyclic_shift(spec.m, j))
    return acc


def build_bb_code(spec: BivariateSpec) -> CssCode:
    """Bivariate-bicycle code hx = [A | B], hz = [B^T | A^T].

    A and B are the circulant block matrices of the two polynomials over
    Z_ell x Z_m; the blocks commute, so orthogonality holds by identity,
    and the assertion inside from_checks only guards implementation bugs.
    """
    a = _block(spec, spec.a_terms)
    b = _block(spec, spec.b_terms)
    hx = BinaryMatrix.from_dense(np.concatenate([a, b], axis=1))
    hz = BinaryMatrix.from_dense(np.concatenate([b.T, a.T], axis=1))
    code = CssCode.from_checks(hx, hz, validate=True)
    assert code.n == spec.n
    return code
