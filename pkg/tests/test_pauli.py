import numpy as np
import pytest

from floqnet.pauli import PauliString, symplectic_parity

from oracles import pauli_matrix

CHARS = "IXYZ"


def text_of(p: PauliString) -> str:
    return p.to_text()


def test_single_qubit_products_match_matrices():
    # exhaustive over all ordered symbol pairs, including phases
    for a in CHARS:
        for b in CHARS:
            pa, pb = PauliString.from_text(a), PauliString.from_text(b)
            prod = pa * pb
            dense = pauli_matrix("+" + a) @ pauli_matrix("+" + b)
            body = pauli_matrix("+" + prod.symbol_at(0))
            np.testing.assert_allclose(dense, (1j ** prod.phase) * body, atol=1e-12)


def test_spec_product_zz_times_xx():
    zz = PauliString.from_text("+ZZ")
    xx = PauliString.from_text("+XX")
    assert (zz * xx).to_text() == "-YY"
    # and the dense matrices agree
    np.testing.assert_allclose(
        pauli_matrix("+ZZ") @ pauli_matrix("+XX"), pauli_matrix("-YY"), atol=1e-12
    )


def test_random_products_match_matrices():
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = int(rng.integers(1, 4))
        texts = []
        for _ in range(2):
            sign = "+-"[int(rng.integers(2))]
            body = "".join(CHARS[i] for i in rng.integers(0, 4, n))
            texts.append(sign + body)
        a, b = (PauliString.from_text(t) for t in texts)
        prod = a * b
        dense = pauli_matrix(texts[0]) @ pauli_matrix(texts[1])
        body = "".join(prod.symbol_at(q) for q in range(n))
        np.testing.assert_allclose(
            dense, (1j ** prod.phase) * pauli_matrix("+" + body), atol=1e-12
        )


def test_commutation_matches_matrices():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(1, 4))
        ta = "".join(CHARS[i] for i in rng.integers(0, 4, n))
        tb = "".join(CHARS[i] for i in rng.integers(0, 4, n))
        a, b = PauliString.from_text(ta), PauliString.from_text(tb)
        ma, mb = pauli_matrix("+" + ta), pauli_matrix("+" + tb)
        commute_dense = np.allclose(ma @ mb, mb @ ma)
        assert a.commutes_with(b) == commute_dense
        assert symplectic_parity(a.x, a.z, b.x, b.z) == (0 if commute_dense else 1)


def test_text_round_trip_and_unicode_minus():
    for text in ("+XIZ", "-YZX", "+IIII", "-Z"):
        assert PauliString.from_text(text).to_text() == text
    assert PauliString.from_text("−XY").to_text() == "-XY"
    assert PauliString.from_text("XY").to_text() == "+XY"


def test_weight_and_support():
    p = PauliString.from_text("+XIZY")
    assert p.weight == 3
    assert list(p.support()) == [0, 2, 3]
    assert PauliString.identity(5).weight == 0
    assert PauliString.identity(5).is_identity


def test_constructors():
    p = PauliString.two_body(4, "Y", 3, 1)
    assert p.to_text() == "+IYIY"
    assert PauliString.single(3, 1, "X").to_text() == "+IXI"
    assert PauliString.uniform(4, "Z", [0, 2]).to_text() == "+ZIZI"
    with pytest.raises(ValueError):
        PauliString.two_body(4, "X", 2, 2)
    with pytest.raises(ValueError):
        PauliString.from_text("+AB")
    with pytest.raises(ValueError):
        PauliString.from_text("+")


def test_sign_requires_hermitian():
    x = PauliString.from_text("+X")
    z = PauliString.from_text("+Z")
    prod = x * z  # -iY
    assert prod.phase == 3
    with pytest.raises(ValueError):
        _ = prod.sign
    assert x.with_sign(-1).to_text() == "-X"
