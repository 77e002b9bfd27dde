"""Symplectic Pauli algebra against dense matrix oracles."""

import itertools

import numpy as np
import pytest

from medsurf.pauli import (CliffordMap, DenseOperator, PauliString,
                           all_paulis, dense_equal_up_to_phase,
                           matrix_to_pauli, pauli_multiply)


def test_label_roundtrip():
    for label in ("IIII", "XYZI", "ZZXX", "Y"):
        p = PauliString.from_label(label)
        assert p.label() == label
        assert p.sign == 1


def test_single_and_letter():
    p = PauliString.single(4, 2, "Y")
    assert p.label() == "IIYI"
    assert p.letter(2) == "Y"
    assert p.letter(0) == "I"
    assert p.weight == 1


def test_identity():
    p = PauliString.identity(5)
    assert p.is_identity()
    assert p.weight == 0


def test_multiplication_matches_dense():
    rng = np.random.default_rng(4)
    labels = ["I", "X", "Y", "Z"]
    for _ in range(200):
        n = int(rng.integers(1, 4))
        la = "".join(rng.choice(labels, n))
        lb = "".join(rng.choice(labels, n))
        a = PauliString.from_label(la)
        b = PauliString.from_label(lb)
        prod = a * b
        np.testing.assert_allclose(prod.matrix(), a.matrix() @ b.matrix(),
                                   atol=1e-12)


def test_pauli_multiply_function():
    a = PauliString.from_label("XZ")
    b = PauliString.from_label("ZX")
    assert pauli_multiply(a, b).label() == (a * b).label()


def test_commutation_matches_dense():
    for la, lb in itertools.product(["IX", "XY", "ZZ", "YI", "XZ"], repeat=2):
        a = PauliString.from_label(la)
        b = PauliString.from_label(lb)
        comm = a.matrix() @ b.matrix() - b.matrix() @ a.matrix()
        assert a.commutes_with(b) == np.allclose(comm, 0)


def test_restricted_and_embedded():
    p = PauliString.from_label("XIZY")
    r = p.restricted([0, 2])
    assert r.label() == "XZ"
    e = r.embedded([1, 3], 5)
    assert e.label() == "IXIZI"


def test_all_paulis_count():
    assert len(list(all_paulis(2))) == 16


def test_matrix_to_pauli_roundtrip():
    for label in ("XY", "ZI", "YZX"):
        p = PauliString.from_label(label)
        q = matrix_to_pauli(p.matrix())
        assert q.label() == label


def test_matrix_to_pauli_rejects_non_pauli():
    with pytest.raises(ValueError):
        matrix_to_pauli(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_clifford_map_cz_conjugation():
    cz = DenseOperator(np.diag([1.0, 1, 1, -1]).astype(complex))
    cmap = CliffordMap.from_dense(cz)
    # CZ: X1 -> X1 Z2, Z1 -> Z1
    assert cmap.conjugate(PauliString.from_label("XI")).label() == "XZ"
    assert cmap.conjugate(PauliString.from_label("ZI")).label() == "ZI"
    assert cmap.conjugate(PauliString.from_label("IX")).label() == "ZX"


def test_clifford_map_matches_dense_conjugation():
    rng = np.random.default_rng(9)
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    s = np.diag([1.0, 1j])
    cz = np.diag([1.0, 1, 1, -1]).astype(complex)
    for u2 in (np.kron(h, s), cz, np.kron(s, h) @ cz):
        op = DenseOperator(u2)
        cmap = CliffordMap.from_dense(op)
        for p in all_paulis(2):
            if p.is_identity():
                continue
            got = cmap.conjugate(p)
            want = op.conjugate_pauli(p)
            np.testing.assert_allclose(got.matrix(), want, atol=1e-10)


def test_clifford_map_embedded():
    cz = DenseOperator(np.diag([1.0, 1, 1, -1]).astype(complex))
    cmap = CliffordMap.from_dense(cz).embedded([1, 3], 4)
    p = PauliString.from_label("IXII")
    assert cmap.conjugate(p).label() == "IXIZ"


def test_dense_equal_up_to_phase():
    u = np.diag([1.0, 1j]).astype(complex)
    assert dense_equal_up_to_phase(DenseOperator(u), DenseOperator(1j * u))
    assert not dense_equal_up_to_phase(DenseOperator(u),
                                       DenseOperator(np.eye(2, dtype=complex)))


def test_phase_tracking():
    x = PauliString.from_label("X")
    y = PauliString.from_label("Y")
    z = PauliString.from_label("Z")
    assert (x * y).label() == "Z"
    np.testing.assert_allclose((x * y).sign, 1j * z.sign * 1.0)
    np.testing.assert_allclose((x * y).matrix(), 1j * z.matrix(), atol=1e-12)
