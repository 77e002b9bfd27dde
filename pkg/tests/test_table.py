"""Tests for the exact error-table convolution and sampling tables."""

import numpy as np
import pytest

from medsurf import gates
from medsurf.circuit import build_check_circuit
from medsurf.pauli import PauliString
from medsurf.table import (
    ErrorModelParams,
    ErrorTable,
    compile_error_table,
    compile_sampling_table,
    leakage_event_table,
    propagate,
    _convolve,
    _expand,
)

BASES = ("Z", "X")
FLAVOURS = ("s_gate", "sqrtswap")


def _embed_dense(u, qubits, n=6):
    """Embed a small unitary on the given qubits of an n-qubit register."""
    dim = 2 ** n
    k = len(qubits)
    big = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[col] = 1.0
        tv = np.moveaxis(v.reshape((2,) * n), qubits, range(k))
        tv = (u @ tv.reshape(2 ** k, -1)).reshape((2,) * n)
        big[:, col] = np.moveaxis(tv, range(k), qubits).reshape(dim)
    return big


_LETTERS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def _pauli_matrix(p):
    """Dense matrix of a PauliString, ignoring its overall phase."""
    m = np.ones((1, 1), dtype=complex)
    for q in range(p.n):
        m = np.kron(m, _LETTERS[p.letter(q)])
    return m


def _equal_up_to_phase(a, b, tol=1e-10):
    k = np.argmax(np.abs(b))
    bv = b.reshape(-1)[k]
    av = a.reshape(-1)[k]
    if abs(av) < tol:
        return False
    return np.allclose(a, (av / bv) * b, atol=tol)


def _dense_ops(circuit):
    """Rebuild the ideal circuit as dense 6-qubit unitaries, one per op."""
    out = []
    for loc in circuit.locations:
        if loc.kind in ("y_rot_pre", "y_rot_post"):
            theta = -np.pi / 2 if loc.kind == "y_rot_pre" else np.pi / 2
            out.append(_embed_dense(gates.y_rot(theta), [loc.qubits[0]]))
        elif loc.kind == "cz_block":
            if circuit.flavour == "s_gate":
                block = gates.s_gate()
            else:
                block = gates.sqrt_swap() @ gates.kron(
                    gates.z_rot(np.pi), gates.I2) @ gates.sqrt_swap()
            out.append(_embed_dense(block, list(loc.qubits)))
    return out


@pytest.mark.parametrize("basis", BASES)
@pytest.mark.parametrize("flavour", FLAVOURS)
def test_single_injection_propagation_matches_dense(basis, flavour):
    circuit = build_check_circuit(basis, flavour)
    ops, channels = _expand(circuit, ErrorModelParams.preset(0.01))
    dense = _dense_ops(circuit)
    assert len(dense) == len(ops)
    for position, branches in channels:
        tail = np.eye(64, dtype=complex)
        for u in dense[position:]:
            tail = u @ tail
        for pauli, _ in branches:
            residual = propagate(pauli, ops, position)
            assert _equal_up_to_phase(
                tail @ _pauli_matrix(pauli),
                _pauli_matrix(residual) @ tail,
            )


@pytest.mark.parametrize("basis", BASES)
@pytest.mark.parametrize("flavour", FLAVOURS)
@pytest.mark.parametrize("p2", (0.0, 0.001, 0.01))
def test_error_table_sums_to_one(basis, flavour, p2):
    circuit = build_check_circuit(basis, flavour)
    table = compile_error_table(circuit, ErrorModelParams.preset(p2))
    assert table.total() == pytest.approx(1.0, abs=1e-10)
    assert all(e.p > 0.0 for e in table.entries)


def test_error_table_mixed_rate_corners():
    circuit = build_check_circuit("X", "sqrtswap")
    for p1, p2, pr in ((0.01, 0.0, 0.001), (0.0, 0.01, 0.01), (0.001, 0.01, 0.0)):
        table = compile_error_table(circuit, ErrorModelParams(p1, p2, pr))
        assert table.total() == pytest.approx(1.0, abs=1e-10)


def test_zero_rates_give_trivial_table():
    for basis in BASES:
        for flavour in FLAVOURS:
            circuit = build_check_circuit(basis, flavour)
            table = compile_error_table(circuit, ErrorModelParams(0.0, 0.0, 0.0))
            assert len(table.entries) == 1
            entry = table.entries[0]
            assert entry.pauli.is_identity()
            assert entry.flip is False
            assert entry.p == pytest.approx(1.0)


def test_readout_only_gives_two_entries():
    circuit = build_check_circuit("Z", "s_gate")
    table = compile_error_table(circuit, ErrorModelParams(0.0, 0.0, 0.01))
    assert len(table.entries) == 2
    probs = sorted(e.p for e in table.entries)
    assert probs == pytest.approx([0.01, 0.99])
    flips = {e.flip for e in table.entries}
    assert flips == {False, True}
    assert all(e.pauli.is_identity() for e in table.entries)


def test_symmetric_ancilla_pair_never_flips():
    # identical letters on the two ancilla spins leave the singlet/triplet
    # parity intact, so only the readout flip can toggle the outcome
    for basis in BASES:
        for flavour in FLAVOURS:
            circuit = build_check_circuit(basis, flavour)
            params = ErrorModelParams.preset(0.01)
            dist = _convolve(circuit, params)
            table = compile_error_table(circuit, params)
            sym = sum(p for (dx, dz, a1, a2, rf), p in dist.items()
                      if a1 == a2 and rf == 0)
            asym = sum(p for (dx, dz, a1, a2, rf), p in dist.items()
                       if (a1 != a2) ^ bool(rf))
            flipped = sum(e.p for e in table.entries if e.flip)
            assert flipped == pytest.approx(asym, abs=1e-12)
            assert sym + flipped <= 1.0 + 1e-12


@pytest.mark.parametrize("flavour", FLAVOURS)
def test_check_detects_single_data_error_in_its_basis(flavour):
    # a Z-basis check flags a pre-existing X on any of its data qubits;
    # swapping bases swaps the detected letter
    for basis, letter in (("Z", "X"), ("X", "Z")):
        circuit = build_check_circuit(basis, flavour)
        ops, _ = _expand(circuit, ErrorModelParams.preset(0.0))
        for slot in range(4):
            injected = PauliString.single(6, slot, letter)
            r = propagate(injected, ops, 0)
            a1 = ((r.x >> 4) & 1) | (((r.z >> 4) & 1) << 1)
            a2 = ((r.x >> 5) & 1) | (((r.z >> 5) & 1) << 1)
            assert a1 != a2, f"{basis} check missed {letter} on slot {slot}"


def test_sampling_table_matches_error_frequencies():
    circuit = build_check_circuit("Z", "s_gate")
    st = compile_sampling_table(circuit, ErrorModelParams.preset(0.01))
    assert st.cum[-1] == pytest.approx(1.0, abs=1e-9)
    probs = np.diff(st.cum, prepend=0.0)
    n = 1_000_000
    rng = np.random.default_rng(7)
    idx = np.searchsorted(st.cum, rng.random(n), side="right")
    counts = np.bincount(idx, minlength=len(probs))
    sigma = np.sqrt(np.maximum(probs * (1.0 - probs) / n, 1e-12))
    dev = np.abs(counts / n - probs) / sigma
    assert dev.max() < 5.0


def test_sampling_table_agrees_with_error_table():
    circuit = build_check_circuit("X", "sqrtswap")
    params = ErrorModelParams.preset(0.01)
    st = compile_sampling_table(circuit, params)
    table = compile_error_table(circuit, params)
    probs = np.diff(st.cum, prepend=0.0)
    merged = {}
    for i, p in enumerate(probs):
        flip = bool((st.anc1[i] != st.anc2[i]) ^ st.rflip[i])
        key = (int(st.data_x[i]), int(st.data_z[i]), flip)
        merged[key] = merged.get(key, 0.0) + float(p)
    for e in table.entries:
        key = (e.pauli.x, e.pauli.z, e.flip)
        assert merged.pop(key) == pytest.approx(e.p, abs=1e-12)
    assert not merged


def test_error_table_json_round_trip():
    circuit = build_check_circuit("Z", "sqrtswap")
    table = compile_error_table(circuit, ErrorModelParams.preset(0.005))
    back = ErrorTable.from_json(table.to_json())
    assert back.basis == table.basis
    assert back.flavour == table.flavour
    assert len(back.entries) == len(table.entries)
    for got, want in zip(back.entries, table.entries):
        assert got.pauli.label() == want.pauli.label()
        assert got.flip == want.flip
        assert got.p == pytest.approx(want.p, abs=1e-15)


def test_leakage_worst_case_example():
    branches = leakage_event_table(0.005, "worst_case")
    assert branches == [((), 0.99), (("anc", "d1", "d2"), 0.01)]


def test_leakage_refined_zero_rate():
    branches = leakage_event_table(0.0, "refined")
    live = [(roles, p) for roles, p in branches if p > 0.0]
    assert live == [((), 1.0)]


@pytest.mark.parametrize("model", ("worst_case", "refined"))
def test_leakage_table_normalised(model):
    for p in (0.0, 0.001, 0.005, 0.02, 0.1):
        branches = leakage_event_table(p, model)
        assert sum(q for _, q in branches) == pytest.approx(1.0, abs=1e-12)
        assert all(q >= 0.0 for _, q in branches)


def test_leakage_rejects_out_of_range():
    with pytest.raises(ValueError):
        leakage_event_table(0.3, "worst_case")
    with pytest.raises(ValueError):
        leakage_event_table(0.01, "markovian")


def test_params_validation():
    with pytest.raises(ValueError):
        ErrorModelParams(-0.1, 0.0, 0.0)
    with pytest.raises(ValueError):
        ErrorModelParams(0.0, 0.0, 0.0, flavour="cnot")
    p = ErrorModelParams.preset(0.004)
    assert p.p1 == pytest.approx(0.0004)
    assert p.p_readout == pytest.approx(0.004)
