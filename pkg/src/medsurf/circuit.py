"""Stabiliser check circuit for one plaquette.

Qubit slots: 0..3 are the data qubits (0,1 in half A; 2,3 in half B),
4 and 5 are the two ancilla spins (half A, half B). Each half runs two
CZ blocks: data 0/2 in stage 1, data 1/3 in stage 2. Boundary plaquettes
use the same circuit with some data slots absent.

Z rotations are compiled away: those on the data qubits move into the
rotating-frame bookkeeping of later pulses, and the symmetric residue on
the ancilla pair leaves the singlet/triplet readout invariant. The only
physical single-qubit gate left inside a CZ block is the Z_pi bracketed
by the two sqrt(SWAP)s.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gates
from .pauli import DenseOperator

ANC_A, ANC_B = 4, 5
HALF_OF_SLOT = {0: "A", 1: "A", 2: "B", 3: "B"}
ANC_OF_SLOT = {0: ANC_A, 1: ANC_A, 2: ANC_B, 3: ANC_B}
STAGE_OF_SLOT = {0: 1, 1: 2, 2: 1, 3: 2}
ALL_SLOTS = (0, 1, 2, 3)


@dataclass(frozen=True)
class GateLoc:
    kind: str  # init_singlet, y_rot_pre, y_rot_post, cz_block, z_pi, z_rot, readout_st
    qubits: tuple
    stage: int = 0  # 1 or 2 for staged gates, 0 for global ones
    angle: float = 0.0  # only for literal z_rot locations


@dataclass(frozen=True)
class CheckCircuit:
    basis: str  # "X" or "Z"
    flavour: str  # "s_gate" or "sqrtswap"
    locations: tuple
    present: tuple = ALL_SLOTS

    def count(self, kind: str) -> int:
        return sum(1 for loc in self.locations if loc.kind == kind)


def _validate(basis: str, flavour: str):
    if basis not in ("X", "Z"):
        raise ValueError(f"unknown basis {basis!r}")
    if flavour not in ("s_gate", "sqrtswap"):
        raise ValueError(f"unknown gate flavour {flavour!r}")


def build_check_circuit(basis: str, flavour: str, present=ALL_SLOTS) -> CheckCircuit:
    """Compiled check circuit: virtual/elided Z rotations already removed."""
    _validate(basis, flavour)
    present = tuple(sorted(present))
    locs = [GateLoc("init_singlet", (ANC_A, ANC_B))]
    if basis == "X":
        for d in present:
            locs.append(GateLoc("y_rot_pre", (d,)))
    for stage in (1, 2):
        for d in present:
            if STAGE_OF_SLOT[d] != stage:
                continue
            locs.append(GateLoc("cz_block", (d, ANC_OF_SLOT[d]), stage))
            if flavour == "sqrtswap":
                locs.append(GateLoc("z_pi", (d,), stage))
    if basis == "X":
        for d in present:
            locs.append(GateLoc("y_rot_post", (d,)))
    locs.append(GateLoc("readout_st", (ANC_A, ANC_B)))
    return CheckCircuit(basis, flavour, tuple(locs), present)


def literal_check_circuit(basis: str, flavour: str, present=ALL_SLOTS) -> CheckCircuit:
    """Fully explicit circuit with every Z rotation of the CZ construction."""
    _validate(basis, flavour)
    present = tuple(sorted(present))
    locs = [GateLoc("init_singlet", (ANC_A, ANC_B))]
    if basis == "X":
        for d in present:
            locs.append(GateLoc("y_rot_pre", (d,)))
    for stage in (1, 2):
        for d in present:
            if STAGE_OF_SLOT[d] != stage:
                continue
            a = ANC_OF_SLOT[d]
            if flavour == "s_gate":
                locs.append(GateLoc("z_rot", (d,), stage, np.pi / 2))
                locs.append(GateLoc("z_rot", (a,), stage, np.pi / 2))
            else:
                locs.append(GateLoc("z_rot", (d,), stage, np.pi / 2))
                locs.append(GateLoc("z_rot", (a,), stage, -np.pi / 2))
            locs.append(GateLoc("cz_block", (d, a), stage))
            if flavour == "sqrtswap":
                locs.append(GateLoc("z_pi", (d,), stage))
    if basis == "X":
        for d in present:
            locs.append(GateLoc("y_rot_post", (d,)))
    locs.append(GateLoc("readout_st", (ANC_A, ANC_B)))
    return CheckCircuit(basis, flavour, tuple(locs), present)


def apply_virtual_z_compilation(circuit: CheckCircuit) -> CheckCircuit:
    """Strip virtual/elided Z rotations, keeping only the bracketed Z_pi.

    Raises if the dense equivalence of measurement statistics between the
    literal and compiled circuits fails (checked once per basis/flavour on
    the reduced one-data-per-half check).
    """
    if not _compilation_equivalent(circuit.basis, circuit.flavour):
        raise AssertionError("virtual-Z compilation changed measurement statistics")
    locs = tuple(loc for loc in circuit.locations if loc.kind != "z_rot")
    return CheckCircuit(circuit.basis, circuit.flavour, locs, circuit.present)


# ---------------------------------------------------------------------------
# Dense evaluation of the reduced (one data qubit per half) check circuit
# ---------------------------------------------------------------------------

# reduced register: [data_A, data_B, anc_A, anc_B]
_REDUCED_POS = {0: 0, 2: 1, ANC_A: 2, ANC_B: 3}
_SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def _lift(op: np.ndarray, slots: tuple) -> np.ndarray:
    """Embed a 1- or 2-qubit gate into the 4-qubit reduced register."""
    n = 4
    positions = [_REDUCED_POS[s] for s in slots]
    other = [q for q in range(n) if q not in positions]
    perm = positions + other
    m = 2 ** len(positions)
    rest = 2 ** len(other)
    big = np.kron(op, np.eye(rest, dtype=complex))
    # change of basis from permuted ordering back to natural ordering
    pmat = _perm_matrix(perm, n)
    return pmat.T @ big @ pmat


def _perm_matrix(perm, n):
    """Basis permutation sending natural qubit order to the given order."""
    dim = 2**n
    p = np.zeros((dim, dim))
    for i in range(dim):
        bits = [(i >> (n - 1 - q)) & 1 for q in range(n)]
        jbits = [bits[perm[k]] for k in range(n)]
        j = 0
        for b in jbits:
            j = (j << 1) | b
        p[j, i] = 1.0
    return p


def _loc_unitaries(loc: GateLoc, flavour: str):
    """Dense matrices realising one location on the reduced register."""
    if loc.kind in ("init_singlet", "readout_st"):
        return []
    if loc.kind == "y_rot_pre":
        return [_lift(gates.y_rot(-np.pi / 2), loc.qubits)]
    if loc.kind == "y_rot_post":
        return [_lift(gates.y_rot(np.pi / 2), loc.qubits)]
    if loc.kind == "z_rot":
        return [_lift(gates.z_rot(loc.angle), loc.qubits)]
    if loc.kind == "z_pi":
        return [_lift(gates.z_rot(np.pi), loc.qubits)]
    if loc.kind == "cz_block":
        # sqrtswap blocks are split across the z_pi location by the caller
        return [_lift(gates.s_gate(), loc.qubits)]
    raise ValueError(f"unknown location kind {loc.kind!r}")


def _reduced_unitary(circ: CheckCircuit) -> np.ndarray:
    """Unitary of the pre-readout circuit on the reduced 4-qubit register."""
    u = np.eye(16, dtype=complex)
    open_blocks = {}  # second sqrt(SWAP) of blocks awaiting their Z_pi, by data slot
    for loc in circ.locations:
        if loc.kind == "cz_block" and circ.flavour == "sqrtswap":
            sq = _lift(gates.sqrt_swap(), loc.qubits)
            u = sq @ u
            open_blocks[loc.qubits[0]] = sq
            continue
        if loc.kind == "z_pi" and loc.qubits[0] in open_blocks:
            u = _lift(gates.z_rot(np.pi), loc.qubits) @ u
            u = open_blocks.pop(loc.qubits[0]) @ u
            continue
        for m in _loc_unitaries(loc, circ.flavour):
            u = m @ u
    if open_blocks:
        raise ValueError("sqrt(SWAP) block missing its bracketed Z_pi")
    return u


def _singlet_probability(u: np.ndarray, data_state: np.ndarray) -> float:
    """P(singlet readout) for the reduced circuit on a data product input."""
    anc = _SINGLET  # on qubits (anc_A, anc_B)
    psi = np.kron(data_state, anc)
    psi = u @ psi
    # project ancilla pair (qubits 2,3) onto the singlet
    psi = psi.reshape(4, 4)
    amp = psi @ _SINGLET.conj()
    return float(np.vdot(amp, amp).real)


@lru_cache(maxsize=None)
def _compilation_equivalent(basis: str, flavour: str, tol: float = 1e-9) -> bool:
    reduced = (0, 2)  # one data qubit per half
    lit = literal_check_circuit(basis, flavour, reduced)
    cmp_ = CheckCircuit(
        basis,
        flavour,
        tuple(l for l in literal_check_circuit(basis, flavour, reduced).locations if l.kind != "z_rot"),
        reduced,
    )
    u_lit = _reduced_unitary(lit)
    u_cmp = _reduced_unitary(cmp_)
    rng = np.random.default_rng(7)
    for _ in range(20):
        # random product state on the two data qubits
        amps = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        amps /= np.linalg.norm(amps, axis=1, keepdims=True)
        data = np.kron(amps[0], amps[1])
        if abs(_singlet_probability(u_lit, data) - _singlet_probability(u_cmp, data)) > tol:
            return False
    return True


def verify_cz_decompositions(tol: float = 1e-10) -> dict:
    """Gate identity suite plus the virtual-Z compilation equivalences."""
    report = gates.verify_cz_decompositions(tol)
    for basis in ("X", "Z"):
        for flavour in ("s_gate", "sqrtswap"):
            ok = _compilation_equivalent(basis, flavour)
            report[f"virtual_z_{basis}_{flavour}"] = ok
            if not ok:
                raise AssertionError(f"compilation equivalence failed: {basis}/{flavour}")
    return report
