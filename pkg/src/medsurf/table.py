"""Per-plaquette error tables.

Every fault location of a check circuit carries a small Pauli channel.
Each branch Pauli is conjugated through the remaining Clifford structure
of the circuit, then all locations are convolved exactly (full product
expansion) into a distribution over (residual data Pauli, ancilla-pair
letters, readout flip). The public ErrorTable folds the ancilla
letters into a parity flip; the sampler keeps them, because data errors
from earlier rounds compose with them before the asymmetry rule applies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import gates
from .circuit import ANC_A, ANC_B, CheckCircuit, GateLoc
from .pauli import CliffordMap, DenseOperator, PauliString

N_REG = 6  # data slots 0..3, ancilla spins 4..5

# ancilla letter codes: x bit | z bit << 1, so I=0 X=1 Z=2 Y=3
LETTER_CODES = {"I": 0, "X": 1, "Z": 2, "Y": 3}


@dataclass(frozen=True)
class ErrorModelParams:
    """Circuit-level error rates, S-gate convention for p2."""

    p1: float
    p2: float
    p_readout: float
    p_leak: float = 0.0
    flavour: str = "s_gate"
    leak_model: str = "worst_case"

    def __post_init__(self):
        for name in ("p1", "p2", "p_readout", "p_leak"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v} outside [0, 1]")
        if self.flavour not in ("s_gate", "sqrtswap"):
            raise ValueError(f"unknown flavour {self.flavour!r}")
        if self.leak_model not in ("worst_case", "refined"):
            raise ValueError(f"unknown leakage model {self.leak_model!r}")

    @staticmethod
    def preset(p2: float, p_leak: float = 0.0, flavour: str = "s_gate",
               leak_model: str = "worst_case") -> "ErrorModelParams":
        """The standard ratios: p1 = p2/10 and readout at p2."""
        return ErrorModelParams(0.1 * p2, p2, p2, p_leak, flavour, leak_model)


@dataclass(frozen=True)
class ErrorTableEntry:
    pauli: PauliString  # residual error on the four data slots
    flip: bool  # measured parity flipped relative to the true one
    p: float


@dataclass(frozen=True)
class ErrorTable:
    basis: str
    flavour: str
    entries: tuple

    def total(self) -> float:
        return float(sum(e.p for e in self.entries))

    def to_json(self) -> str:
        return json.dumps(
            {
                "basis": self.basis,
                "flavour": self.flavour,
                "entries": [
                    {"pauli": e.pauli.label(), "flip": e.flip, "p": e.p}
                    for e in self.entries
                ],
            },
            indent=1,
        )

    @staticmethod
    def from_json(text: str) -> "ErrorTable":
        d = json.loads(text)
        entries = tuple(
            ErrorTableEntry(PauliString.from_label(e["pauli"]), bool(e["flip"]), float(e["p"]))
            for e in d["entries"]
        )
        return ErrorTable(d["basis"], d["flavour"], entries)


# ---------------------------------------------------------------------------
# Fault locations
# ---------------------------------------------------------------------------


def _block_unitary(flavour: str) -> np.ndarray:
    if flavour == "s_gate":
        return gates.s_gate()
    zpi = gates.kron(gates.z_rot(np.pi), gates.I2)
    return gates.sqrt_swap() @ zpi @ gates.sqrt_swap()


def _map2(u: np.ndarray, qubits, n=N_REG) -> CliffordMap:
    return CliffordMap.from_dense(DenseOperator(u)).embedded(list(qubits), n)


def _map1(u: np.ndarray, qubit: int, n=N_REG) -> CliffordMap:
    return CliffordMap.from_dense(DenseOperator(u)).embedded([qubit], n)


def _depolarising(qubit: int, p: float):
    return [(PauliString.single(N_REG, qubit, l), p / 3) for l in "XYZ"]


def _twirled_swap(d: int, a: int, p: float):
    # SWAP applied coherently w.p. p; Pauli twirl gives II, XX, YY, ZZ
    # each at p/4, of which the non-identity terms matter here
    out = []
    for l in "XYZ":
        pa = PauliString.single(N_REG, d, l) * PauliString.single(N_REG, a, l)
        out.append((pa.with_phase(0), p / 4))
    return out


def _expand(circuit: CheckCircuit, params: ErrorModelParams):
    """Time-ordered Clifford ops and fault channels attached between them.

    Returns (ops, channels) where channels is a list of
    (position, branches); branches inject right before ops[position].
    """
    ops = []
    channels = []
    for loc in circuit.locations:
        if loc.kind == "init_singlet":
            channels.append((len(ops), _depolarising(ANC_A, params.p1)))
            channels.append((len(ops), _depolarising(ANC_B, params.p1)))
        elif loc.kind in ("y_rot_pre", "y_rot_post"):
            theta = -np.pi / 2 if loc.kind == "y_rot_pre" else np.pi / 2
            ops.append(_map1(gates.y_rot(theta), loc.qubits[0]))
            channels.append((len(ops), _depolarising(loc.qubits[0], params.p1)))
        elif loc.kind == "cz_block":
            d, a = loc.qubits
            if circuit.flavour == "s_gate":
                ops.append(_map2(gates.s_gate(), (d, a)))
                channels.append((len(ops), [
                    ((PauliString.single(N_REG, d, "Z") * PauliString.single(N_REG, a, "Z")).with_phase(0),
                     params.p2),
                ]))
            else:
                # the twirled SWAP errors are symmetric Paulis, which commute
                # with sqrt(SWAP) and only pick up signs at the Z_pi, so the
                # mid-block and end-of-block injections coincide; same for
                # the Z_pi's own depolarising fault after one more sqrt(SWAP)
                # twirl. Inject everything after the block.
                ops.append(_map2(_block_unitary("sqrtswap"), (d, a)))
                channels.append((len(ops), _twirled_swap(d, a, params.p2 / 2)))
                channels.append((len(ops), _twirled_swap(d, a, params.p2 / 2)))
                channels.append((len(ops), _depolarising(d, params.p1)))
        elif loc.kind == "z_pi":
            pass  # realised inside the cz_block expansion above
        elif loc.kind == "readout_st":
            pass  # classical flip, convolved separately
        elif loc.kind == "z_rot":
            raise ValueError("run apply_virtual_z_compilation before compiling errors")
        else:
            raise ValueError(f"unknown location kind {loc.kind!r}")
    return ops, channels


def propagate(pauli: PauliString, ops, position: int) -> PauliString:
    """Push an injected Pauli through the tail of the ideal circuit."""
    for op in ops[position:]:
        pauli = op.conjugate(pauli)
    return pauli


# ---------------------------------------------------------------------------
# Exact convolution
# ---------------------------------------------------------------------------


def _convolve(circuit: CheckCircuit, params: ErrorModelParams) -> dict:
    """Distribution over (data_x, data_z, a1, a2, rflip) keys."""
    ops, channels = _expand(circuit, params)
    state = {(0, 0, 0, 0): 1.0}
    for position, branches in channels:
        residuals = []
        total = 0.0
        for pauli, q in branches:
            if q == 0.0:
                continue
            r = propagate(pauli, ops, position)
            dx, dz = r.x & 0xF, r.z & 0xF
            ax, az = (r.x >> 4) & 3, (r.z >> 4) & 3
            a1 = (ax & 1) | ((az & 1) << 1)
            a2 = ((ax >> 1) & 1) | (((az >> 1) & 1) << 1)
            residuals.append(((dx, dz, a1, a2), q))
            total += q
        if not residuals:
            continue
        new = {}
        for key, prob in state.items():
            new[key] = new.get(key, 0.0) + prob * (1.0 - total)
            for (dx, dz, a1, a2), q in residuals:
                k2 = (key[0] ^ dx, key[1] ^ dz, key[2] ^ a1, key[3] ^ a2)
                new[k2] = new.get(k2, 0.0) + prob * q
        state = new
    out = {}
    for (dx, dz, a1, a2), prob in state.items():
        for rflip, q in ((0, prob * (1.0 - params.p_readout)), (1, prob * params.p_readout)):
            if q > 0.0:
                out[(dx, dz, a1, a2, rflip)] = out.get((dx, dz, a1, a2, rflip), 0.0) + q
    return out


def compile_error_table(circuit: CheckCircuit, params: ErrorModelParams) -> ErrorTable:
    """Fold ancilla letters through the asymmetry rule into a parity flip."""
    merged = {}
    for (dx, dz, a1, a2, rflip), prob in _convolve(circuit, params).items():
        flip = (a1 != a2) ^ bool(rflip)
        key = (dx, dz, flip)
        merged[key] = merged.get(key, 0.0) + prob
    entries = tuple(
        ErrorTableEntry(PauliString(4, dx, dz), flip, p)
        for (dx, dz, flip), p in sorted(merged.items(), key=lambda kv: -kv[1])
    )
    return ErrorTable(circuit.basis, circuit.flavour, entries)


@dataclass(frozen=True)
class SamplingTable:
    """Flat arrays for the vectorised sampler.

    cum is the inclusive cumulative probability; a draw u in [0,1) maps to
    the first index with u < cum[i]. Ancilla letters use codes I=0 X=1 Z=2
    Y=3 so that multiplying by Z toggles bit 1.
    """

    basis: str
    flavour: str
    cum: np.ndarray
    data_x: np.ndarray
    data_z: np.ndarray
    anc1: np.ndarray
    anc2: np.ndarray
    rflip: np.ndarray


def compile_sampling_table(circuit: CheckCircuit, params: ErrorModelParams) -> SamplingTable:
    items = sorted(_convolve(circuit, params).items(), key=lambda kv: -kv[1])
    probs = np.array([p for _, p in items])
    if abs(probs.sum() - 1.0) > 1e-9:
        raise AssertionError("error table does not sum to 1")
    keys = np.array([k for k, _ in items], dtype=np.uint8)
    return SamplingTable(
        circuit.basis,
        circuit.flavour,
        np.cumsum(probs),
        keys[:, 0].copy(),
        keys[:, 1].copy(),
        keys[:, 2].copy(),
        keys[:, 3].copy(),
        keys[:, 4].copy(),
    )


# ---------------------------------------------------------------------------
# Charge leakage
# ---------------------------------------------------------------------------

# roles within one half of a check: its ancilla spin and the data qubits
# it meets in stage 1 and stage 2
LEAK_NONE = ()
LEAK_AD1 = ("anc", "d1")
LEAK_AD2 = ("anc", "d2")
LEAK_ALL = ("anc", "d1", "d2")


def leakage_event_table(p_leak: float, model: str):
    """Per-half leakage branches: (depolarised roles, probability)."""
    if not 0.0 <= p_leak <= 0.25:
        raise ValueError(f"p_leak = {p_leak} outside [0, 0.25]")
    p = p_leak
    if model == "worst_case":
        return [(LEAK_NONE, 1.0 - 2.0 * p), (LEAK_ALL, 2.0 * p)]
    if model == "refined":
        # stage-resolved branches: a leak in stage 1 is either caught before
        # stage 2 (3/4 of the time) or survives it; a stage-2 leak spares d1
        return [
            (LEAK_NONE, (1.0 - p) ** 2),
            (LEAK_AD2, (1.0 - p) * p),
            (LEAK_ALL, p / 4.0),
            (LEAK_AD1, (3.0 * p / 4.0) * (1.0 - p)),
            (LEAK_ALL, (3.0 * p / 4.0) * p),
        ]
    raise ValueError(f"unknown leakage model {model!r}")
