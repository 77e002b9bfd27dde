"""Dense constructions of the native gate set and their identity checks.

The two-qubit primitives come from exchange evolution: exp(-i*theta*SWAP)
gives sqrt(SWAP) at theta = pi/4, while the Zeeman-dominated regime gives
the diagonal gate S = (1/sqrt(2))(II + i Z1Z2). Both build CZ together
with single-qubit Z rotations.
"""

from __future__ import annotations

import numpy as np

from .pauli import CliffordMap, DenseOperator, dense_equal_up_to_phase

I2 = np.eye(2, dtype=complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
ZZ = np.diag([1, -1, -1, 1]).astype(complex)


def exchange_evolution(theta: float) -> np.ndarray:
    """exp(-i*theta*SWAP); SWAP**2 = I makes this cos - i*sin*SWAP."""
    return np.cos(theta) * np.eye(4, dtype=complex) - 1j * np.sin(theta) * SWAP


def sqrt_swap() -> np.ndarray:
    return exchange_evolution(np.pi / 4)


def s_gate() -> np.ndarray:
    """(II + i Z1Z2)/sqrt(2), proportional to diag(1, -i, -i, 1)."""
    return (np.eye(4, dtype=complex) + 1j * ZZ) / np.sqrt(2)


def z_rot(theta: float) -> np.ndarray:
    return np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])


def y_rot(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def kron(*ops: np.ndarray) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def named_gate(name: str) -> np.ndarray:
    table = {
        "cz": CZ,
        "swap": SWAP,
        "sqrt_swap": sqrt_swap(),
        "s": s_gate(),
        "y+90": y_rot(np.pi / 2),
        "y-90": y_rot(-np.pi / 2),
        "z180": z_rot(np.pi),
        "z+90": z_rot(np.pi / 2),
        "z-90": z_rot(-np.pi / 2),
    }
    return table[name]


def cz_from_sqrt_swap() -> np.ndarray:
    """sqrtSWAP . (Z_pi x I) . sqrtSWAP . (Z_pi/2 x Z_-pi/2), circuit order."""
    rots = kron(z_rot(np.pi / 2), z_rot(-np.pi / 2))
    mid = kron(z_rot(np.pi), I2)
    return sqrt_swap() @ mid @ sqrt_swap() @ rots


def cz_from_s_gate() -> np.ndarray:
    """S . (Z_pi/2 x Z_pi/2), circuit order."""
    return s_gate() @ kron(z_rot(np.pi / 2), z_rot(np.pi / 2))


def verify_cz_decompositions(tol: float = 1e-10) -> dict:
    """Dense-oracle check of the native CZ constructions.

    Raises AssertionError on any failure; returns a pass report otherwise.
    """
    checks = {
        "cz_from_sqrt_swap": (cz_from_sqrt_swap(), CZ),
        "cz_from_s_gate": (cz_from_s_gate(), CZ),
        "sqrt_swap_squared_is_swap": (sqrt_swap() @ sqrt_swap(), SWAP),
        "s_squared_is_zz": (s_gate() @ s_gate(), ZZ),
        "exchange_pi_is_swap": (exchange_evolution(np.pi / 2), SWAP),
    }
    report = {}
    for name, (got, want) in checks.items():
        ok = dense_equal_up_to_phase(DenseOperator(got), DenseOperator(want), tol)
        report[name] = ok
        if not ok:
            raise AssertionError(f"gate identity failed: {name}")
    return report


# Clifford conjugation maps used for error propagation. sqrt(SWAP) itself is
# not Clifford; propagation only ever happens at the level of full CZ blocks
# plus single-qubit rotations, which are.
def cz_map() -> CliffordMap:
    return CliffordMap.from_dense(DenseOperator(CZ))


def swap_map() -> CliffordMap:
    return CliffordMap.from_dense(DenseOperator(SWAP))


def y_rot_map(sign: int) -> CliffordMap:
    return CliffordMap.from_dense(DenseOperator(y_rot(sign * np.pi / 2)))


def z_pi_map() -> CliffordMap:
    return CliffordMap.from_dense(DenseOperator(z_rot(np.pi)))
