"""Pauli algebra over small registers, with a dense-matrix oracle.

PauliStrings are stored in symplectic form (X bitmask, Z bitmask) plus a
phase exponent k, meaning P = i^k * X^x * Z^z with the X factors ordered
before the Z factors. The displayed sign is relative to the letter form
(using Y = iXZ), so e.g. X*Z prints as -iY.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_LETTER_BITS = {v: k for k, v in _LETTERS.items()}
_SIGNS = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}
_SIGN_LABELS = {0: "+", 1: "+i", 2: "-", 3: "-i"}

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_LETTER_MATS = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}

DENSE_QUBIT_CAP = 4


class SizeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    phase: int = 0  # exponent of i in the X^x Z^z convention

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bitmask exceeds register size")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors ------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(n, 0, 0, 0)

    @staticmethod
    def from_label(label: str, sign: complex = 1) -> "PauliString":
        """Build from a letter string like "XIZY" (qubit 0 leftmost)."""
        x = z = 0
        ny = 0
        for q, ch in enumerate(label):
            try:
                bx, bz = _LETTER_BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r}")
            x |= bx << q
            z |= bz << q
            ny += bx & bz
        k = {1: 0, 1j: 1, -1: 2, -1j: 3}[complex(sign)]
        # letter form sign i^k corresponds to XZ-form phase k + n_Y
        return PauliString(len(label), x, z, k + ny)

    @staticmethod
    def single(n: int, qubit: int, letter: str) -> "PauliString":
        bx, bz = _LETTER_BITS[letter]
        ny = bx & bz
        return PauliString(n, bx << qubit, bz << qubit, ny)

    # -- views -------------------------------------------------------

    @property
    def sign(self) -> complex:
        """Scalar in {1, i, -1, -i} relative to the Y-letter form."""
        ny = (self.x & self.z).bit_count()
        return _SIGNS[(self.phase - ny) % 4]

    def letter(self, qubit: int) -> str:
        return _LETTERS[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    def label(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    def __str__(self):
        ny = (self.x & self.z).bit_count()
        return _SIGN_LABELS[(self.phase - ny) % 4] + self.label()

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    # -- algebra -----------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise SizeMismatchError("register sizes differ")
        # move other's X factors past self's Z factors
        k = self.phase + other.phase + 2 * (self.z & other.x).bit_count()
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, k)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise SizeMismatchError("register sizes differ")
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def with_phase(self, k: int) -> "PauliString":
        return PauliString(self.n, self.x, self.z, k)

    def restricted(self, qubits: list[int]) -> "PauliString":
        """Unsigned restriction to a subset of qubits (phase dropped)."""
        x = z = 0
        for i, q in enumerate(qubits):
            x |= ((self.x >> q) & 1) << i
            z |= ((self.z >> q) & 1) << i
        return PauliString(len(qubits), x, z, 0)

    def embedded(self, qubits: list[int], n: int) -> "PauliString":
        """Embed this Pauli into an n-qubit register at the given positions."""
        x = z = 0
        for i, q in enumerate(qubits):
            x |= ((self.x >> i) & 1) << q
            z |= ((self.z >> i) & 1) << q
        return PauliString(n, x, z, self.phase)

    def matrix(self) -> np.ndarray:
        if self.n > DENSE_QUBIT_CAP:
            raise ValueError(f"dense form capped at {DENSE_QUBIT_CAP} qubits")
        m = np.array([[self.sign]])
        for q in range(self.n):
            # qubit 0 is the leftmost tensor factor
            m = np.kron(m, _LETTER_MATS[self.letter(q)])
        return m


def pauli_multiply(a: PauliString, b: PauliString) -> PauliString:
    return a * b


def all_paulis(n: int, signs: bool = False):
    """Iterate the 4^n unsigned Paulis on n qubits (letter-form, sign +1)."""
    for x in range(1 << n):
        for z in range(1 << n):
            ny = (x & z).bit_count()
            p = PauliString(n, x, z, ny)
            if signs:
                for k in range(4):
                    yield PauliString(n, x, z, ny + k)
            else:
                yield p


# ---------------------------------------------------------------------------
# Dense operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DenseOperator:
    matrix: np.ndarray
    tolerance: float = 1e-10

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        d = m.shape[0]
        if m.ndim != 2 or m.shape[1] != d or d & (d - 1):
            raise ValueError("matrix must be square with power-of-two dimension")
        if d > 1 << DENSE_QUBIT_CAP:
            raise ValueError(f"dense oracle capped at {DENSE_QUBIT_CAP} qubits")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def is_unitary(self) -> bool:
        d = self.matrix.conj().T @ self.matrix - np.eye(self.dim)
        return np.max(np.abs(d)) < self.tolerance

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        if self.dim != other.dim:
            raise SizeMismatchError("dimension mismatch")
        return DenseOperator(self.matrix @ other.matrix, self.tolerance)

    def conjugate_pauli(self, p: PauliString) -> np.ndarray:
        """Return U P U^dagger as a matrix."""
        if p.n != self.n_qubits:
            raise SizeMismatchError("register sizes differ")
        u = self.matrix
        return u @ p.matrix() @ u.conj().T


def dense_equal_up_to_phase(a: DenseOperator, b: DenseOperator, tol: float = 1e-10) -> bool:
    """True iff a == phi * b for some unit complex phi, to max-norm tol."""
    if a.dim != b.dim:
        raise SizeMismatchError("dimension mismatch")
    am, bm = a.matrix, b.matrix
    idx = np.unravel_index(np.argmax(np.abs(bm)), bm.shape)
    if abs(bm[idx]) < tol:
        return np.max(np.abs(am)) <= tol
    phi = am[idx] / bm[idx]
    if abs(phi) < tol:
        return False
    phi /= abs(phi)
    return np.max(np.abs(am - phi * bm)) <= tol


def matrix_to_pauli(m: np.ndarray, tol: float = 1e-8) -> PauliString:
    """Decompose a matrix known to be a (phased) Pauli; raises if it is not."""
    d = m.shape[0]
    n = d.bit_length() - 1
    for p in all_paulis(n):
        pm = p.matrix()
        c = np.trace(pm.conj().T @ m) / d
        if abs(abs(c) - 1) < tol:
            if np.max(np.abs(m - c * pm)) < tol:
                k = int(round(np.angle(c) / (np.pi / 2))) % 4
                return PauliString(n, p.x, p.z, (p.phase + k) % 4)
    raise ValueError("matrix is not a Pauli operator")


# ---------------------------------------------------------------------------
# Clifford maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CliffordMap:
    """Conjugation action of a Clifford unitary, given by generator images."""

    n: int
    images_x: tuple  # images of X_0..X_{n-1}
    images_z: tuple  # images of Z_0..Z_{n-1}

    def __post_init__(self):
        for img in (*self.images_x, *self.images_z):
            if img.n != self.n:
                raise SizeMismatchError("image size mismatch")
        # conjugation must preserve the symplectic form
        gens = [*self.images_x, *self.images_z]
        srcs = [PauliString.single(self.n, q, "X") for q in range(self.n)] + [
            PauliString.single(self.n, q, "Z") for q in range(self.n)
        ]
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if gens[i].commutes_with(gens[j]) != srcs[i].commutes_with(srcs[j]):
                    raise ValueError("generator images break commutation relations")

    @staticmethod
    def from_dense(u: DenseOperator) -> "CliffordMap":
        n = u.n_qubits
        ix, iz = [], []
        for q in range(n):
            ix.append(matrix_to_pauli(u.conjugate_pauli(PauliString.single(n, q, "X"))))
            iz.append(matrix_to_pauli(u.conjugate_pauli(PauliString.single(n, q, "Z"))))
        return CliffordMap(n, tuple(ix), tuple(iz))

    def conjugate(self, p: PauliString) -> PauliString:
        if p.n != self.n:
            raise SizeMismatchError("register sizes differ")
        out = PauliString(self.n, 0, 0, p.phase)
        for q in range(self.n):
            if (p.x >> q) & 1:
                out = out * self.images_x[q]
        for q in range(self.n):
            if (p.z >> q) & 1:
                out = out * self.images_z[q]
        return out

    def embedded(self, qubits: list[int], n: int) -> "CliffordMap":
        """Lift this map to act on the given qubits of an n-qubit register."""
        ix = [PauliString.single(n, q, "X") for q in range(n)]
        iz = [PauliString.single(n, q, "Z") for q in range(n)]
        for i, q in enumerate(qubits):
            ix[q] = self.images_x[i].embedded(qubits, n)
            iz[q] = self.images_z[i].embedded(qubits, n)
        return CliffordMap(n, tuple(ix), tuple(iz))


def conjugate_through(cmap: CliffordMap, p: PauliString) -> PauliString:
    return cmap.conjugate(p)


@lru_cache(maxsize=None)
def _single_qubit_map(name: str) -> CliffordMap:
    from . import gates  # local import to avoid a cycle

    return CliffordMap.from_dense(DenseOperator(gates.named_gate(name)))
