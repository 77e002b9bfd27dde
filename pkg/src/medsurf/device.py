"""Device physics: dot parameters -> gate strengths, error channels, timing.

Units are Hz for energies (h=1 convention) and seconds for times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliString


@dataclass(frozen=True)
class DeviceParams:
    t_l1: complex  # tunnelling energies, Hz
    t_l2: complex
    t_r1: complex
    t_r2: complex
    delta_l: float  # excitation energies, Hz
    delta_m: float
    delta_r: float
    u_charging: float  # on-site Coulomb repulsion, Hz
    omega: float  # Zeeman-splitting difference, Hz
    e_z: float = 0.0  # average Zeeman splitting, Hz

    def regime(self) -> str:
        """Gate regime from |Omega| vs the mediated exchange strength."""
        j = abs(mediated_exchange_full(self))
        if abs(self.omega) <= j / 10:
            return "sqrtswap"
        if abs(self.omega) >= 10 * j:
            return "s_gate"
        return "intermediate"


@dataclass(frozen=True)
class TimingParams:
    t_j: float  # exchange timescale pi/J, s
    t_z: float  # explicit Z gate, s
    t_h: float  # Hadamard / sqrt(Y), s
    t_2: float  # coherence time, s

    def __post_init__(self):
        if min(self.t_j, self.t_z, self.t_h, self.t_2) < 0:
            raise ValueError("timing parameters must be nonnegative")


@dataclass(frozen=True)
class PauliChannel:
    """Stochastic channel given as (operator, probability) terms.

    Terms are usually PauliStrings; the identity outcome is labelled "I".
    """

    terms: tuple

    def __post_init__(self):
        probs = [p for _, p in self.terms]
        if any(p < 0 for p in probs):
            raise ValueError("negative probability")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")

    def probability(self, op) -> float:
        return sum(p for o, p in self.terms if o == op or (isinstance(o, PauliString) and str(o) == op))


def mediated_exchange_full(p: DeviceParams) -> float:
    """Exchange strength J = -2(t_R2* t_R1 t_L1* t_L2 / (dR dM dL) + c.c.), Hz."""
    denom = p.delta_r * p.delta_m * p.delta_l
    if denom == 0:
        raise ZeroDivisionError("zero excitation energy")
    term = np.conj(p.t_r2) * p.t_r1 * np.conj(p.t_l1) * p.t_l2 / denom
    return float(-2 * (term + np.conj(term)).real)


def mediated_exchange_estimate(t: float, delta_side: float, delta_m: float) -> float:
    """Magnitude estimate t^4 / (delta_side^2 * delta_m), Hz."""
    if delta_side == 0 or delta_m == 0:
        raise ZeroDivisionError("zero excitation energy")
    return t**4 / (delta_side**2 * delta_m)


def residual_exchange_ratio(delta_on: float, delta_off: float, kind: str) -> float:
    """J_off/J_on when detuning from delta_on to delta_off.

    Mediated exchange scales as 1/delta^2, direct exchange as 1/delta.
    """
    if delta_off == 0:
        raise ZeroDivisionError("zero off detuning")
    if kind == "mediated":
        return (delta_on / delta_off) ** 2
    if kind == "direct":
        return delta_on / delta_off
    raise ValueError(f"unknown exchange kind {kind!r}")


def fluctuation_channel(h_terms, epsilon: float) -> PauliChannel:
    """Pauli channel from symmetric over/under-rotation of exp(-i*theta*h).

    h_terms is the Pauli decomposition of the normalised Hamiltonian h,
    as (operator, amplitude) pairs with amplitudes summing in squares to 1.
    The twirled channel is identity with probability 1 - eps^2 and each
    component g_i with probability eps^2 * alpha_i^2. A single unitary term
    (e.g. h = SWAP) reduces this to the two-outcome channel.
    """
    if not 0 <= epsilon <= 0.5:
        raise ValueError("epsilon out of range [0, 0.5]")
    amps = [a for _, a in h_terms]
    if abs(sum(a * a for a in amps) - 1.0) > 1e-9:
        raise ValueError("amplitudes must be normalised")
    e2 = epsilon * epsilon
    terms = [("I", 1.0 - e2)]
    for g, a in h_terms:
        if e2 > 0:
            terms.append((g, e2 * a * a))
    return PauliChannel(tuple(terms))


def gate_error_pair(p2: float) -> tuple[float, float]:
    """(Z1Z2 error prob of the S gate, SWAP error prob per sqrt(SWAP)).

    The S gate accumulates twice the exchange phase, hence twice the
    fluctuation variance of a single sqrt(SWAP).
    """
    if not 0 <= p2 <= 1:
        raise ValueError("probability out of range")
    return p2, p2 / 2


def leakage_oscillation(t_tun: float, u: float, elapsed: float) -> float:
    """Perturbative singlet -> doubly-occupied leakage probability.

    4*((2t)/U)^2 * sin^2(U*elapsed/2), valid for r = 2t/U <= 0.3.
    """
    if u <= 0:
        raise ValueError("charging energy must be positive")
    r = 2 * t_tun / u
    if abs(r) > 0.3:
        raise ValueError(f"non-perturbative regime: |2t/U| = {abs(r):.3f} > 0.3")
    return 4 * r * r * math.sin(u * elapsed / 2) ** 2


def leakage_oscillation_exact(t_tun: float, u: float, elapsed: float) -> float:
    """Exact |<ion+|exp(-iHt)|S>|^2 from the 4-level two-dot Hamiltonian.

    Basis (T, S, ion+, ion-): tunnelling couples only S and ion+.
    """
    tt = 2 * t_tun  # t + t* with t real
    h = np.array(
        [
            [0, 0, 0, 0],
            [0, 0, tt, 0],
            [0, tt, u, 0],
            [0, 0, 0, u],
        ],
        dtype=float,
    )
    evals, evecs = np.linalg.eigh(h)
    psi0 = np.zeros(4)
    psi0[1] = 1.0  # start in the singlet
    amps = evecs.conj().T @ psi0
    psi_t = evecs @ (np.exp(-1j * evals * elapsed) * amps)
    return float(abs(psi_t[2]) ** 2)


def cycle_time(flavour: str, tp: TimingParams) -> float:
    """Stabiliser-cycle duration for the chosen CZ construction."""
    if flavour == "s_gate":
        return 8 * tp.t_j + 2 * tp.t_h
    if flavour == "sqrtswap":
        return 8 * tp.t_j + 8 * tp.t_z + 2 * tp.t_h
    raise ValueError(f"unknown gate flavour {flavour!r}")


def dephasing_per_cycle(cycle: float, t2: float) -> float:
    """Phase-flip probability per cycle under CPMG decoupling: T_cycle/(2*T2)."""
    if t2 <= 0:
        raise ValueError("coherence time must be positive")
    return cycle / (2 * t2)
