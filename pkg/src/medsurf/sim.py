"""Monte-Carlo stabiliser-check simulation and decoding.

Each noisy round runs all Z checks, then all X checks, each check type in
its four colour groups, so errors created by one check feed the parities
of checks later in the same round. d noisy rounds are closed by one
perfect readout round. Detection events are decoded per basis on a 3D
matching graph with unit space and time weights.

Two samplers share one random-number layout (5 uniforms per check and
round: table draw, leakage branch, leaked-half selector, leakage Pauli
packing, one spare):
a scalar reference implementation and a vectorised batch sampler used
for sweeps. With the same seed they consume identical streams, so they
must agree shot for shot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import build_check_circuit
from .lattice import Lattice, build_lattice, partition_plaquettes, path_masks, spatial_distances, stabiliser_masks
from .matching import match_events
from .table import ErrorModelParams, SamplingTable, compile_sampling_table, leakage_event_table

U64 = np.uint64


@dataclass(frozen=True)
class SyndromeGrid:
    basis_parities: dict  # basis -> uint8[rounds+1][n_checks]
    detection_events: dict  # basis -> uint8[rounds+1][n_checks]
    rounds: int


@dataclass(frozen=True)
class ShotOutcome:
    logical_x_failed: bool
    logical_z_failed: bool
    event_count: int

    @property
    def failed(self) -> bool:
        return self.logical_x_failed or self.logical_z_failed


def _popcount(v):
    return np.bitwise_count(v)


@dataclass(frozen=True)
class _CheckCtx:
    """Precomputed per-check sampling context."""

    row: int  # column in the parity array of its basis
    table: SamplingTable
    slot_mask: np.ndarray  # uint64[16], slot bitmask -> data-qubit bitmask
    mask_a: np.uint64  # half A data support
    mask_b: np.uint64
    leak_q: tuple  # data-qubit masks for (A.d1, A.d2, B.d1, B.d2); 0 if absent


class Simulator:
    """Sampler + decoder for one (distance, error model) configuration."""

    def __init__(self, d: int, params: ErrorModelParams):
        self.d = d
        self.params = params
        self.lattice = build_lattice(d)
        self.n_checks = {b: len(self.lattice.checks(b)) for b in "ZX"}
        self._build_schedule()
        self._build_geometry()
        self.leak_cum, self.leak_flags = self._leak_arrays()

    # -- construction --------------------------------------------------

    def _build_schedule(self):
        tables = {}
        self.schedule = []  # (basis, _CheckCtx) in measurement order
        for basis in "ZX":
            rows = {p.index: i for i, p in enumerate(self.lattice.checks(basis))}
            for group in partition_plaquettes(self.lattice, basis):
                for p in group:
                    key = (basis, p.present)
                    if key not in tables:
                        circ = build_check_circuit(basis, self.params.flavour, p.present)
                        tables[key] = compile_sampling_table(circ, self.params)
                    slot_mask = np.zeros(16, dtype=U64)
                    for m in range(16):
                        bits = 0
                        for s in range(4):
                            if (m >> s) & 1 and p.slots[s] >= 0:
                                bits |= 1 << p.slots[s]
                        slot_mask[m] = bits
                    mask_a = U64(slot_mask[0b0011])
                    mask_b = U64(slot_mask[0b1100])
                    leak_q = tuple(
                        U64(1 << p.slots[s]) if p.slots[s] >= 0 else U64(0)
                        for s in (0, 1, 2, 3)
                    )
                    self.schedule.append(
                        (basis, _CheckCtx(rows[p.index], tables[key], slot_mask, mask_a, mask_b, leak_q))
                    )

    def _build_geometry(self):
        self.geom = {}
        for basis in "ZX":
            dist, bdist = spatial_distances(self.lattice, basis)
            pmask, bmask = path_masks(self.lattice, basis)
            smasks = np.array(stabiliser_masks(self.lattice, basis), dtype=U64)
            self.geom[basis] = {
                "dist": np.array(dist, dtype=np.int64),
                "bweight": np.array(bdist, dtype=np.int64) + 1,
                "pmask": pmask,
                "bmask": bmask,
                "smasks": smasks,
            }
        lz = sum(1 << q for q in self.lattice.logical_z)
        lx = sum(1 << q for q in self.lattice.logical_x)
        self.logical_mask = {"Z": U64(lz), "X": U64(lx)}

    def _leak_arrays(self):
        branches = leakage_event_table(self.params.p_leak, self.params.leak_model)
        cum = np.cumsum([p for _, p in branches])
        flags = np.array(
            [["anc" in roles, "d1" in roles, "d2" in roles] for roles, _ in branches],
            dtype=np.uint8,
        )
        return cum, flags

    # -- sampling ------------------------------------------------------

    def _draws(self, seed_key, n_shots):
        rng = np.random.default_rng(np.random.SeedSequence(seed_key))
        return rng.random((self.d, len(self.schedule), 5, n_shots))

    def sample_batch(self, seed_key, n_shots: int):
        """Vectorised sampler; returns (parities dict, x_frame, z_frame)."""
        draws = self._draws(seed_key, n_shots)
        x_frame = np.zeros(n_shots, dtype=U64)
        z_frame = np.zeros(n_shots, dtype=U64)
        par = {
            b: np.zeros((n_shots, self.d + 1, self.n_checks[b]), dtype=np.uint8)
            for b in "ZX"
        }
        lcum, lflags = self.leak_cum, self.leak_flags
        for r in range(self.d):
            for ci, (basis, ctx) in enumerate(self.schedule):
                u = draws[r, ci]
                t = ctx.table
                idx = np.searchsorted(t.cum, u[0], side="right")
                idx[idx >= len(t.cum)] = len(t.cum) - 1
                rel = x_frame if basis == "Z" else z_frame
                pa = (_popcount(rel & ctx.mask_a) & U64(1)).astype(np.uint8)
                pb = (_popcount(rel & ctx.mask_b) & U64(1)).astype(np.uint8)
                l1 = t.anc1[idx]
                l2 = t.anc2[idx]
                x_add = ctx.slot_mask[t.data_x[idx]]
                z_add = ctx.slot_mask[t.data_z[idx]]
                # leakage per plaquette: one branch draw, the affected half
                # chosen uniformly, then a 6-bit packing giving the ancilla
                # letter and one Pauli per affected data qubit
                bi = np.searchsorted(lcum, u[1], side="right")
                bi[bi >= len(lcum)] = len(lcum) - 1
                anc_l, d1_l, d2_l = (lflags[bi, k].astype(bool) for k in range(3))
                half_b = u[2] >= 0.5
                pack = (u[3] * 64).astype(np.uint8)
                letter = pack & 3
                l1 = np.where(anc_l & ~half_b, letter, l1)
                l2 = np.where(anc_l & half_b, letter, l2)
                q1 = np.where(half_b, ctx.leak_q[2], ctx.leak_q[0])
                q2 = np.where(half_b, ctx.leak_q[3], ctx.leak_q[1])
                x_add = x_add ^ np.where(d1_l & ((pack >> 2) & 1).astype(bool), q1, U64(0))
                z_add = z_add ^ np.where(d1_l & ((pack >> 3) & 1).astype(bool), q1, U64(0))
                x_add = x_add ^ np.where(d2_l & ((pack >> 4) & 1).astype(bool), q2, U64(0))
                z_add = z_add ^ np.where(d2_l & ((pack >> 5) & 1).astype(bool), q2, U64(0))
                par[basis][:, r, ctx.row] = (l1 != l2).astype(np.uint8) ^ t.rflip[idx] ^ pa ^ pb
                x_frame ^= x_add
                z_frame ^= z_add
        # perfect closing round
        for basis in "ZX":
            rel = x_frame if basis == "Z" else z_frame
            sm = self.geom[basis]["smasks"]
            par[basis][:, self.d, :] = (_popcount(rel[:, None] & sm[None, :]) & U64(1)).astype(np.uint8)
        return par, x_frame, z_frame

    def sample_shot(self, seed_key) -> tuple:
        """Scalar reference sampler; returns (SyndromeGrid, x_frame, z_frame)."""
        par, xf, zf = self.sample_batch(seed_key, 1)
        parities = {b: par[b][0] for b in "ZX"}
        det = {b: self.detection_events(parities[b][None, :, :])[0] for b in "ZX"}
        grid = SyndromeGrid(parities, det, self.d)
        return grid, int(xf[0]), int(zf[0])

    @staticmethod
    def detection_events(parities: np.ndarray) -> np.ndarray:
        det = parities.copy()
        det[:, 1:, :] ^= parities[:, :-1, :]
        return det

    # -- decoding ------------------------------------------------------

    def decode_basis(self, basis: str, det_rounds, det_checks) -> int:
        """Correction mask for one shot's detection events of one basis."""
        g = self.geom[basis]
        n = len(det_rounds)
        if n == 0:
            return 0
        sp = g["dist"][np.ix_(det_checks, det_checks)]
        w = sp + np.abs(det_rounds[:, None] - det_rounds[None, :])
        b = g["bweight"][det_checks]
        # Exact ties in the base metric are broken lexicographically:
        # first towards the matching with the least total boundary weight,
        # then towards the least total spatial distance. A mid-round fault
        # of the staggered schedule shows up one round apart on adjacent
        # plaquettes, which the metric prices the same as two boundary
        # exits, and pairs of such faults tie short spatial pairings
        # against time-displaced ones; in every case the explanation that
        # plants fewer data-qubit corrections is the likelier one. The
        # nested scales exceed the largest possible penalty sums, so all
        # strict preferences of the base metric are kept intact.
        s_sp = np.int64(n * int(g["dist"].max()) + 1)
        s_w = s_sp * np.int64(int(b.sum()) + 1)
        _, pairs, bnd = match_events(s_w * w + sp, (s_w + s_sp) * b)
        corr = 0
        for i, j in pairs:
            corr ^= g["pmask"][det_checks[i]][det_checks[j]]
        for i in bnd:
            corr ^= g["bmask"][det_checks[i]]
        return corr

    def adjudicate(self, x_frame: int, z_frame: int, corr_x: int, corr_z: int,
                   debug: bool = False) -> ShotOutcome:
        rx = x_frame ^ corr_x  # residual X-type error after correction
        rz = z_frame ^ corr_z
        if debug:
            for basis, rel in (("Z", rx), ("X", rz)):
                for m in self.geom[basis]["smasks"]:
                    if bin(int(m) & rel).count("1") % 2:
                        raise AssertionError("decoder left a stabiliser violation")
        fx = bin(rx & int(self.logical_mask["Z"])).count("1") % 2 == 1
        fz = bin(rz & int(self.logical_mask["X"])).count("1") % 2 == 1
        return ShotOutcome(fx, fz, 0)

    def run_batch(self, seed_key, n_shots: int, debug: bool = False):
        """Sample, decode and adjudicate; returns array of ShotOutcome."""
        par, xf, zf = self.sample_batch(seed_key, n_shots)
        det = {b: self.detection_events(par[b]) for b in "ZX"}
        outcomes = []
        for s in range(n_shots):
            corr = {}
            nev = 0
            for basis in "ZX":
                rr, cc = np.nonzero(det[basis][s])
                nev += len(rr)
                corr[basis] = self.decode_basis(basis, rr, cc)
            out = self.adjudicate(int(xf[s]), int(zf[s]), corr["Z"], corr["X"], debug)
            outcomes.append(ShotOutcome(out.logical_x_failed, out.logical_z_failed, nev))
        return outcomes

    def count_failures(self, seed_key, n_shots: int, debug: bool = False) -> int:
        return sum(1 for o in self.run_batch(seed_key, n_shots, debug) if o.failed)
