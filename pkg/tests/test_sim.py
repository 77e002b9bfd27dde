"""Tests for the Monte-Carlo sampler and decoder."""

import numpy as np
import pytest

from medsurf.circuit import build_check_circuit
from medsurf.sim import Simulator
from medsurf.table import ErrorModelParams, _expand, propagate


def _zero_sim(d=3, flavour="s_gate"):
    return Simulator(d, ErrorModelParams(0.0, 0.0, 0.0, flavour=flavour))


def _decode_grid(sim, par, xf, zf, debug=True):
    det = {b: sim.detection_events(par[b][None])[0] for b in "ZX"}
    corr = {}
    n_events = 0
    for basis in "ZX":
        rr, cc = np.nonzero(det[basis])
        n_events += len(rr)
        corr[basis] = sim.decode_basis(basis, rr, cc)
    out = sim.adjudicate(xf, zf, corr["Z"], corr["X"], debug=debug)
    return out, det, n_events


def _single_fault_grid(sim, fault_ci, fault_r, l1, l2, rflip, x_add, z_add):
    """Replay the noiseless schedule with one fault injected at one check."""
    xf = zf = 0
    par = {b: np.zeros((sim.d + 1, sim.n_checks[b]), np.uint8) for b in "ZX"}
    for r in range(sim.d):
        for ci, (basis, ctx) in enumerate(sim.schedule):
            rel = xf if basis == "Z" else zf
            pa = bin(rel & int(ctx.mask_a)).count("1") & 1
            pb = bin(rel & int(ctx.mask_b)).count("1") & 1
            if r == fault_r and ci == fault_ci:
                par[basis][r, ctx.row] = (l1 != l2) ^ rflip ^ pa ^ pb
                xf ^= x_add
                zf ^= z_add
            else:
                par[basis][r, ctx.row] = pa ^ pb
    for basis in "ZX":
        rel = xf if basis == "Z" else zf
        for k, m in enumerate(sim.geom[basis]["smasks"]):
            par[basis][sim.d, k] = bin(int(m) & rel).count("1") & 1
    return par, xf, zf


def _single_faults(sim, basis, ctx):
    """All single-location faults of one check as injectable tuples."""
    present = tuple(s for s in range(4) if int(ctx.leak_q[s]) != 0)
    circ = build_check_circuit(basis, sim.params.flavour, present)
    ops, channels = _expand(circ, ErrorModelParams.preset(0.01))
    out = [(0, 0, 1, 0, 0)]  # lone readout flip
    for position, branches in channels:
        for pauli, _ in branches:
            r = propagate(pauli, ops, position)
            dx, dz = r.x & 0xF, r.z & 0xF
            ax, az = (r.x >> 4) & 3, (r.z >> 4) & 3
            a1 = (ax & 1) | ((az & 1) << 1)
            a2 = ((ax >> 1) & 1) | (((az >> 1) & 1) << 1)
            out.append((a1, a2, 0,
                        int(ctx.slot_mask[dx]), int(ctx.slot_mask[dz])))
    return out


def test_noiseless_runs_are_silent():
    for flavour in ("s_gate", "sqrtswap"):
        sim = _zero_sim(3, flavour)
        outcomes = sim.run_batch(seed_key=[1, 2], n_shots=100, debug=True)
        assert all(not o.failed and o.event_count == 0 for o in outcomes)


def test_single_bulk_data_error_fires_two_checks():
    sim = _zero_sim(5)
    q = 2 * 5 + 2  # bulk qubit at (2, 2)
    par, xf, zf = _single_fault_grid(sim, 0, 1, 0, 0, 0, 1 << q, 0)
    out, det, n_events = _decode_grid(sim, par, xf, zf)
    # an X error is seen by the two Z checks containing the qubit, once
    assert det["X"].sum() == 0
    rr, cc = np.nonzero(det["Z"])
    assert len(rr) == 2
    assert set(rr) == {1}
    fired = {int(c) for c in cc}
    owners = {i for i, m in enumerate(sim.geom["Z"]["smasks"])
              if (int(m) >> q) & 1}
    assert fired == owners and len(owners) == 2
    assert not out.failed


def test_single_boundary_data_error_fires_one_check():
    sim = _zero_sim(5)
    q = 0  # corner qubit
    par, xf, zf = _single_fault_grid(sim, 0, 0, 0, 0, 0, 1 << q, 0)
    out, det, _ = _decode_grid(sim, par, xf, zf)
    assert det["Z"][: 5].sum() == 1
    assert not out.failed


def test_single_measurement_flip_makes_time_pair():
    sim = _zero_sim(3)
    for ci in (0, 3, 5):
        basis, ctx = sim.schedule[ci]
        par, xf, zf = _single_fault_grid(sim, ci, 1, 0, 0, 1, 0, 0)
        out, det, _ = _decode_grid(sim, par, xf, zf)
        other = "X" if basis == "Z" else "Z"
        assert det[other].sum() == 0
        rr, cc = np.nonzero(det[basis])
        assert list(rr) == [1, 2]
        assert set(cc) == {ctx.row}
        assert not out.failed


@pytest.mark.parametrize("flavour", ("s_gate", "sqrtswap"))
def test_d3_all_single_faults_are_corrected(flavour):
    # every single fault location, in every check and every round, must
    # decode without logical failure at distance 3
    sim = _zero_sim(3, flavour)
    for ci, (basis, ctx) in enumerate(sim.schedule):
        for a1, a2, rflip, x_add, z_add in _single_faults(sim, basis, ctx):
            for r in range(3):
                par, xf, zf = _single_fault_grid(
                    sim, ci, r, a1, a2, rflip, x_add, z_add)
                out, _, _ = _decode_grid(sim, par, xf, zf)
                assert not out.failed, (
                    f"fault ({a1},{a2},{rflip},{x_add:x},{z_add:x}) "
                    f"at check {ci} round {r} caused a logical error")


def test_sample_shot_matches_batch_of_one():
    sim = Simulator(3, ErrorModelParams.preset(0.01, p_leak=0.002))
    grid, xf, zf = sim.sample_shot(seed_key=[9, 9])
    par, bxf, bzf = sim.sample_batch(seed_key=[9, 9], n_shots=1)
    assert xf == int(bxf[0]) and zf == int(bzf[0])
    for b in "ZX":
        assert np.array_equal(grid.basis_parities[b], par[b][0])
        det = sim.detection_events(par[b])
        assert np.array_equal(grid.detection_events[b], det[0])
    assert grid.rounds == 3


def test_sampling_is_deterministic_per_seed():
    sim = Simulator(3, ErrorModelParams.preset(0.008, p_leak=0.001))
    a = sim.sample_batch(seed_key=[5, 0], n_shots=50)
    b = sim.sample_batch(seed_key=[5, 0], n_shots=50)
    c = sim.sample_batch(seed_key=[5, 1], n_shots=50)
    for basis in "ZX":
        assert np.array_equal(a[0][basis], b[0][basis])
    assert np.array_equal(a[1], b[1]) and np.array_equal(a[2], b[2])
    assert not np.array_equal(a[1], c[1]) or not np.array_equal(a[2], c[2])


def test_decoder_always_returns_to_code_space():
    # the stabiliser-consistency debug check must hold at high error rates
    sim = Simulator(3, ErrorModelParams.preset(0.02, p_leak=0.005))
    outcomes = sim.run_batch(seed_key=[3, 7], n_shots=300, debug=True)
    assert any(o.event_count > 0 for o in outcomes)


def test_failure_rate_grows_with_p2():
    shots = 4000
    lo = Simulator(3, ErrorModelParams.preset(0.004)).count_failures([21, 0], shots)
    hi = Simulator(3, ErrorModelParams.preset(0.02)).count_failures([22, 0], shots)
    p_lo, p_hi = lo / shots, hi / shots
    sigma = np.sqrt(p_lo * (1 - p_lo) / shots + p_hi * (1 - p_hi) / shots)
    assert p_hi - p_lo > 3 * sigma


def test_failure_rate_grows_with_p_leak():
    shots = 4000
    lo = Simulator(3, ErrorModelParams.preset(0.004, p_leak=0.0))
    hi = Simulator(3, ErrorModelParams.preset(0.004, p_leak=0.01))
    f_lo = lo.count_failures([31, 0], shots) / shots
    f_hi = hi.count_failures([32, 0], shots) / shots
    sigma = np.sqrt(f_lo * (1 - f_lo) / shots + f_hi * (1 - f_hi) / shots)
    assert f_hi - f_lo > 3 * sigma
