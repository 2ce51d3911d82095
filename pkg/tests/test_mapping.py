"""Digital-to-analog beamformer construction and its exactness."""

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milac import (
    DigitalBeamformer,
    DimensionError,
    NegativeEntryError,
    check_lossless_reciprocal,
    effective_beamformer,
    generate_rayleigh,
    load_solution,
    map_digital_to_milac,
    power_step,
    save_solution,
    sum_rate,
    verify_phi_feasibility,
)


def random_beamformer(L, K, Pt, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((L, K)) + 1j * rng.standard_normal((L, K))
    X *= np.sqrt(Pt / np.trace(X @ X.conj().T).real)
    return DigitalBeamformer(Pd=X, Pt=Pt)


def test_rank_one_axis_aligned():
    d = DigitalBeamformer(Pd=np.array([[1.0 + 0j], [0.0]]), Pt=1.0)
    sol = map_digital_to_milac(d)
    assert np.allclose(sol.Theta.S, np.array([[0, 1], [1, 0]]), atol=1e-14)
    assert np.allclose(sol.Psqrt, np.array([[4.0]]), atol=1e-14)
    assert np.allclose(sol.W, np.array([[0.5], [0.0]]), atol=1e-14)
    assert np.allclose(sol.F, np.array([[0.5]]), atol=1e-14)
    assert np.allclose(sol.G, d.Pd, atol=1e-14)


def test_identity_beamformer():
    d = DigitalBeamformer(Pd=np.eye(2, dtype=complex), Pt=2.0)
    sol = map_digital_to_milac(d)
    swap = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    assert np.allclose(sol.Theta.S, swap, atol=1e-14)
    assert np.allclose(sol.Phi.S, swap, atol=1e-14)
    assert np.allclose(sol.Psqrt, 4 * np.eye(2), atol=1e-14)
    assert np.allclose(sol.G, np.eye(2), atol=1e-14)


def test_random_reconstruction():
    d = random_beamformer(8, 3, Pt=1.0, seed=3)
    sol = map_digital_to_milac(d)
    err = np.linalg.norm(sol.G - d.Pd) / np.linalg.norm(d.Pd)
    assert err <= 1e-10
    assert check_lossless_reciprocal(sol.Theta, tol=1e-10).passed
    assert check_lossless_reciprocal(sol.Phi, tol=1e-10).passed
    # structural zeros
    K, L = 3, 8
    assert np.all(sol.Theta.S[:K, :K] == 0)
    assert np.all(sol.Theta.S[K:, K:] == 0)
    assert np.all(sol.Phi.S[:K, :K] == 0)


def test_square_edge_case():
    # L = K leaves no orthogonal complement and a zero lower-right block
    d = random_beamformer(4, 4, Pt=4.0, seed=5)
    sol = map_digital_to_milac(d)
    assert np.allclose(sol.Phi.S[4:, 4:], 0.0, atol=1e-12)
    assert np.linalg.norm(sol.G - d.Pd) <= 1e-10 * np.linalg.norm(d.Pd)


def test_rank_deficient_input():
    col = (np.arange(1, 7) + 1j).reshape(6, 1)
    Pd = np.hstack([col, 2 * col])  # rank 1, K = 2
    Pd = Pd / np.sqrt(np.trace(Pd @ Pd.conj().T).real)
    sol = map_digital_to_milac(DigitalBeamformer(Pd=Pd, Pt=1.0))
    gains = np.diag(sol.Psqrt)
    assert gains[1] == pytest.approx(0.0, abs=1e-12)
    assert np.linalg.norm(sol.G - Pd) <= 1e-9 * np.linalg.norm(Pd)


def test_trace_identity_and_budget():
    d = random_beamformer(6, 2, Pt=3.0, seed=8)
    sol = map_digital_to_milac(d)
    trace_P = np.trace(sol.Psqrt @ sol.Psqrt).real
    assert trace_P == pytest.approx(16 * 3.0, rel=1e-9)
    # binding budget rescales the gains onto the budget sphere
    tight = map_digital_to_milac(d, amp_budget=8.0)
    assert np.trace(tight.Psqrt @ tight.Psqrt).real == pytest.approx(8.0, rel=1e-9)


def test_dimension_error_wide_input():
    with pytest.raises(DimensionError):
        DigitalBeamformer(Pd=np.ones((2, 3), dtype=complex), Pt=10.0)


def test_power_violation_rejected():
    with pytest.raises(DimensionError):
        DigitalBeamformer(Pd=np.eye(2, dtype=complex) * 10, Pt=1.0)


def test_effective_beamformer_identity():
    sol = map_digital_to_milac(DigitalBeamformer(Pd=np.eye(2, dtype=complex), Pt=2.0))
    assert np.allclose(effective_beamformer(sol), np.eye(2), atol=1e-12)


def test_effective_beamformer_zero_gains():
    sol = map_digital_to_milac(DigitalBeamformer(Pd=np.eye(2, dtype=complex), Pt=2.0))
    dead = dataclasses.replace(
        sol, Psqrt=np.zeros((2, 2)), G=np.zeros((2, 2), dtype=complex))
    assert np.allclose(effective_beamformer(dead), 0.0, atol=0)


def test_effective_beamformer_matches_input():
    d = random_beamformer(5, 2, Pt=1.0, seed=13)
    sol = map_digital_to_milac(d)
    assert np.allclose(effective_beamformer(sol), d.Pd, atol=1e-10)


def test_phi_feasibility_both_signs():
    d = random_beamformer(6, 2, Pt=1.0, seed=21)
    sol = map_digital_to_milac(d)
    U, _, _ = np.linalg.svd(d.Pd, full_matrices=True)
    U1, U2 = U[:, :2], U[:, 2:]
    rep = verify_phi_feasibility(sol.Phi, U1)
    assert rep.passed

    # flipping the sign of the lower-right block stays feasible
    import milac.network as net
    Phi_flipped = sol.Phi.S.copy()
    Phi_flipped[2:, 2:] = U2 @ U2.T
    rep2 = verify_phi_feasibility(net.ScatteringMatrix(S=Phi_flipped), U1)
    assert rep2.passed


def test_phi_feasibility_rejects_identity_block():
    import milac.network as net
    d = random_beamformer(6, 2, Pt=1.0, seed=22)
    sol = map_digital_to_milac(d)
    U, _, _ = np.linalg.svd(d.Pd, full_matrices=True)
    U1 = U[:, :2]
    bad = sol.Phi.S.copy()
    bad[2:, 2:] = np.eye(6)
    rep = verify_phi_feasibility(net.ScatteringMatrix(S=bad), U1)
    assert not rep.passed
    assert rep.orthogonality_residual > 1e-6


def test_power_step_cases():
    out = power_step(np.diag([1.0, 0.5]), p_amp=16 * 1.25)
    assert np.allclose(out, np.diag([4.0, 2.0]), atol=1e-12)
    out = power_step(np.diag([1.0]), p_amp=4.0)
    assert np.allclose(out, np.diag([2.0]), atol=1e-12)
    assert np.allclose(power_step(np.zeros((2, 2)), p_amp=1.0), 0.0, atol=0)
    with pytest.raises(NegativeEntryError):
        power_step(np.diag([-1.0]), p_amp=1.0)
    with pytest.raises(NegativeEntryError):
        power_step(np.diag([1.0 + 1e-3j]), p_amp=1.0)


def test_sum_rate_invariance():
    ch = generate_rayleigh(8, 3, seed=2)
    d = random_beamformer(8, 3, Pt=10.0, seed=2)
    sol = map_digital_to_milac(d)
    r_digital = sum_rate(ch.H, d.Pd, ch.sigma)
    r_analog = sum_rate(ch.H, sol.G, ch.sigma)
    assert r_analog == pytest.approx(r_digital, abs=1e-9)


def test_solution_serialization(tmp_path):
    d = random_beamformer(5, 2, Pt=1.0, seed=30)
    sol = map_digital_to_milac(d)
    save_solution(tmp_path, sol)
    out = load_solution(tmp_path)
    assert np.array_equal(out.Theta.S, sol.Theta.S)
    assert np.array_equal(out.Phi.S, sol.Phi.S)
    assert np.array_equal(out.Psqrt, sol.Psqrt)
    assert np.allclose(out.G, sol.G, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 1), (4, 2), (8, 3), (8, 8), (16, 4)]),
       st.integers(0, 10_000), st.floats(0.1, 100.0))
def test_exactness_property(shape, seed, Pt):
    L, K = shape
    d = random_beamformer(L, K, Pt=Pt, seed=seed)
    sol = map_digital_to_milac(d)
    assert np.linalg.norm(sol.G - d.Pd) <= 1e-9 * np.linalg.norm(d.Pd)
    assert check_lossless_reciprocal(sol.Theta, tol=1e-10).passed
    assert check_lossless_reciprocal(sol.Phi, tol=1e-10).passed
