"""Susceptance / admittance / scattering models of the analog network."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from milac import (
    AsymmetricComponentError,
    DimensionError,
    NotRealizableError,
    ReferenceImpedance,
    ScatteringMatrix,
    SingularNetworkError,
    SusceptanceMatrix,
    admittance_from_components,
    beamformer_from_scattering,
    check_lossless_reciprocal,
    scattering_from_susceptance,
    susceptance_from_scattering,
)

Z0 = ReferenceImpedance()


def random_susceptance(n, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) * scale
    return SusceptanceMatrix(B=(A + A.T) / 2)


def test_reference_impedance():
    assert Z0.z0 == 50.0
    assert Z0.y0 == pytest.approx(1 / 50.0)
    with pytest.raises(DimensionError):
        ReferenceImpedance(z0=0.0)


def test_susceptance_requires_symmetry():
    with pytest.raises(AsymmetricComponentError):
        SusceptanceMatrix(B=np.array([[0.0, 1.0], [0.5, 0.0]]))
    # storage symmetrizes tiny residue exactly
    eps = 1e-12
    B = SusceptanceMatrix(B=np.array([[0.0, 1.0 + eps], [1.0, 0.0]])).B
    assert np.array_equal(B, B.T)


def test_admittance_all_zero():
    Y = admittance_from_components({}, {}, 2)
    assert np.array_equal(Y.Y, np.zeros((2, 2), dtype=complex))


def test_admittance_single_interconnection():
    # one susceptive component between ports 0 and 1, no grounds
    Y = admittance_from_components({(0, 1): 1j, (1, 0): 1j}, {}, 2)
    expected = np.array([[1j, -1j], [-1j, 1j]])
    assert np.allclose(Y.Y, expected, atol=0)


def test_admittance_grounds_only():
    Y = admittance_from_components({}, {0: 1j, 1: 1j}, 2)
    assert np.allclose(Y.Y, 1j * np.eye(2), atol=0)


def test_admittance_errors():
    with pytest.raises(AsymmetricComponentError):
        admittance_from_components({(0, 1): 1j, (1, 0): 2j}, {}, 2)
    with pytest.raises(DimensionError):
        admittance_from_components({(0, 2): 1j}, {}, 2)
    with pytest.raises(DimensionError):
        admittance_from_components({(0, 0): 1j}, {}, 2)
    with pytest.raises(DimensionError):
        admittance_from_components({}, {-1: 1j}, 2)


def test_scattering_open_network():
    S = scattering_from_susceptance(SusceptanceMatrix(B=np.zeros((3, 3))))
    assert np.array_equal(S.S, np.eye(3, dtype=complex))


def test_scattering_scalar_case():
    # B = (1/Z0) I gives S = (1-j)/(1+j) I = -j I
    B = SusceptanceMatrix(B=np.eye(2) / Z0.z0)
    S = scattering_from_susceptance(B)
    assert np.allclose(S.S, -1j * np.eye(2), atol=1e-14)


def test_scattering_lossless_reciprocal_random():
    S = scattering_from_susceptance(random_susceptance(6, seed=2, scale=0.05))
    rep = check_lossless_reciprocal(S, tol=1e-10)
    assert rep.passed
    assert rep.unitarity_residual <= 1e-10
    assert rep.symmetry_residual <= 1e-10


def test_susceptance_from_identity():
    B = susceptance_from_scattering(ScatteringMatrix(S=np.eye(2, dtype=complex)))
    assert np.allclose(B.B, 0.0, atol=1e-14)


def test_susceptance_from_scalar_case():
    B = susceptance_from_scattering(ScatteringMatrix(S=-1j * np.eye(2)))
    assert np.allclose(B.B, np.eye(2) / Z0.z0, atol=1e-14)


def test_susceptance_swap_not_realizable():
    swap = ScatteringMatrix(S=np.array([[0, 1], [1, 0]], dtype=complex))
    with pytest.raises(NotRealizableError):
        susceptance_from_scattering(swap)


def test_susceptance_rejects_lossy():
    S = ScatteringMatrix(S=0.5 * np.eye(2, dtype=complex))
    with pytest.raises(NotRealizableError):
        susceptance_from_scattering(S)


def test_cayley_round_trip():
    B0 = random_susceptance(5, seed=4, scale=0.02)
    S = scattering_from_susceptance(B0)
    B1 = susceptance_from_scattering(S)
    assert np.allclose(B1.B, B0.B, atol=1e-8)
    S2 = scattering_from_susceptance(B1)
    assert np.allclose(S2.S, S.S, atol=1e-8)


def test_beamformer_block_swap():
    K = 3
    S = np.zeros((2 * K, 2 * K), dtype=complex)
    S[:K, K:] = np.eye(K)
    S[K:, :K] = np.eye(K)
    F = beamformer_from_scattering(ScatteringMatrix(S=S), n_in=K, n_out=K)
    assert np.allclose(F, 0.5 * np.eye(K), atol=0)


def test_beamformer_identity_scattering():
    F = beamformer_from_scattering(
        ScatteringMatrix(S=np.eye(4, dtype=complex)), n_in=2, n_out=2)
    assert np.allclose(F, 0.0, atol=0)


def test_beamformer_dimension_mismatch():
    S = ScatteringMatrix(S=np.eye(4, dtype=complex))
    with pytest.raises(DimensionError):
        beamformer_from_scattering(S, n_in=3, n_out=2)


def test_check_lossless_reciprocal_cases():
    rep = check_lossless_reciprocal(ScatteringMatrix(S=np.eye(2, dtype=complex)))
    assert rep.passed and rep.unitarity_residual == 0 and rep.symmetry_residual == 0

    swap = ScatteringMatrix(S=np.array([[0, 1], [1, 0]], dtype=complex))
    assert check_lossless_reciprocal(swap).passed

    bad = ScatteringMatrix(S=np.array([[0, 2], [2, 0]], dtype=complex))
    rep = check_lossless_reciprocal(bad, tol=1e-10)
    assert not rep.passed
    assert rep.unitarity_residual == pytest.approx(3 * np.sqrt(2))
    assert rep.symmetry_residual == 0


def test_singular_network_guard():
    # cond(I + jZ0 B) blows past the limit when susceptances span 12 decades
    B = SusceptanceMatrix(B=np.diag([1e11, 0.0]))
    with pytest.raises(SingularNetworkError):
        scattering_from_susceptance(B)


symmetric_entries = st.floats(-0.2, 0.2)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10_000))
def test_cayley_properties(n, seed):
    B = random_susceptance(n, seed=seed, scale=0.05)
    S = scattering_from_susceptance(B)
    rep = check_lossless_reciprocal(S, tol=1e-10)
    assert rep.passed
    # sub-blocks of a unitary matrix scaled by 1/2 have spectral norm <= 1/2
    n_in = n // 2
    if n_in >= 1:
        F = beamformer_from_scattering(S, n_in=n_in, n_out=n - n_in)
        assert np.linalg.norm(F, ord=2) <= 0.5 + 1e-12
    # round trip when I + S is well conditioned
    if np.linalg.cond(np.eye(n) + S.S) < 1e6:
        B1 = susceptance_from_scattering(S)
        assert np.allclose(B1.B, B.B, atol=1e-8)
