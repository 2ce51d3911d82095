"""Multiport network models: admittance assembly from components, the
susceptance/scattering bilinear maps, and lossless-reciprocity checks.

All networks here are purely susceptive (Y = jB with B real symmetric), so
their scattering matrices are unitary and symmetric by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AsymmetricComponentError,
    DimensionError,
    NotRealizableError,
    ResidueTooLargeError,
    SingularNetworkError,
)

COND_LIMIT = 1e12
RESIDUE_TOL = 1e-8


@dataclass(frozen=True)
class ReferenceImpedance:
    """Port reference impedance in ohms (treated as real and identical at
    every port)."""

    z0: float = 50.0

    def __post_init__(self):
        if not (np.isfinite(self.z0) and self.z0 > 0):
            raise DimensionError(f"z0 must be positive and finite, got {self.z0}")

    @property
    def y0(self) -> float:
        return 1.0 / self.z0


def _square(M, name: str) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise DimensionError(f"{name} has non-finite entries")
    return M


@dataclass(frozen=True)
class SusceptanceMatrix:
    """Real symmetric susceptance matrix B of a purely susceptive network.

    Construction checks symmetry to RESIDUE_TOL and then stores the exactly
    symmetrized (B + B^T)/2, so the stored matrix always satisfies B = B^T.
    """

    B: np.ndarray

    def __post_init__(self):
        B = _square(self.B, "B")
        if np.iscomplexobj(B):
            if np.max(np.abs(B.imag)) > RESIDUE_TOL * max(1.0, np.max(np.abs(B.real))):
                raise ResidueTooLargeError("susceptance matrix must be real")
            B = B.real
        B = B.astype(float, copy=True)
        scale = max(1.0, np.max(np.abs(B)))
        if np.max(np.abs(B - B.T)) > RESIDUE_TOL * scale:
            raise AsymmetricComponentError("susceptance matrix must be symmetric")
        B = (B + B.T) / 2.0
        B.setflags(write=False)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.B.shape[0]


@dataclass(frozen=True)
class AdmittanceMatrix:
    """Admittance matrix of an N-port network (complex, siemens)."""

    Y: np.ndarray

    def __post_init__(self):
        Y = _square(self.Y, "Y").astype(np.complex128, copy=True)
        Y.setflags(write=False)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self) -> int:
        return self.Y.shape[0]


@dataclass(frozen=True)
class ScatteringMatrix:
    """Scattering matrix of an N-port network at a common reference
    impedance. Not restricted to lossless or reciprocal networks; use
    check_lossless_reciprocal for that predicate."""

    S: np.ndarray

    def __post_init__(self):
        S = _square(self.S, "S").astype(np.complex128, copy=True)
        S.setflags(write=False)
        object.__setattr__(self, "S", S)

    @property
    def n(self) -> int:
        return self.S.shape[0]


@dataclass(frozen=True)
class LosslessReciprocalReport:
    unitarity_residual: float
    symmetry_residual: float
    tol: float
    passed: bool


def admittance_from_components(offdiag, ground, n: int) -> AdmittanceMatrix:
    """Assemble an N-port admittance matrix from component admittances.

    offdiag maps port pairs (i, v), 0-based with i != v, to the admittance
    of the component connected between those ports; giving both (i, v) and
    (v, i) is allowed when the values agree. ground maps a port to the
    admittance of its component to ground. Missing entries mean no
    component. The assembled matrix has [Y]_iv = -Y_iv off the diagonal and
    column sums (ground included) on the diagonal.
    """
    if n < 1:
        raise DimensionError(f"need n >= 1, got {n}")
    comp = np.zeros((n, n), dtype=np.complex128)
    filled = np.zeros((n, n), dtype=bool)
    for key, y in offdiag.items():
        i, v = key
        if not (0 <= i < n and 0 <= v < n):
            raise DimensionError(f"port pair {key} out of range for n={n}")
        if i == v:
            raise DimensionError(
                f"offdiag key {key} is diagonal; ground components go in `ground`"
            )
        y = complex(y)
        if filled[i, v] and not np.isclose(comp[i, v], y, rtol=1e-12, atol=0.0):
            raise AsymmetricComponentError(
                f"components ({i},{v}) and ({v},{i}) disagree: {comp[i, v]} vs {y}"
            )
        comp[i, v] = comp[v, i] = y
        filled[i, v] = filled[v, i] = True
    gnd = np.zeros(n, dtype=np.complex128)
    for v, y in ground.items():
        if not (0 <= v < n):
            raise DimensionError(f"ground port {v} out of range for n={n}")
        gnd[v] = complex(y)
    Y = -comp
    # diagonal: total admittance incident on the port, ground included
    Y[np.diag_indices(n)] = comp.sum(axis=0) + gnd
    return AdmittanceMatrix(Y=Y)


def scattering_from_susceptance(B, zref: ReferenceImpedance = ReferenceImpedance()) -> ScatteringMatrix:
    """Scattering matrix of the susceptive network Y = jB.

    Computes S = (I + j z0 B)^(-1) (I - j z0 B). The result is unitary and
    symmetric up to rounding. Raises SingularNetworkError when I + j z0 B is
    ill-conditioned (condition number at or above COND_LIMIT).
    """
    if not isinstance(B, SusceptanceMatrix):
        B = SusceptanceMatrix(B=np.asarray(B))
    M = 1j * zref.z0 * B.B
    A = np.eye(B.n) + M
    if np.linalg.cond(A) >= COND_LIMIT:
        raise SingularNetworkError("I + j z0 B is numerically singular")
    S = np.linalg.solve(A, np.eye(B.n) - M)
    return ScatteringMatrix(S=S)


def susceptance_from_scattering(S: ScatteringMatrix, zref: ReferenceImpedance = ReferenceImpedance()) -> SusceptanceMatrix:
    """Recover the real symmetric B with S = (I + j z0 B)^(-1)(I - j z0 B).

    The input must be lossless and reciprocal to within RESIDUE_TOL; a
    scattering matrix with an eigenvalue at -1 (I + S singular) has no
    susceptance realization and raises NotRealizableError. The computed
    matrix is returned real and exactly symmetric after discarding rounding
    residue, which must stay below RESIDUE_TOL.
    """
    if not isinstance(S, ScatteringMatrix):
        S = ScatteringMatrix(S=np.asarray(S))
    rep = check_lossless_reciprocal(S, tol=RESIDUE_TOL)
    if not rep.passed:
        raise NotRealizableError(
            "scattering matrix is not lossless reciprocal: "
            f"unitarity residual {rep.unitarity_residual:.3e}, "
            f"symmetry residual {rep.symmetry_residual:.3e}"
        )
    A = np.eye(S.n) + S.S
    if np.linalg.cond(A) >= COND_LIMIT:
        raise NotRealizableError("I + S is numerically singular (eigenvalue at -1)")
    Braw = np.linalg.solve(A, np.eye(S.n) - S.S) / (1j * zref.z0)
    scale = max(1.0, np.max(np.abs(Braw)))
    if np.max(np.abs(Braw.imag)) > RESIDUE_TOL * scale:
        raise ResidueTooLargeError("recovered susceptance has a large imaginary part")
    Breal = Braw.real
    if np.max(np.abs(Breal - Breal.T)) > RESIDUE_TOL * scale:
        raise ResidueTooLargeError("recovered susceptance has a large asymmetric part")
    return SusceptanceMatrix(B=(Breal + Breal.T) / 2.0)


def beamformer_from_scattering(S: ScatteringMatrix, n_in: int, n_out: int) -> np.ndarray:
    """Transfer matrix of a multiport used as a beamformer.

    Ports 0..n_in-1 are inputs and the remaining n_out are outputs; with
    matched sources and loads the output waves are half the corresponding
    scattering block, so this returns S[n_in:, :n_in] / 2 (an n_out x n_in
    matrix).
    """
    if n_in < 1 or n_out < 1 or n_in + n_out != S.n:
        raise DimensionError(
            f"port split {n_in}+{n_out} does not match an {S.n}-port network"
        )
    return S.S[n_in:, :n_in] / 2.0


def check_lossless_reciprocal(S: ScatteringMatrix, tol: float = 1e-10) -> LosslessReciprocalReport:
    """Frobenius residuals of unitarity (S^H S = I) and symmetry (S = S^T)."""
    M = S.S if isinstance(S, ScatteringMatrix) else np.asarray(S)
    uni = float(np.linalg.norm(M.conj().T @ M - np.eye(M.shape[0])))
    sym = float(np.linalg.norm(M - M.T))
    return LosslessReciprocalReport(
        unitarity_residual=uni, symmetry_residual=sym, tol=tol,
        passed=bool(uni <= tol and sym <= tol),
    )
