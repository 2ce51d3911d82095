"""Closed-form realization of an arbitrary digital beamformer on two
cascaded lossless reciprocal multiports with per-stream amplifiers.

The construction factors Pd = U S V^H and places V^H blocks in the first
network, U1 blocks in the second, and 4S in the amplifier gains; the two
half factors of the matched-port transfer blocks cancel the 4, so the
effective beamformer reproduces Pd exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import matio
from .errors import (
    DimensionError,
    InconsistentSolutionError,
    NegativeEntryError,
)
from .network import ScatteringMatrix, check_lossless_reciprocal

SCATTER_TOL = 1e-10


@dataclass(frozen=True)
class DigitalBeamformer:
    """Fully digital precoding matrix Pd (L x K) with its power budget."""

    Pd: np.ndarray
    Pt: float

    def __post_init__(self):
        Pd = np.asarray(self.Pd, dtype=np.complex128)
        if Pd.ndim != 2:
            raise DimensionError(f"Pd must be 2-D, got ndim={Pd.ndim}")
        if Pd.shape[0] < Pd.shape[1]:
            raise DimensionError(f"need L >= K, got shape {Pd.shape}")
        if not np.all(np.isfinite(Pd)):
            raise DimensionError("Pd has non-finite entries")
        if not (np.isfinite(self.Pt) and self.Pt > 0):
            raise DimensionError(f"Pt must be positive, got {self.Pt}")
        radiated = float(np.sum(np.abs(Pd) ** 2))
        if radiated > self.Pt * (1 + 1e-9):
            raise DimensionError(
                f"trace(Pd Pd^H) = {radiated:.6g} exceeds Pt = {self.Pt:.6g}"
            )
        Pd = Pd.copy()
        Pd.setflags(write=False)
        object.__setattr__(self, "Pd", Pd)

    @property
    def L(self) -> int:
        return self.Pd.shape[0]

    @property
    def K(self) -> int:
        return self.Pd.shape[1]


@dataclass(frozen=True)
class PhiFeasibilityReport:
    """Residuals of the second-layer feasibility conditions."""

    phi11_residual: float
    orthogonality_residual: float
    completeness_residual: float
    symmetry_residual: float
    tol: float
    passed: bool


@dataclass(frozen=True)
class TwoLayerSolution:
    """Scattering matrices, amplifier gains, and the beamformers they induce.

    Theta is the 2K-port first layer, Phi the (L+K)-port second layer,
    Psqrt the K x K diagonal amplifier amplitude gains. F and W are the
    half-scaled transfer blocks and G = W Psqrt F the effective beamformer.
    Construction re-derives F, W, G from the scattering blocks and rejects
    inconsistent inputs, so deserialized solutions are validated.
    """

    Theta: ScatteringMatrix
    Phi: ScatteringMatrix
    Psqrt: np.ndarray
    F: np.ndarray
    W: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        theta = self.Theta if isinstance(self.Theta, ScatteringMatrix) else ScatteringMatrix(S=self.Theta)
        phi = self.Phi if isinstance(self.Phi, ScatteringMatrix) else ScatteringMatrix(S=self.Phi)
        if theta.n % 2 != 0:
            raise DimensionError(f"Theta must be 2K x 2K, got n={theta.n}")
        K = theta.n // 2
        L = phi.n - K
        if L < K:
            raise DimensionError(f"Phi is {phi.n}-port, too small for K={K}")
        for name, mat in (("Theta", theta), ("Phi", phi)):
            rep = check_lossless_reciprocal(mat, tol=SCATTER_TOL)
            if not rep.passed:
                raise InconsistentSolutionError(
                    f"{name} is not lossless reciprocal: unitarity "
                    f"{rep.unitarity_residual:.3e}, symmetry {rep.symmetry_residual:.3e}"
                )
        Psqrt = _check_diag_nonneg(self.Psqrt, K)
        F = np.asarray(self.F, dtype=np.complex128)
        W = np.asarray(self.W, dtype=np.complex128)
        G = np.asarray(self.G, dtype=np.complex128)
        ref_F = theta.S[K:, :K] / 2.0
        ref_W = phi.S[K:, :K] / 2.0
        ref_G = ref_W @ Psqrt @ ref_F
        for name, got, ref in (("F", F, ref_F), ("W", W, ref_W), ("G", G, ref_G)):
            if got.shape != ref.shape:
                raise DimensionError(f"{name} has shape {got.shape}, expected {ref.shape}")
            if np.linalg.norm(got - ref) > 1e-10 * max(1.0, np.linalg.norm(ref)):
                raise InconsistentSolutionError(
                    f"{name} disagrees with the scattering blocks"
                )
        for name, arr in (("Psqrt", Psqrt), ("F", F), ("W", W), ("G", G)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "Theta", theta)
        object.__setattr__(self, "Phi", phi)

    @property
    def K(self) -> int:
        return self.Theta.n // 2

    @property
    def L(self) -> int:
        return self.Phi.n - self.K


def _check_diag_nonneg(S, K: int = None) -> np.ndarray:
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionError(f"gain matrix must be square, got shape {S.shape}")
    if K is not None and S.shape[0] != K:
        raise DimensionError(f"gain matrix must be {K} x {K}, got {S.shape}")
    if np.iscomplexobj(S):
        if np.max(np.abs(S.imag)) > 1e-12:
            raise NegativeEntryError("gain matrix must be real")
        S = S.real
    S = S.astype(float)
    d = np.diag(S)
    if np.any(S - np.diag(d)):
        raise DimensionError("gain matrix must be diagonal")
    if np.any(d < 0):
        raise NegativeEntryError(f"negative amplifier gain: min {d.min():.6g}")
    return np.diag(d)


def power_step(S, p_amp: float) -> np.ndarray:
    """Optimal diagonal amplifier amplitudes for target singular values S.

    Minimizes ||S - P^(1/2)/4||_F^2 over nonnegative diagonal P^(1/2) with
    trace(P) <= p_amp. The unconstrained optimum is 4S; when its power
    trace(16 S^2) exceeds the budget the whole diagonal is scaled down by
    sqrt(p_amp / trace(16 S^2)).
    """
    if not (np.isfinite(p_amp) and p_amp > 0):
        raise DimensionError(f"p_amp must be positive, got {p_amp}")
    S = _check_diag_nonneg(S)
    gain = 4.0 * S
    used = float(np.sum(np.diag(gain) ** 2))
    if used > p_amp:
        gain = gain * np.sqrt(p_amp / used)
    return gain


def map_digital_to_milac(d: DigitalBeamformer, amp_budget: float = None) -> TwoLayerSolution:
    """Realize a digital beamformer on the two-layer analog architecture.

    Factors Pd = U S V^H and builds the first-layer scattering matrix from
    V, the second-layer one from U1 = U[:, :K] (with -U2 U2^T completing
    the lossless reciprocal structure), and amplifier gains 4S. The
    effective beamformer G then equals Pd exactly up to rounding.

    amp_budget bounds trace(P) of the amplifier power; it defaults to
    16 * Pt, the exact power the construction needs, so radiated power
    equals trace(Pd Pd^H). A smaller budget uniformly shrinks G.
    """
    L, K = d.L, d.K
    U, s, Vh = np.linalg.svd(d.Pd)
    U1, U2 = U[:, :K], U[:, K:]
    Theta = np.zeros((2 * K, 2 * K), dtype=np.complex128)
    Theta[:K, K:] = Vh.T
    Theta[K:, :K] = Vh
    N = L + K
    Phi = np.zeros((N, N), dtype=np.complex128)
    Phi[:K, K:] = U1.T
    Phi[K:, :K] = U1
    Phi[K:, K:] = -U2 @ U2.T
    budget = 16.0 * d.Pt if amp_budget is None else amp_budget
    Psqrt = power_step(np.diag(s), budget)
    F = Theta[K:, :K] / 2.0
    W = Phi[K:, :K] / 2.0
    G = W @ Psqrt @ F
    return TwoLayerSolution(Theta=ScatteringMatrix(S=Theta), Phi=ScatteringMatrix(S=Phi),
                            Psqrt=Psqrt, F=F, W=W, G=G)


def effective_beamformer(sol: TwoLayerSolution) -> np.ndarray:
    """End-to-end beamformer of a two-layer solution.

    Computes W Psqrt F and the equivalent quarter-scaled scattering-block
    product Phi21 Psqrt Theta21 / 4, checks they agree, and returns the
    result. Disagreement beyond 1e-10 relative signals a corrupted
    solution and raises InconsistentSolutionError.
    """
    K = sol.K
    via_blocks = sol.Phi.S[K:, :K] @ sol.Psqrt @ sol.Theta.S[K:, :K] / 4.0
    G = sol.W @ sol.Psqrt @ sol.F
    if np.linalg.norm(G - via_blocks) > 1e-10 * max(1.0, np.linalg.norm(G)):
        raise InconsistentSolutionError("beamformer blocks disagree with scattering matrices")
    return G


def verify_phi_feasibility(Phi: ScatteringMatrix, U1: np.ndarray, tol: float = 1e-10) -> PhiFeasibilityReport:
    """Check the second-layer structural conditions against a given U1.

    Residuals (Frobenius): the upper-left K x K block Phi11, the range
    orthogonality U1^H Phi22, the completeness U1 U1^H + Phi22 Phi22^H - I
    (stated equivalently with conjugations swapped when Phi22 is
    symmetric), and the symmetry Phi22 - Phi22^T.
    """
    S = Phi.S if isinstance(Phi, ScatteringMatrix) else np.asarray(Phi)
    U1 = np.asarray(U1, dtype=np.complex128)
    L, K = U1.shape
    if S.shape != (L + K, L + K):
        raise DimensionError(
            f"Phi must be {(L + K)} x {(L + K)} for U1 of shape {U1.shape}, got {S.shape}"
        )
    Phi11 = S[:K, :K]
    Phi22 = S[K:, K:]
    r11 = float(np.linalg.norm(Phi11))
    orth = float(np.linalg.norm(U1.conj().T @ Phi22))
    comp = float(np.linalg.norm(U1 @ U1.conj().T + Phi22 @ Phi22.conj().T - np.eye(L)))
    sym = float(np.linalg.norm(Phi22 - Phi22.T))
    return PhiFeasibilityReport(
        phi11_residual=r11, orthogonality_residual=orth,
        completeness_residual=comp, symmetry_residual=sym, tol=tol,
        passed=bool(max(r11, orth, comp, sym) <= tol),
    )


def save_solution(dirpath, sol: TwoLayerSolution) -> None:
    """Write theta.txt, phi.txt, psqrt.txt into a directory."""
    d = Path(dirpath)
    d.mkdir(parents=True, exist_ok=True)
    matio.save_matrix(d / "theta.txt", sol.Theta.S)
    matio.save_matrix(d / "phi.txt", sol.Phi.S)
    matio.save_matrix(d / "psqrt.txt", sol.Psqrt)


def load_solution(dirpath) -> TwoLayerSolution:
    """Read a solution directory back, re-deriving F, W, G from the blocks."""
    d = Path(dirpath)
    Theta = matio.load_matrix(d / "theta.txt")
    Phi = matio.load_matrix(d / "phi.txt")
    Psqrt = matio.load_matrix(d / "psqrt.txt")
    if Theta.shape[0] % 2 != 0:
        raise DimensionError(f"theta.txt must hold a 2K x 2K matrix, got {Theta.shape}")
    K = Theta.shape[0] // 2
    Psqrt = _check_diag_nonneg(Psqrt, K)
    F = Theta[K:, :K] / 2.0
    W = Phi[K:, :K] / 2.0
    return TwoLayerSolution(Theta=ScatteringMatrix(S=Theta), Phi=ScatteringMatrix(S=Phi),
                            Psqrt=Psqrt, F=F, W=W, G=W @ Psqrt @ F)
