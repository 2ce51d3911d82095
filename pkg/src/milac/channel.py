"""Multi-user MISO channel containers, Rayleigh generation, and the
range-space reduction that shrinks the precoder search to K dimensions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matio
from .errors import DimensionError, RankDeficientError

RANK_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ChannelSet:
    """Downlink channels for one realization.

    H holds one column per user (L x K), sigma the per-user noise standard
    deviations. Arrays are stored read-only; instances are safe to share
    across workers.
    """

    H: np.ndarray
    sigma: np.ndarray = None  # defaults to unit noise

    def __post_init__(self):
        H = np.asarray(self.H, dtype=np.complex128)
        if H.ndim != 2:
            raise DimensionError(f"H must be 2-D, got ndim={H.ndim}")
        L, K = H.shape
        if not (L >= K >= 1):
            raise DimensionError(f"need L >= K >= 1, got L={L}, K={K}")
        if not np.all(np.isfinite(H)):
            raise DimensionError("H has non-finite entries")
        sigma = self.sigma
        sigma = np.ones(K) if sigma is None else np.asarray(sigma, dtype=float)
        if sigma.shape != (K,):
            raise DimensionError(f"sigma must have shape ({K},), got {sigma.shape}")
        if not np.all(np.isfinite(sigma)) or np.any(sigma <= 0):
            raise DimensionError("sigma entries must be positive and finite")
        object.__setattr__(self, "H", _readonly(H))
        object.__setattr__(self, "sigma", _readonly(sigma))

    @property
    def L(self) -> int:
        return self.H.shape[0]

    @property
    def K(self) -> int:
        return self.H.shape[1]


@dataclass(frozen=True)
class ReducedChannel:
    """Economy SVD H = Q Sigma R^H plus the reduced channel Hbar = Q^H H.

    Q has orthonormal columns spanning the channel range space; the first
    nonzero entry of each column is made real and nonnegative so the
    factorization is unique. sigma is copied from the source ChannelSet so
    the reduced problem is self-contained.
    """

    Q: np.ndarray
    Sigma: np.ndarray
    R: np.ndarray
    Hbar: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        for name in ("Q", "Sigma", "R", "Hbar", "sigma"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))

    @property
    def L(self) -> int:
        return self.Q.shape[0]

    @property
    def K(self) -> int:
        return self.Q.shape[1]


def generate_rayleigh(L: int, K: int, seed) -> ChannelSet:
    """Draw an i.i.d. Rayleigh-fading channel set.

    Each entry is circularly symmetric complex Gaussian with unit variance
    (independent real and imaginary parts of variance 1/2, drawn from a
    PCG64 generator constructed from `seed`). The same seed reproduces the
    same matrix on any platform. Noise levels default to sigma_k = 1.
    """
    if not (L >= K >= 1):
        raise DimensionError(f"need L >= K >= 1, got L={L}, K={K}")
    rng = np.random.default_rng(seed)
    H = (rng.standard_normal((L, K)) + 1j * rng.standard_normal((L, K))) * np.sqrt(0.5)
    return ChannelSet(H=H)


def reduce_channel(ch: ChannelSet) -> ReducedChannel:
    """Factor H = Q Sigma R^H and form Hbar = Q^H H.

    The reduction preserves the Gram matrix (Hbar^H Hbar = H^H H), so any
    precoder expressed in the Q basis achieves the same rates as its
    full-dimension image. Raises RankDeficientError when the smallest
    singular value falls below RANK_TOL times the largest.
    """
    Q, s, Rh = np.linalg.svd(ch.H, full_matrices=False)
    if s[0] == 0.0 or s[-1] <= RANK_TOL * s[0]:
        raise RankDeficientError(
            f"channel rank deficient: singular values {s[0]:.3e} .. {s[-1]:.3e}"
        )
    Q = Q.copy()
    Rh = Rh.copy()
    # unique representative: rotate each column so its first nonzero entry
    # is real nonnegative, absorbing the phase into the matching row of R^H
    for j in range(Q.shape[1]):
        idx = np.flatnonzero(Q[:, j] != 0)
        i0 = idx[0]
        z = Q[i0, j]
        phase = z / abs(z)
        Q[:, j] *= phase.conjugate()
        Q[i0, j] = abs(z)
        Rh[j, :] *= phase
    Hbar = Q.conj().T @ ch.H
    return ReducedChannel(Q=Q, Sigma=np.diag(s), R=Rh.conj().T, Hbar=Hbar, sigma=ch.sigma)


def save_channel(path, ch: ChannelSet) -> None:
    """Write the channel matrix to a text matrix file (H only)."""
    matio.save_matrix(path, ch.H)


def load_channel(path, sigma=None) -> ChannelSet:
    """Read a channel matrix file.

    The file format carries H only; sigma defaults to all ones (the
    simulation default) unless given here.
    """
    H = matio.load_matrix(path)
    return ChannelSet(H=H, sigma=sigma)
