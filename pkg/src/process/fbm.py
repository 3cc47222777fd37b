from __future__ import annotations

import logging
from dataclasses import replace
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import fft as sp_fft
from scipy import linalg

from ..errors import DomainError, EmbeddingError
from ..sampling.streams import SeedSpec
from .paths import GridSpec, Path

logger = logging.getLogger(__name__)

CHOLESKY_MAX_STEPS = 8  # small grids go straight to the dense factorization
NEG_EIG_TOL = 1e-10


def _check_hurst(hurst: float) -> None:
    if not 0.0 < hurst <= 1.0:
        raise DomainError("requires 0 < hurst <= 1")


def fgn_autocovariance(hurst: float, k) -> np.ndarray:
    """Autocovariance of unit-step fractional Gaussian noise at lag k."""
    k = np.abs(np.asarray(k, dtype=float))
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1.0) ** h2 - 2.0 * k**h2 + np.abs(k - 1.0) ** h2)


def fbm_covariance(hurst: float, s, t) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    h2 = 2.0 * hurst
    return 0.5 * (t**h2 + s**h2 - np.abs(t - s) ** h2)


# -------------------------------
# Circulant embedding (Davies-Harte) with dense fallback
# -------------------------------

@lru_cache(maxsize=64)
def _circulant_scales(hurst: float, n: int) -> Optional[np.ndarray]:
    """sqrt(lambda / 2n) for the 2n-circulant embedding of the fGn covariance, or None if not PSD."""
    r = fgn_autocovariance(hurst, np.arange(n + 1))
    row = np.concatenate([r, r[-2:0:-1]])
    lam = sp_fft.fft(row).real
    if lam.min() < -NEG_EIG_TOL * lam.max():
        return None
    return np.sqrt(np.clip(lam, 0.0, None) / (2 * n))


@lru_cache(maxsize=64)
def _fgn_cholesky(hurst: float, n: int) -> np.ndarray:
    cov = linalg.toeplitz(fgn_autocovariance(hurst, np.arange(n)))
    try:
        return linalg.cholesky(cov, lower=True)
    except linalg.LinAlgError as exc:
        raise EmbeddingError(f"fGn covariance not positive definite (hurst={hurst:g}, n={n})") from exc


def _fgn(hurst: float, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """count independent unit-step fGn sequences of length n, shape (count, n)."""
    if hurst == 0.5:
        return rng.standard_normal((count, n))
    scales = None if n <= CHOLESKY_MAX_STEPS else _circulant_scales(hurst, n)
    if scales is None:
        if n > CHOLESKY_MAX_STEPS:
            logger.warning("circulant embedding not PSD (hurst=%g, n=%d); using Cholesky", hurst, n)
        chol = _fgn_cholesky(hurst, n)
        return rng.standard_normal((count, n)) @ chol.T
    m = 2 * n
    z = rng.standard_normal((count, m)) + 1j * rng.standard_normal((count, m))
    return sp_fft.fft(scales * z, axis=-1).real[:, :n]


def fbm_batch(hurst: float, grid: GridSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """count independent one-dimensional fBm paths on the grid, shape (count, n_steps + 1)."""
    _check_hurst(hurst)
    n = grid.n_steps
    out = np.zeros((count, n + 1))
    if hurst == 1.0:
        # perfectly correlated line t * xi
        out[:] = rng.standard_normal((count, 1)) * grid.times[None, :]
        return out
    out[:, 1:] = np.cumsum(_fgn(hurst, n, count, rng), axis=1) * grid.dt**hurst
    return out


def generate_fbm(hurst: float, grid: GridSpec, d: int, seed: SeedSpec) -> Path:
    """d-dimensional fBm on a uniform grid; components are i.i.d. one-dimensional fBms."""
    if d < 1:
        raise DomainError("requires dim >= 1")
    values = fbm_batch(hurst, grid, d, seed.stream()).T.copy()
    return Path(grid=grid, values=values, hurst=hurst, seed=seed)


def rescale_path(path: Path, time_factor: float) -> Path:
    """B(c t) = c^H B(t) in law: the same path on the grid stretched by c."""
    if not time_factor > 0.0:
        raise DomainError("requires time_factor > 0")
    if time_factor == 1.0:
        return path
    return replace(
        path,
        grid=path.grid.scaled(time_factor),
        values=path.values * time_factor**path.hurst,
    )


# -------------------------------
# Dense covariance factor at arbitrary times
# -------------------------------

@lru_cache(maxsize=16)
def _covariance_factor(hurst: float, times: tuple) -> np.ndarray:
    t = np.asarray(times)
    if hurst == 1.0:
        return t[:, None]
    cov = fbm_covariance(hurst, t[:, None], t[None, :])
    try:
        return linalg.cholesky(cov, lower=True)
    except linalg.LinAlgError:
        logger.warning("Cholesky failed on %d times (hurst=%g); using eigen factor", t.size, hurst)
    w, v = linalg.eigh(cov)
    if w.min() < -NEG_EIG_TOL * w.max():
        raise EmbeddingError(f"fBm covariance has negative eigenvalue {w.min():.3g}")
    return v * np.sqrt(np.clip(w, 0.0, None))


def fbm_covariance_factor(hurst: float, times) -> np.ndarray:
    """L with L @ L.T = fBm covariance at the given strictly increasing positive times."""
    _check_hurst(hurst)
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or np.any(t <= 0.0) or np.any(np.diff(t) <= 0.0):
        raise DomainError("requires strictly increasing positive times")
    return _covariance_factor(hurst, tuple(t.tolist()))


def fbm_at_times(hurst: float, times, count: int, rng: np.random.Generator, d: int = 1) -> np.ndarray:
    """fBm values at the given times, shape (count, n_times, d)."""
    factor = fbm_covariance_factor(hurst, times)
    z = rng.standard_normal((count, factor.shape[1], d))
    return np.matmul(factor, z)
