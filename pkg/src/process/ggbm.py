from __future__ import annotations

import logging
import math

import numpy as np
from scipy import linalg

from ..errors import DomainError, QuadratureError, SingularMatrixError
from ..sampling.randvar import draw_y_beta
from ..sampling.streams import SeedSpec
from ..special.specfun import gamma, m_wright_expectation, mittag_leffler
from .fbm import fbm_at_times, fbm_batch, rescale_path
from .params import MAX_FDD_POINTS, GammaAlphaMatrix, ModelParams
from .paths import GridSpec, Path

logger = logging.getLogger(__name__)

DENSITY_FAIL_TOL = 1e-6


# -------------------------------
# Path constructions
# -------------------------------

def ggbm_path_product(params: ModelParams, grid: GridSpec, seed: SeedSpec) -> Path:
    """sqrt(Y_beta) * B^{alpha/2}(t) with Y_beta drawn first, then the fBm."""
    rng = seed.stream()
    y = float(draw_y_beta(params.beta, rng))
    fbm = fbm_batch(params.hurst, grid, params.d, rng).T
    return Path(grid=grid, values=math.sqrt(y) * fbm, hurst=params.hurst, seed=seed)


def ggbm_path_subordinated(params: ModelParams, grid: GridSpec, seed: SeedSpec) -> Path:
    """B^{alpha/2}(t * Y_beta^{1/alpha}): an fBm path time-stretched by Y^{1/alpha}."""
    rng = seed.stream()
    base = Path(grid=grid, values=fbm_batch(params.hurst, grid, params.d, rng).T, hurst=params.hurst)
    y = float(draw_y_beta(params.beta, rng))
    stretched = rescale_path(base, y ** (1.0 / params.alpha))
    # grid point k of the stretched path is time t_k * Y^{1/alpha}
    return Path(grid=grid, values=stretched.values, hurst=params.hurst, seed=seed)


def ggbm_sample_at_times(params: ModelParams, times, count: int, rng: np.random.Generator) -> np.ndarray:
    """count independent draws of (B(t_1), ..., B(t_n)), shape (count, n, d), product form."""
    y = draw_y_beta(params.beta, rng, count)
    fbm = fbm_at_times(params.hurst, times, count, rng, params.d)
    return np.sqrt(y)[:, None, None] * fbm


# -------------------------------
# Closed-form properties
# -------------------------------

def even_moment(params: ModelParams, n: int, t: float) -> float:
    """E[B(t)^{2n}] in d = 1: (2n)! t^{alpha n} / (2^n Gamma(beta n + 1))."""
    return math.factorial(2 * n) * t ** (params.alpha * n) / (2.0**n * gamma(params.beta * n + 1.0))


def covariance(params: ModelParams, t: float, s: float) -> float:
    """E[(B(t), B(s))] = d (t^alpha + s^alpha - |t-s|^alpha) / (2 Gamma(beta + 1))."""
    a = params.alpha
    return params.d * (t**a + s**a - abs(t - s) ** a) / (2.0 * gamma(params.beta + 1.0))


def increment_charfun(params: ModelParams, k, t: float, s: float) -> float:
    """E[exp(i (k, B(t) - B(s)))] = E_beta(-|k|^2 |t-s|^alpha / 2)."""
    k2 = float(np.sum(np.square(k)))
    return mittag_leffler(params.beta, -0.5 * k2 * abs(t - s) ** params.alpha).value


# -------------------------------
# Densities and characteristic functions
# -------------------------------

def _scale_mixture(beta: float, dim: int, quad_form: float) -> float:
    """int_0^inf tau^{-dim/2} exp(-Q / (2 tau)) M_beta(tau) dtau."""
    if beta == 1.0:
        return math.exp(-0.5 * quad_form)
    if quad_form == 0.0 and dim >= 2:
        return math.inf

    def fn(tau: float) -> float:
        if tau == 0.0:
            return 1.0 if quad_form == 0.0 else 0.0
        return math.exp(-quad_form / (2.0 * tau))

    value, err = m_wright_expectation(beta, fn, delta=-0.5 * dim, points=(quad_form / dim,))
    if err > DENSITY_FAIL_TOL * max(1.0, abs(value)):
        raise QuadratureError(f"density tau-integral error estimate {err:.3g} too large")
    return value


def marginal_density(params: ModelParams, y, t: float) -> float:
    """
    rho_beta(y, t^alpha) = (2 pi t^alpha)^{-d/2} int tau^{-d/2} exp(-|y|^2/(2 t^alpha tau)) M_beta(tau) dtau.
    Infinite at y = 0 when d >= 2 and beta < 1.
    """
    if not t > 0.0:
        raise DomainError("requires t > 0")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.shape != (params.d,):
        raise DomainError(f"requires a point in R^{params.d}")
    s = t**params.alpha
    r2 = float(y @ y)
    return (2.0 * math.pi * s) ** (-0.5 * params.d) * _scale_mixture(params.beta, params.d, r2 / s)


def _check_fdd(params: ModelParams, times, theta) -> tuple[GammaAlphaMatrix, np.ndarray]:
    gam = GammaAlphaMatrix.from_times(times, params.alpha)
    if gam.n > MAX_FDD_POINTS:
        raise DomainError(f"requires n <= {MAX_FDD_POINTS} time points")
    th = np.asarray(theta, dtype=float).reshape(gam.n, -1)
    if th.shape[1] != params.d:
        raise DomainError(f"requires theta of shape ({gam.n}, {params.d})")
    return gam, th


def fdd_density(params: ModelParams, times, theta) -> float:
    """Joint density of (B(t_1), ..., B(t_n)) at theta (n x d), Gaussian covariance gamma_alpha / 2."""
    gam, th = _check_fdd(params, times, theta)
    if gam.times[0] <= 0.0:
        raise SingularMatrixError("gamma_alpha is singular when t_1 = 0")
    cov = gam.covariance
    try:
        lu, piv = linalg.lu_factor(cov, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SingularMatrixError("gamma_alpha could not be factorised") from exc
    diag = np.diag(lu)
    swaps = int(np.sum(piv != np.arange(gam.n)))
    det = float(np.prod(diag)) * (-1.0) ** swaps
    if not det > np.finfo(float).tiny or np.min(np.abs(diag)) < 1e-14 * np.max(np.abs(diag)):
        raise SingularMatrixError(f"gamma_alpha is singular (det={det:.3g})")
    quad_form = float(np.sum(th * linalg.lu_solve((lu, piv), th)))
    nd = gam.n * params.d
    prefactor = (2.0 * math.pi) ** (-0.5 * nd) * det ** (-0.5 * params.d)
    return prefactor * _scale_mixture(params.beta, nd, quad_form)


def fdd_charfun(params: ModelParams, times, theta) -> float:
    """E[exp(i sum_k (theta_k, B(t_k)))] = E_beta(-1/2 sum_j theta_j^T (gamma_alpha / 2) theta_j)."""
    gam, th = _check_fdd(params, times, theta)
    quad_form = float(np.sum(th * (gam.covariance @ th)))
    return mittag_leffler(params.beta, -0.5 * quad_form).value
