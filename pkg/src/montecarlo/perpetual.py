from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import DivergenceError, DomainError
from ..process.fbm import fbm_covariance_factor
from ..process.params import ModelParams
from ..sampling.randvar import draw_y_beta
from ..sampling.streams import SeedSpec
from ..special.specfun import m_wright_expectation, m_wright_moment
from ..potential.testfunctions import TestFunction
from .grid import TimeGrid, build_time_grid
from .reduce import mean_and_std_error

logger = logging.getLogger(__name__)

CHUNK = 256  # paths per work item; fixed so results do not depend on --threads
SUBSAMPLE = 100  # every 100th path also gets the coarse-grid integral
BAND = 3.0


@dataclass(frozen=True)
class PerpetualSpec:
    t_max: float = 50.0
    n_paths: int = 100_000
    seed: SeedSpec = field(default_factory=lambda: SeedSpec(0))
    step: float = 0.25
    n_geometric: int = 24
    ratio: float = 0.8

    def __post_init__(self) -> None:
        if not self.t_max > 0.0:
            raise DomainError("requires t_max > 0")
        if int(self.n_paths) < 1:
            raise DomainError("requires n_paths >= 1")

    def time_grid(self) -> TimeGrid:
        return build_time_grid(self.t_max, self.step, self.n_geometric, self.ratio)


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n_paths: int
    t_max: float
    tail_bound: float
    discretization_bound: float
    discretization_note: str
    seed: SeedSpec

    def error_budget(self, band: float = BAND) -> float:
        return band * self.std_error + self.tail_bound + self.discretization_bound

    def brackets(self, value: float, band: float = BAND) -> bool:
        """|mean - value| <= band * std_error + tail_bound + discretization_bound."""
        return bool(abs(self.mean - value) <= self.error_budget(band))


# -------------------------------
# Path integrals
# -------------------------------

def _path_integrals(
    params: ModelParams,
    f: TestFunction,
    x: np.ndarray,
    grid: TimeGrid,
    factor: np.ndarray,
    rngs: list,
) -> np.ndarray:
    """f(x + B(t)) on the grid for one path per generator, shape (len(rngs), len(grid))."""
    count = len(rngs)
    y = np.empty(count)
    z = np.empty((count, factor.shape[1], params.d))
    for i, rng in enumerate(rngs):
        y[i] = draw_y_beta(params.beta, rng)
        z[i] = rng.standard_normal((factor.shape[1], params.d))
    paths = np.sqrt(y)[:, None, None] * np.matmul(factor, z)
    values = np.empty((count, len(grid)))
    values[:, 0] = float(f(x[None, :])[0])
    values[:, 1:] = f(x + paths)
    return values


def _check_inputs(params: ModelParams, f: TestFunction, x) -> np.ndarray:
    if f.d != params.d:
        raise DomainError(f"requires a test function on R^{params.d}")
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.shape != (params.d,):
        raise DomainError(f"requires x in R^{params.d}")
    return p


def perpetual_integral_one_path(
    params: ModelParams, f: TestFunction, x, spec: PerpetualSpec, stream: np.random.Generator
) -> float:
    """Trapezoid integral of t -> f(x + B(t)) over [0, t_max] along one path drawn from `stream`."""
    x = _check_inputs(params, f, x)
    grid = spec.time_grid()
    factor = fbm_covariance_factor(params.hurst, grid.positive)
    values = _path_integrals(params, f, x, grid, factor, [stream])
    return float(values[0] @ grid.weights)


# -------------------------------
# Tail bound
# -------------------------------

def tail_bound(params: ModelParams, f: TestFunction, t_max: float) -> float:
    """
    Upper bound on int_{t_max}^inf E[|f(x + B(t))|] dt from
    E[|f(x + B(t))| | Y] <= min(||f||_inf, ||f||_1 (2 pi t^alpha Y)^{-d/2}).
    """
    d, alpha = params.d, params.alpha
    if d * alpha <= 2.0:
        raise DomainError("requires d*alpha > 2")
    if not t_max > 0.0:
        raise DomainError("requires t_max > 0")
    k = 0.5 * d * alpha - 1.0
    A = f.l1_norm * (2.0 * math.pi) ** (-0.5 * d)
    try:
        moment = m_wright_moment(params.beta, -0.5 * d)
    except DivergenceError:
        moment = None
    if moment is not None:
        return A * moment * t_max ** (-k) / k
    if alpha <= 1.0:
        raise DivergenceError("requires alpha > 1 for a finite tail bound when beta < 1")
    S = f.sup_norm
    if A == 0.0 or S == 0.0:
        return 0.0
    # t*(y) = c y^{-1/alpha} is where the two bounds cross
    c = (A / S) ** (2.0 / (alpha * d))
    plateau = A * c ** (-k) / k

    def scaled(y: float) -> float:
        # y^{1/alpha} times the t-integral; bounded and decreasing in y
        if y == 0.0:
            return S * c + plateau
        crossing = c * y ** (-1.0 / alpha)
        if crossing <= t_max:
            return y ** (1.0 / alpha - 0.5 * d) * A * t_max ** (-k) / k
        return y ** (1.0 / alpha) * S * (crossing - t_max) + plateau

    value, err = m_wright_expectation(params.beta, scaled, delta=-1.0 / alpha, bound=scaled(0.0))
    return value + err


# -------------------------------
# Estimator
# -------------------------------

def _run_chunk(params, f, x, grid, factor, seed: SeedSpec, start: int, stop: int):
    rngs = [seed.child(i).stream() for i in range(start, stop)]
    values = _path_integrals(params, f, x, grid, factor, rngs)
    fine = values @ grid.weights
    sub = [i - start for i in range(start, stop) if i % SUBSAMPLE == 0]
    diff = fine[sub] - values[sub] @ grid.coarse_weights
    logger.debug("paths %d..%d done", start, stop)
    return fine, diff


def _discretization(diff: np.ndarray) -> tuple[float, str]:
    if diff.size == 0:
        return 0.0, "no Richardson subsample"
    mean, se = mean_and_std_error(diff)
    bound = abs(mean) + BAND * se
    note = (
        f"Richardson grid vs half-grid on {diff.size} subsampled paths: "
        f"mean difference {mean:.3g} +- {se:.3g}; empirical, not a proof"
    )
    return bound, note


def estimate_potential_mc(
    params: ModelParams,
    f: TestFunction,
    x,
    spec: PerpetualSpec,
    threads: int = 1,
) -> Estimate:
    """Monte Carlo estimate of E[int_0^t_max f(x + B(t)) dt]; identical for any thread count."""
    reason = params.green_violation()
    if reason is not None:
        raise DomainError(reason)
    x = _check_inputs(params, f, x)
    if int(threads) < 1:
        raise DomainError("requires threads >= 1")
    grid = spec.time_grid()
    factor = fbm_covariance_factor(params.hurst, grid.positive)
    n = int(spec.n_paths)
    bounds = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]
    logger.info("estimating potential: %d paths, %d nodes, %d chunks, %d threads", n, len(grid), len(bounds), threads)

    def work(b):
        return _run_chunk(params, f, x, grid, factor, spec.seed, *b)

    if threads == 1:
        results = [work(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            results = list(pool.map(work, bounds))

    fine = np.concatenate([r[0] for r in results])
    diff = np.concatenate([r[1] for r in results])
    mean, se = mean_and_std_error(fine)
    disc, note = _discretization(diff)
    tb = tail_bound(params, f, spec.t_max)
    logger.info("estimate %.10g +- %.3g (tail %.3g, discretization %.3g)", mean, se, tb, disc)
    return Estimate(
        mean=mean,
        std_error=se,
        n_paths=n,
        t_max=spec.t_max,
        tail_bound=tb,
        discretization_bound=disc,
        discretization_note=note,
        seed=spec.seed,
    )


def estimate_record(
    estimate: Estimate,
    params: ModelParams,
    f: TestFunction,
    x,
    analytic: Optional[float] = None,
) -> dict:
    """JSON-ready record of an estimate."""
    record = {
        "params": params.as_dict(),
        "f_descriptor": f.descriptor(),
        "x": [float(v) for v in np.atleast_1d(x)],
        "n_paths": estimate.n_paths,
        "t_max": estimate.t_max,
        "mean": estimate.mean,
        "std_error": estimate.std_error,
        "tail_bound": estimate.tail_bound,
        "discretization_bound": estimate.discretization_bound,
        "discretization_note": estimate.discretization_note,
        "seed": estimate.seed.master_seed,
    }
    if analytic is not None:
        record["analytic"] = analytic
        record["within_budget"] = estimate.brackets(analytic)
    return record

