# src/pipeline/verify.py
from __future__ import annotations

import logging
import math
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import erfcx
from scipy.stats import ks_2samp

from ..config import RunConfig
from ..montecarlo.perpetual import estimate_potential_mc
from ..montecarlo.reduce import mean_and_std_error
from ..potential import testfunctions
from ..potential.green import (
    continuity_constant,
    green_density,
    green_measure_of_ball,
    potential,
    time_integral_kernel,
    time_integral_numeric,
)
from ..potential.quadrature import sphere_area
from ..process.fbm import fbm_at_times, fbm_covariance
from ..process.ggbm import (
    covariance,
    even_moment,
    fdd_charfun,
    fdd_density,
    ggbm_path_product,
    ggbm_path_subordinated,
    ggbm_sample_at_times,
    increment_charfun,
    marginal_density,
)
from ..process.params import ModelParams
from ..process.paths import GridSpec
from ..sampling.randvar import draw_one_sided_stable, draw_y_beta
from ..special.constants import green_constant, time_kernel_constant
from ..special.specfun import (
    gamma,
    m_wright,
    m_wright_expectation,
    m_wright_moment,
    m_wright_series_mp,
    mittag_leffler,
)
from .report import check_entry

logger = logging.getLogger(__name__)

KS_LEVEL = 0.01
KS_MAX_PATHS = 20_000
SUITES = ("specfun", "moments", "covariance", "charfun", "representation", "green")


def _close(name, anchor, expected, observed, tol, relative=True) -> dict:
    scale = max(abs(expected), 1e-300) if relative else 1.0
    return check_entry(name, anchor, expected, observed, tol, abs(observed - expected) <= tol * scale)


def _mc(name, anchor, expected, samples, band) -> dict:
    mean, se = mean_and_std_error(samples)
    tol = band * se + 1e-12 * max(1.0, abs(expected))
    return check_entry(name, anchor, expected, mean, tol, abs(mean - expected) <= tol)


def _ks(name, anchor, a, b) -> dict:
    res = ks_2samp(a, b)
    return check_entry(name, anchor, KS_LEVEL, float(res.pvalue), KS_LEVEL, res.pvalue > KS_LEVEL)


# -------------------------------
# Suites
# -------------------------------

def suite_specfun(cfg: RunConfig, band: float) -> list[dict]:
    out = [
        _close("gamma(1/3)", "Euler gamma", 2.678938534707747, gamma(1.0 / 3.0), 1e-12),
        _close("E_1(-1)", "series is exp", math.exp(-1.0), mittag_leffler(1.0, -1.0).value, 1e-14),
        _close("E_1/2(-1)", "E_1/2(-x) = exp(x^2) erfc(x)", float(erfcx(1.0)), mittag_leffler(0.5, -1.0).value, 1e-10),
        _close("M_1/2(2)", "M_1/2 is a half Gaussian", math.exp(-1.0) / math.sqrt(math.pi), m_wright(0.5, 2.0).value, 1e-10),
        _close("green_constant(1,1,3)", "Brownian Green constant", 1.0 / (2.0 * math.pi),
               green_constant(ModelParams(1.0, 1.0, 3)), 1e-12),
    ]
    for beta in (0.3, 0.5, 0.7):
        for s in (0.1, 1.0, 5.0):
            laplace, _ = m_wright_expectation(beta, lambda tau, s=s: math.exp(-s * tau))
            out.append(_close(f"laplace beta={beta} s={s}", "Laplace transform of M_beta is E_beta(-s)",
                              mittag_leffler(beta, -s).value, laplace, 1e-6, relative=False))
        for delta in (-0.6, 0.5, 1.0, 2.0):
            moment, _ = m_wright_expectation(beta, lambda tau: 1.0, delta=delta)
            out.append(_close(f"moment beta={beta} delta={delta}", "moments of M_beta",
                              m_wright_moment(beta, delta), moment, 1e-6))
        z = np.linspace(-50.0, 0.0, 101)
        values = np.array([mittag_leffler(beta, float(v)).value for v in z])
        steps = np.diff(values)
        out.append(check_entry(f"E_beta decreasing beta={beta}", "complete monotonicity", 0.0,
                               float(np.min(steps)), 0.0, bool(np.all(steps > 0.0))))
        for tau in (2.0, 4.0):
            out.append(_close(f"M_beta beta={beta} tau={tau}", "M-Wright series in extended precision",
                              m_wright_series_mp(beta, tau), m_wright(beta, tau).value, 1e-9))
    for beta in (0.85, 0.9, 0.95):
        mass, _ = m_wright_expectation(beta, lambda tau: 1.0)
        out.append(_close(f"M_beta mass beta={beta}", "M_beta is a probability density", 1.0, mass, 1e-8))
    for alpha, d in ((1.5, 2), (1.2, 3), (2.0, 2)):
        p = ModelParams(0.5, alpha, d)
        D = green_constant(p)
        out.append(_close(f"D consistency alpha={alpha} d={d}", "D = C(alpha, d) * E[Y^(-1/alpha)]",
                          time_kernel_constant(alpha, d) * m_wright_moment(0.5, -1.0 / alpha), D, 1e-14))
    for alpha, d, tau, r in ((1.5, 2, 2.0, 1.0), (1.2, 3, 0.5, 2.0), (2.0, 2, 1.0, 1.0), (1.8, 3, 1.5, 0.7)):
        out.append(_close(f"t-integral alpha={alpha} d={d} tau={tau} r={r}", "t-integral closed form",
                          time_integral_kernel(alpha, d, tau, r), time_integral_numeric(alpha, d, tau, r), 1e-8))
    return out


def suite_moments(cfg: RunConfig, band: float) -> list[dict]:
    """Y_beta laws and moments of B(t) in d = 1."""
    beta, alpha = cfg.beta, cfg.alpha
    n = cfg.n_paths
    out = []
    y = draw_y_beta(beta, cfg.seed_spec.child(0).stream(), n)
    for delta in (0.5, 1.0, 2.0, -1.0 / alpha):
        if delta <= -1.0 and beta < 1.0:
            continue
        out.append(_mc(f"E[Y^{delta:g}]", "moments of M_beta", m_wright_moment(beta, delta), y**delta, band))
    for s in (0.5, 1.0, 2.0):
        out.append(_mc(f"E[exp(-{s:g} Y)]", "Laplace transform of M_beta", mittag_leffler(beta, -s).value,
                       np.exp(-s * y), band))
    if beta < 1.0:
        stable = draw_one_sided_stable(beta, cfg.seed_spec.child(1).stream(), n)
        out.append(_mc("E[exp(-S)]", "one-sided stable Laplace transform", math.exp(-1.0), np.exp(-stable), band))

    params = ModelParams(beta, alpha, 1)
    times = np.array([0.5, 1.0, 2.0])
    b = ggbm_sample_at_times(params, times, n, cfg.seed_spec.child(2).stream())[:, :, 0]
    for j, t in enumerate(times):
        out.append(_mc(f"E[B({t:g})]", "odd moments vanish", 0.0, b[:, j], band))
        out.append(_mc(f"E[B({t:g})^3]", "odd moments vanish", 0.0, b[:, j] ** 3, band))
        for k in (1, 2):
            out.append(_mc(f"E[B({t:g})^{2 * k}]", "even moments", even_moment(params, k, float(t)),
                           b[:, j] ** (2 * k), band))
    return out


def suite_covariance(cfg: RunConfig, band: float) -> list[dict]:
    params = cfg.params
    n = cfg.n_paths
    out = []
    times = np.array([0.5, 1.0, 2.0])
    b = ggbm_sample_at_times(params, times, n, cfg.seed_spec.child(3).stream())
    for i, j in ((0, 1), (1, 1), (1, 2)):
        s, t = float(times[i]), float(times[j])
        prod = np.sum(b[:, i, :] * b[:, j, :], axis=1)
        out.append(_mc(f"E[(B({t:g}),B({s:g}))]", "covariance", covariance(params, t, s), prod, band))
    fbm = fbm_at_times(params.hurst, times[:2], n, cfg.seed_spec.child(4).stream())[:, :, 0]
    for i, j in ((0, 1), (1, 1)):
        s, t = float(times[i]), float(times[j])
        out.append(_mc(f"fbm cov({t:g},{s:g}) H={params.hurst:g}", "fBm covariance",
                       float(fbm_covariance(params.hurst, s, t)), fbm[:, i] * fbm[:, j], band))
    return out


def suite_charfun(cfg: RunConfig, band: float) -> list[dict]:
    beta, alpha = cfg.beta, cfg.alpha
    p1 = ModelParams(beta, alpha, 1)
    out = [
        _close("phi(0)", "characteristic function at 0", 1.0,
               fdd_charfun(p1, [0.5, 1.0], [[0.0], [0.0]]), 0.0, relative=False),
    ]
    for k in (0.5, 1.0, 2.0):
        out.append(_close(f"phi n=1 k={k}", "increment form at s = 0", increment_charfun(p1, [k], 1.0, 0.0),
                          fdd_charfun(p1, [1.0], [[k]]), 1e-14, relative=False))

    times = np.array([0.5, 1.5])
    b = ggbm_sample_at_times(p1, times, cfg.n_paths, cfg.seed_spec.child(5).stream())[:, :, 0]
    inc = b[:, 1] - b[:, 0]
    for k in (0.5, 1.0, 2.0):
        out.append(_mc(f"E[cos({k:g} (B(1.5)-B(0.5)))]", "characteristic function of increments",
                       increment_charfun(p1, [k], 1.5, 0.5), np.cos(k * inc), band))

    # Fourier transform of the one-dimensional marginal density
    for k in (0.5, 1.0, 2.0):
        ft, _ = integrate.quad(lambda y: marginal_density(p1, [y], 1.0), 0.0, np.inf,
                               weight="cos", wvar=k, epsabs=1e-8, limit=200)
        out.append(_close(f"FT of density k={k}", "density and characteristic function agree",
                          fdd_charfun(p1, [1.0], [[k]]), 2.0 * ft, 1e-4, relative=False))

    out.append(_close("fdd n=1 vs marginal", "fdd density at n = 1", marginal_density(p1, [0.7], 1.3),
                      fdd_density(p1, [1.3], [[0.7]]), 1e-8))
    g = ModelParams(1.0, alpha, 1)
    times2, theta = np.array([0.5, 1.0]), np.array([[0.3], [-0.2]])
    cov = 0.5 * (times2[:, None] ** alpha + times2[None, :] ** alpha - np.abs(times2[:, None] - times2[None, :]) ** alpha)
    q = float(theta[:, 0] @ np.linalg.solve(cov, theta[:, 0]))
    gauss = math.exp(-0.5 * q) / (2.0 * math.pi * math.sqrt(np.linalg.det(cov)))
    out.append(_close("fdd beta=1 is Gaussian", "point mass reduction", gauss, fdd_density(g, times2, theta), 1e-10))

    p = cfg.params

    def shell(r: float) -> float:
        return r ** (p.d - 1) * marginal_density(p, np.r_[r, np.zeros(p.d - 1)], 1.0)

    mass = sum(integrate.quad(shell, lo, hi, epsabs=1e-10, epsrel=1e-9, limit=200)[0]
               for lo, hi in ((0.0, 1.0), (1.0, np.inf)))
    out.append(_close(f"density mass d={p.d}", "density integrates to 1", 1.0, sphere_area(p.d) * mass, 1e-6,
                      relative=False))
    return out


def suite_representation(cfg: RunConfig, band: float) -> list[dict]:
    params = ModelParams(cfg.beta, cfg.alpha, 1)
    n = min(cfg.n_paths, KS_MAX_PATHS)
    grid = GridSpec(t_max=2.0, n_steps=16)
    seed = cfg.seed_spec
    idx = {t: int(round(t / grid.dt)) for t in (0.5, 1.0)}
    prod = np.array([ggbm_path_product(params, grid, seed.child(10 + i)).values[:, 0] for i in range(n)])
    sub = np.array([ggbm_path_subordinated(params, grid, seed.child(10 + n + i)).values[:, 0] for i in range(n)])
    out = [
        _ks(f"product vs subordinated at t={t:g}", "two representations, same law", prod[:, k], sub[:, k])
        for t, k in idx.items()
    ]
    out.append(_mc("E[cos B(1)] subordinated", "characteristic function", mittag_leffler(params.beta, -0.5).value,
                   np.cos(sub[:, idx[1.0]]), band))
    c = 2.0
    rng = seed.child(6).stream()
    at_t = ggbm_sample_at_times(params, [1.0], n, rng)[:, 0, 0]
    at_ct = ggbm_sample_at_times(params, [c], n, rng)[:, 0, 0] / c ** params.hurst
    out.append(_ks("B(2t)/2^H vs B(t)", "self-similarity", at_ct, at_t))
    return out


def suite_green(cfg: RunConfig, band: float) -> list[dict]:
    params = cfg.validate()
    gd = green_density(params)
    d, alpha = params.d, params.alpha
    f = testfunctions.gaussian(d)
    x = np.zeros(d)
    closed = gd.D * sphere_area(d) * 2.0 ** (1.0 / alpha - 1.0) * gamma(1.0 / alpha)
    v = potential(gd, f, x)
    out = [
        _close("green_constant(1,1,3)", "Brownian Green constant", 1.0 / (2.0 * math.pi),
               green_constant(ModelParams(1.0, 1.0, 3)), 1e-12),
        _close("potential of unit Gaussian at 0", "radial closed form", closed, v.value, 1e-8),
        _close("ball measure at center", "potential of the indicator",
               green_measure_of_ball(gd, x, x, 1.0), potential(gd, testfunctions.indicator_ball(d), x).value, 1e-8),
        _close("t-integral", "t-integral closed form", time_integral_kernel(alpha, d, 1.0, 1.0),
               time_integral_numeric(alpha, d, 1.0, 1.0), 1e-8),
    ]
    K = continuity_constant(gd)
    worst = 0.0
    for sigma in np.logspace(-1.0, 1.0, 10):
        g = testfunctions.gaussian(d, sigma=float(sigma))
        worst = max(worst, potential(gd, g, x).value / (K * g.cl_norm))
    out.append(check_entry("continuity bound over 10 Gaussians", "|V| <= K ||f||_CL", 1.0, worst, 0.0, worst <= 1.0))

    est = estimate_potential_mc(params, f, x, cfg.perpetual_spec(), threads=cfg.threads)
    out.append(check_entry("perpetual integral vs potential", "expected perpetual integral equals the potential",
                           closed, est.mean, est.error_budget(band), est.brackets(closed, band)))
    return out


RUNNERS: dict[str, Callable[[RunConfig, float], list[dict]]] = {
    "specfun": suite_specfun,
    "moments": suite_moments,
    "covariance": suite_covariance,
    "charfun": suite_charfun,
    "representation": suite_representation,
    "green": suite_green,
}


def run_suite(suite: str, cfg: RunConfig, band: float = 3.0) -> list[dict]:
    if suite not in RUNNERS:
        raise KeyError(suite)
    logger.info("running suite %s", suite)
    checks = RUNNERS[suite](cfg, band)
    failed = [c["name"] for c in checks if not c["pass"]]
    if failed:
        logger.warning("suite %s: %d failed: %s", suite, len(failed), ", ".join(failed))
    return checks
