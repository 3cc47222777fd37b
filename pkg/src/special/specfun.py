from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import mpmath as mp
import numpy as np
from numpy.polynomial import chebyshev
from scipy import integrate, optimize
from scipy.special import gamma as _sp_gamma
from scipy.special import gammaln

from ..errors import ConvergenceError, DivergenceError, DomainError, PoleError

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)

# Largest log|term| summed in double precision: e**8 * eps keeps cancellation near 1e-12.
SERIES_LOG_LIMIT = 8.0
# M_beta is below about e**-MW_LOG_LIMIT past the reliable range T_beta.
MW_LOG_LIMIT = 690.0
# M-Wright series on [0, MW_SERIES_TAU], angular integral beyond.
MW_SERIES_TAU = 1.0
MW_QUAD_TOL = 1e-9
# Piecewise Chebyshev table of log M_beta used inside quadratures.
TABLE_DEG = 24
TABLE_PANELS = 8
TABLE_TOL = 1e-13
# Truncation floor for series terms, absolute and relative to the largest term.
LOG_TINY = math.log(1e-18)
LOG_REL = math.log(1e-17)
CHUNK = 256
MAX_TERMS = 20000
ML_QUAD_TOL = 1e-10


@dataclass(frozen=True)
class MLParams:
    beta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.beta <= 1.0:
            raise DomainError("requires 0 < beta <= 1")


@dataclass(frozen=True)
class EvalResult:
    value: float
    est_abs_error: float
    terms_used: int

    def __float__(self) -> float:
        return self.value


# -------------------------------
# Gamma
# -------------------------------

def gamma(x: float) -> float:
    """Euler gamma; reflection formula below 1/2, pole error at 0, -1, -2, ..."""
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma has a pole at x={x:g}")
    if x < 0.5:
        return math.pi / (_sinpi(x) * float(_sp_gamma(1.0 - x)))
    return float(_sp_gamma(x))


def _sinpi(x):
    # fmod is exact, so large |x| does not lose the phase
    return np.sin(np.pi * np.fmod(x, 2.0))


def _log_abs_rgamma(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log|1/Gamma(x)| and its sign, reflection for x <= 0 (poles give -inf, sign 0)."""
    x = np.asarray(x, dtype=float)
    logmag = np.empty_like(x)
    sign = np.ones_like(x)
    pos = x > 0
    logmag[pos] = -gammaln(x[pos])
    neg = ~pos
    if np.any(neg):
        s = _sinpi(x[neg])
        s = np.where(x[neg] == np.floor(x[neg]), 0.0, s)
        with np.errstate(divide="ignore"):
            logmag[neg] = gammaln(1.0 - x[neg]) + np.log(np.abs(s)) - math.log(math.pi)
        sign[neg] = np.sign(s)
    return logmag, sign


def _series_extent(
    envelope: Callable[[np.ndarray], np.ndarray], log_cap: float = math.inf
) -> tuple[np.ndarray, Optional[int]]:
    """(log envelope, N) with term N the first past the peak below the floor; N is None once a term exceeds e**log_cap."""
    parts: list[np.ndarray] = []
    n0 = 0
    while n0 < MAX_TERMS:
        parts.append(envelope(np.arange(n0, n0 + CHUNK, dtype=float)))
        env = np.concatenate(parts)
        ipeak = int(np.argmax(env))
        if env[ipeak] > log_cap:
            return env, None
        floor = min(LOG_TINY, float(env[ipeak]) + LOG_REL)
        below = np.nonzero(env[ipeak:] < floor)[0]
        if below.size:
            return env, ipeak + int(below[0])
        n0 += CHUNK
    raise ConvergenceError(f"series did not reach its truncation floor in {MAX_TERMS} terms")


# -------------------------------
# Mittag-Leffler on the negative axis
# -------------------------------

def mittag_leffler(beta: float, z: float) -> EvalResult:
    """
    E_beta(z) for z <= 0: compensated Taylor series while every term stays below
    e**SERIES_LOG_LIMIT, otherwise
        E_beta(-x) = sin(beta pi)/(pi beta) * int_0^inf exp(-v**(1/beta)) x / (v^2 + 2 v x cos(beta pi) + x^2) dv.
    """
    MLParams(beta)
    z = float(z)
    if z > 0.0:
        raise DomainError("requires z <= 0")
    if z == 0.0:
        return EvalResult(1.0, 0.0, 1)
    if beta == 1.0:
        return EvalResult(math.exp(z), EPS * math.exp(z), 0)

    x = -z
    logx = math.log(x)
    try:
        env, n_used = _series_extent(lambda n: n * logx - gammaln(beta * n + 1.0), SERIES_LOG_LIMIT)
    except ConvergenceError:
        n_used = None
    if n_used is not None:
        n = np.arange(n_used)
        peak = float(np.max(env[: n_used + 1]))
        terms = np.where(n % 2 == 0, 1.0, -1.0) * np.exp(env[:n_used])
        err = math.exp(env[n_used]) + EPS * n_used * math.exp(peak)
        return EvalResult(math.fsum(terms), err, n_used)

    logger.debug("mittag_leffler(beta=%g, z=%g): integral branch", beta, z)
    return _mittag_leffler_integral(beta, x)


def _mittag_leffler_integral(beta: float, x: float) -> EvalResult:
    c = math.cos(beta * math.pi)
    inv_beta = 1.0 / beta

    def integrand(v: float) -> float:
        return math.exp(-(v ** inv_beta)) * x / (v * v + 2.0 * v * x * c + x * x)

    # near beta = 1 the kernel peaks sharply at v = x
    edges = [0.0, *sorted({1.0, x})]
    total, total_err = integrate.quad(integrand, edges[-1], np.inf, epsabs=1e-15, epsrel=1e-12, limit=200)
    for lo, hi in zip(edges[:-1], edges[1:]):
        part, part_err = integrate.quad(integrand, lo, hi, epsabs=1e-15, epsrel=1e-12, limit=200)
        total += part
        total_err += part_err
    scale = math.sin(beta * math.pi) / (math.pi * beta)
    value = scale * total
    err = scale * total_err
    if err > ML_QUAD_TOL:
        raise ConvergenceError(f"mittag_leffler integral error estimate {err:.3g} above {ML_QUAD_TOL:g}")
    return EvalResult(value, err, 0)


# -------------------------------
# M-Wright
# -------------------------------

def _mw_envelope(beta: float, logtau: float) -> Callable[[np.ndarray], np.ndarray]:
    def envelope(n: np.ndarray) -> np.ndarray:
        x = 1.0 - beta - beta * n
        # |sin| <= 1 bound keeps the envelope smooth through the poles of Gamma
        rg = np.where(x > 0, -gammaln(np.where(x > 0, x, 1.0)), gammaln(1.0 - x) - math.log(math.pi))
        return n * logtau - gammaln(n + 1.0) + rg
    return envelope


def _check_mw_beta(beta: float) -> None:
    if not 0.0 < beta < 1.0:
        raise DomainError("requires 0 < beta < 1 (beta = 1 is the point mass at tau = 1)")


def _log_zolotarev(beta: float, phi: float) -> float:
    """log a(phi), a = (sin(beta phi)/sin phi)^(1/(1-beta)) sin((1-beta) phi)/sin(beta phi); increasing on (0, pi)."""
    b1 = 1.0 - beta
    sb = math.log(math.sin(beta * phi))
    return (sb - math.log(math.sin(phi))) / b1 + math.log(math.sin(b1 * phi)) - sb


def _log_zolotarev_at_zero(beta: float) -> float:
    return math.log(1.0 - beta) + beta / (1.0 - beta) * math.log(beta)


def m_wright_range(beta: float) -> float:
    """Reliable range T_beta: tau^(1/(1-beta)) a(0) = MW_LOG_LIMIT, so M_beta(T_beta) is near e**-MW_LOG_LIMIT."""
    _check_mw_beta(beta)
    return math.exp((1.0 - beta) * (math.log(MW_LOG_LIMIT) - _log_zolotarev_at_zero(beta)))


def _m_wright_series(beta: float, tau: float) -> Optional[EvalResult]:
    """Double-precision series, or None when it cancels too badly or does not truncate."""
    logtau = math.log(tau)
    try:
        env, n_used = _series_extent(_mw_envelope(beta, logtau), SERIES_LOG_LIMIT)
    except ConvergenceError:
        return None
    if n_used is None:
        return None
    peak = float(np.max(env[: n_used + 1]))
    n = np.arange(n_used, dtype=float)
    logmag, sign = _log_abs_rgamma(1.0 - beta - beta * n)
    alt = np.where(n % 2 == 0, 1.0, -1.0)
    terms = alt * sign * np.exp(n * logtau - gammaln(n + 1.0) + logmag)
    err = math.exp(env[n_used]) + EPS * n_used * math.exp(peak)
    return EvalResult(max(math.fsum(terms), 0.0), err, n_used)


def _log_m_wright_integral(beta: float, tau: float) -> tuple[float, float]:
    """
    log M_beta(tau) from the angular integral behind Kanter's sampler,
        M_beta(tau) = tau^(beta/(1-beta)) / (pi (1-beta)) int_0^pi a(phi) exp(-a(phi) tau^(1/(1-beta))) dphi,
    with exp(-a(0) c) factored out. Returns (log value, relative error estimate).
    """
    b1 = 1.0 - beta
    logc = math.log(tau) / b1
    c = math.exp(logc)
    a0 = math.exp(_log_zolotarev_at_zero(beta))

    def integrand(phi: float) -> float:
        la = _log_zolotarev(beta, phi)
        if la + logc > 700.0:
            return 0.0
        return math.exp(la - c * (math.exp(la) - a0))

    points = None
    if a0 * c < 1.0:
        # peak of the integrand where a(phi) c = 1
        lo, hi = 1e-9, math.pi - 1e-9
        if _log_zolotarev(beta, hi) + logc > 0.0:
            points = [optimize.brentq(lambda p: _log_zolotarev(beta, p) + logc, lo, hi, xtol=1e-14)]
    value, err = integrate.quad(integrand, 0.0, math.pi, points=points, epsabs=0.0, epsrel=1e-11, limit=200)
    if not value > 0.0:
        raise ConvergenceError(f"M_beta angular integral vanished at tau={tau:g} (beta={beta:g})")
    log_value = beta / b1 * math.log(tau) - math.log(math.pi * b1) - c * a0 + math.log(value)
    return log_value, err / value


def m_wright(beta: float, tau: float) -> EvalResult:
    """
    M_beta(tau) on [0, T_beta]: the series sum_n (-tau)^n / (n! Gamma(1 - beta - beta n))
    near the origin, the angular integral representation beyond.
    """
    _check_mw_beta(beta)
    tau = float(tau)
    if tau < 0.0:
        raise DomainError("requires tau >= 0")
    if tau == 0.0:
        return EvalResult(1.0 / gamma(1.0 - beta), 0.0, 1)
    t_max = m_wright_range(beta)
    if tau > t_max:
        raise ConvergenceError(f"M_beta unreliable for tau > T_beta = {t_max:.6g} (beta={beta:g})")

    if tau <= MW_SERIES_TAU:
        res = _m_wright_series(beta, tau)
        if res is not None:
            return res
    log_value, rel_err = _log_m_wright_integral(beta, tau)
    if rel_err > MW_QUAD_TOL:
        raise ConvergenceError(f"M_beta integral relative error {rel_err:.3g} above {MW_QUAD_TOL:g}")
    value = math.exp(log_value)
    return EvalResult(value, value * rel_err, 0)


def m_wright_series_mp(beta: float, tau: float) -> float:
    """M_beta(tau) from the series summed in mpmath with enough digits to absorb the cancellation."""
    _check_mw_beta(beta)
    tau = float(tau)
    if tau <= 0.0:
        return 1.0 / gamma(1.0 - beta)
    env, n_used = _series_extent(_mw_envelope(beta, math.log(tau)))
    peak = float(np.max(env[: n_used + 1]))
    dps = 22 + max(0, int(math.ceil(peak / math.log(10.0))))
    with mp.workdps(dps):
        b = mp.mpf(beta)
        t = mp.mpf(tau)
        total = mp.fsum((-t) ** k * mp.rgamma(1 - b - b * k) / mp.factorial(k) for k in range(n_used))
        return float(total)


class _LogMWrightTable:
    """Piecewise Chebyshev interpolant of log M_beta on [0, T_beta], panels split until the coefficients settle."""

    def __init__(self, beta: float):
        self.beta = beta
        self.t_max = m_wright_range(beta)
        edges = sorted({0.0, min(MW_SERIES_TAU, self.t_max), *np.linspace(0.0, self.t_max, TABLE_PANELS + 1)})
        todo = list(zip(edges[:-1], edges[1:]))[::-1]
        self.edges: list[float] = []
        self.coefs: list[np.ndarray] = []
        while todo:
            lo, hi = todo.pop()
            coef = chebyshev.chebinterpolate(self._sampler(lo, hi), TABLE_DEG)
            if np.max(np.abs(coef[-3:])) > TABLE_TOL * max(1.0, abs(coef[0])):
                if hi - lo < 1e-8 * self.t_max:
                    raise ConvergenceError(f"log M_beta table did not resolve [{lo:g}, {hi:g}] (beta={beta:g})")
                mid = 0.5 * (lo + hi)
                todo.extend([(mid, hi), (lo, mid)])
                continue
            self.edges.append(lo)
            self.coefs.append(coef)
        self.edges.append(self.t_max)
        logger.debug("M_beta table for beta=%g: %d panels on [0, %.6g]", beta, len(self.coefs), self.t_max)

    def _sampler(self, lo: float, hi: float) -> Callable[[np.ndarray], np.ndarray]:
        def sample(x: np.ndarray) -> np.ndarray:
            taus = lo + 0.5 * (x + 1.0) * (hi - lo)
            return np.array([math.log(m_wright(self.beta, float(t)).value) for t in taus])
        return sample

    def __call__(self, tau: float) -> float:
        if tau < 0.0 or tau > self.t_max:
            return 0.0
        i = min(bisect.bisect_right(self.edges, tau) - 1, len(self.coefs) - 1)
        lo, hi = self.edges[i], self.edges[i + 1]
        x = 2.0 * (tau - lo) / (hi - lo) - 1.0
        return math.exp(float(chebyshev.chebval(x, self.coefs[i])))


@lru_cache(maxsize=32)
def _m_wright_table(beta: float) -> _LogMWrightTable:
    return _LogMWrightTable(beta)


def m_wright_moment(beta: float, delta: float) -> float:
    """int_0^inf tau^delta M_beta(tau) dtau = Gamma(delta+1)/Gamma(beta delta+1)."""
    MLParams(beta)
    delta = float(delta)
    if beta == 1.0:
        return 1.0
    if delta <= -1.0:
        raise DivergenceError(f"moment of order delta={delta:g} diverges: requires delta > -1")
    value = gamma(delta + 1.0) / gamma(beta * delta + 1.0)
    if not math.isfinite(value):
        raise DivergenceError(f"moment of order delta={delta:g} is not finite")
    return value


def m_wright_tail_bound(beta: float, T: float, delta: float = 0.0) -> float:
    """Markov bound on int_T^inf tau^delta M_beta(tau) dtau: min over k of T^-k E[Y^(delta+k)]."""
    MLParams(beta)
    if T <= 0.0:
        raise DomainError("requires T > 0")
    if beta == 1.0:
        return 0.0 if T > 1.0 else 1.0
    if delta < 0.0:
        return T**delta * m_wright_tail_bound(beta, T, 0.0)
    k = np.arange(0, 2000, dtype=float)
    logb = gammaln(delta + k + 1.0) - gammaln(beta * (delta + k) + 1.0) - k * math.log(T)
    return float(np.exp(np.min(logb)))


def m_wright_cutoff(beta: float, tol: float = 1e-14, delta: float = 0.0) -> float:
    """Smallest tau (capped at T_beta) beyond which the delta-moment tail is below tol."""
    t_max = m_wright_range(beta)
    if m_wright_tail_bound(beta, t_max, delta) > tol:
        return t_max
    lo, hi = 1.0, t_max
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if m_wright_tail_bound(beta, mid, delta) > tol:
            lo = mid
        else:
            hi = mid
    return hi


def m_wright_expectation(
    beta: float,
    fn: Callable[[float], float],
    *,
    delta: float = 0.0,
    bound: float = 1.0,
    epsabs: float = 1e-12,
    epsrel: float = 1e-10,
    points: tuple = (),
) -> tuple[float, float]:
    """int_0^inf tau^delta fn(tau) M_beta(tau) dtau on [0, cutoff] plus the certified tail (|fn| <= bound there)."""
    if beta == 1.0:
        return float(fn(1.0)), 0.0
    cutoff = m_wright_cutoff(beta, tol=1e-15, delta=max(delta, 0.0))
    tail = bound * m_wright_tail_bound(beta, cutoff, delta)
    table = _m_wright_table(float(beta))

    def weighted(tau: float) -> float:
        return fn(tau) * table(tau)

    inner = [p for p in points if 0.0 < p < cutoff] or None
    if delta == 0.0:
        value, err = integrate.quad(
            weighted, 0.0, cutoff, points=inner, epsabs=epsabs, epsrel=epsrel, limit=200,
        )
    elif delta > -1.0:
        # algebraic weight tau**delta handled exactly by QUADPACK's qawse
        value, err = integrate.quad(
            weighted, 0.0, cutoff, weight="alg", wvar=(delta, 0.0),
            epsabs=epsabs, epsrel=epsrel, limit=200,
        )
    else:
        # tau**delta is not integrable at 0 and fn must kill it: integrate in s = log tau
        def in_log(s: float) -> float:
            tau = math.exp(s)
            w = weighted(tau) if tau > 0.0 else 0.0
            if w == 0.0:
                return 0.0
            return math.copysign(math.exp((delta + 1.0) * s + math.log(abs(w))), w)

        edges = [-np.inf, *sorted(math.log(p) for p in inner or ()), math.log(cutoff)]
        value = err = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            part, part_err = integrate.quad(in_log, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=200)
            value += part
            err += part_err
    return value, err + tail
