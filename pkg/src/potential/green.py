from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from ..errors import DomainError, QuadratureError, SingularityError
from ..process.params import ModelParams
from ..special.constants import green_constant, time_kernel_constant
from .quadrature import RadialPotentialSpec, sphere_area, sphere_rule
from .testfunctions import TestFunction

logger = logging.getLogger(__name__)

QUAD_FAIL_TOL = 1e-6
MAX_RADIUS = 1e8
LOG_OVERFLOW = 700.0


@dataclass(frozen=True)
class GreenDensity:
    """G(x, dy) = D |x - y|^{-exponent} dy with exponent = d - 2/alpha."""

    params: ModelParams
    D: float
    exponent: float

    @property
    def d(self) -> int:
        return self.params.d


def green_density(params: ModelParams) -> GreenDensity:
    D = green_constant(params)
    exponent = params.d - 2.0 / params.alpha
    if not 0.0 < exponent < params.d:
        raise DomainError("requires 0 < d - 2/alpha < d")
    return GreenDensity(params=params, D=D, exponent=exponent)


def _point(gd: GreenDensity, x, name: str = "x") -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.shape != (gd.d,):
        raise DomainError(f"requires {name} in R^{gd.d}")
    return p


def green_density_at(gd: GreenDensity, x, y) -> float:
    r = float(np.linalg.norm(_point(gd, x) - _point(gd, y, "y")))
    if r == 0.0:
        raise SingularityError("green density is singular at x = y")
    return gd.D * r ** (-gd.exponent)


# -------------------------------
# t-integral identity
# -------------------------------

def time_integral_kernel(alpha: float, d: int, tau: float, r: float) -> float:
    """int_0^inf (2 pi t^alpha tau)^{-d/2} exp(-r^2 / (2 t^alpha tau)) dt = C(alpha, d) tau^{-1/alpha} r^{2/alpha - d}."""
    if not (tau > 0.0 and r > 0.0):
        raise DomainError("requires tau > 0 and r > 0")
    return time_kernel_constant(alpha, d) * tau ** (-1.0 / alpha) * r ** (2.0 / alpha - d)


def time_integral_numeric(alpha: float, d: int, tau: float, r: float, epsrel: float = 1e-12) -> float:
    """The same t-integral by adaptive quadrature in s = log t, split at the integrand's peak."""
    if not (tau > 0.0 and r > 0.0):
        raise DomainError("requires tau > 0 and r > 0")
    if d * alpha <= 2.0:
        raise DomainError("requires d*alpha > 2")
    c = r * r / (2.0 * tau)
    log_pref = -0.5 * d * math.log(2.0 * math.pi * tau)
    slope = 0.5 * d * alpha - 1.0
    log_c = math.log(c)

    def integrand(s: float) -> float:
        # c exp(-alpha s) past e**700 leaves nothing of the integrand
        if log_c - alpha * s > LOG_OVERFLOW:
            return 0.0
        return math.exp(log_pref - slope * s - math.exp(log_c - alpha * s))

    s0 = log_c / alpha
    total = 0.0
    for lo, hi in ((-np.inf, s0), (s0, np.inf)):
        value, err = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=epsrel, limit=200)
        if err > QUAD_FAIL_TOL * max(abs(value), 1e-300):
            raise QuadratureError(f"t-integral error estimate {err:.3g} too large")
        total += value
    return total


# -------------------------------
# Potentials
# -------------------------------

def continuity_constant(gd: GreenDensity) -> float:
    """K with |V(f, x)| <= K (||f||_inf + ||f||_1): unit ball by the sup norm, exterior by the L1 norm."""
    alpha = gd.params.alpha
    return gd.D * max(sphere_area(gd.d) * alpha / 2.0, 1.0)


@dataclass(frozen=True)
class PotentialValue:
    value: float
    est_abs_error: float
    tail_bound: float
    radius: float
    continuity_constant: float
    method: str

    def __float__(self) -> float:
        return self.value

    def continuity_bound(self, f: TestFunction) -> float:
        return self.continuity_constant * f.cl_norm


def _truncation(gd: GreenDensity, f: TestFunction, rho: float, spec: RadialPotentialSpec) -> tuple[float, float]:
    def bound(R: float) -> float:
        return gd.D * R ** (-gd.exponent) * f.tail_l1(R - rho)

    if spec.radius is not None:
        return spec.radius, bound(spec.radius)
    if f.support_radius is not None:
        R = rho + f.support_radius
        return R, bound(R)
    R = max(1.0, rho + 1.0)
    while bound(R) > spec.tail_tol and R < MAX_RADIUS:
        R *= 2.0
    tb = bound(R)
    if tb > spec.tail_tol:
        logger.warning("potential tail bound %.3g above %.3g at R=%.3g", tb, spec.tail_tol, R)
    return R, tb


def _check_quad(value, err, what: str) -> None:
    scale = max(1.0, float(np.max(np.abs(value))))
    if float(np.max(err)) > QUAD_FAIL_TOL * scale:
        raise QuadratureError(f"{what} error estimate {float(np.max(err)):.3g} too large")


def potential(gd: GreenDensity, f: TestFunction, x, quad: Optional[RadialPotentialSpec] = None) -> PotentialValue:
    """V(f, x) = D int f(x + y) |y|^{2/alpha - d} dy over |y| <= R; with u = |y|^{2/alpha} the kernel is alpha/2."""
    quad = quad or RadialPotentialSpec()
    if f.d != gd.d:
        raise DomainError(f"requires a test function on R^{gd.d}")
    if not math.isfinite(f.sup_norm):
        raise DomainError("requires a bounded test function")
    x = _point(gd, x)
    alpha = gd.params.alpha
    half = 0.5 * alpha
    offset = f.center - x
    rho = float(np.linalg.norm(offset))
    R, tail = _truncation(gd, f, rho, quad)
    U = R ** (2.0 / alpha)
    breaks = [b ** (2.0 / alpha) for b in _radial_breaks(f, rho) if 0.0 < b < R]
    K = continuity_constant(gd)

    if f.profile is not None and rho == 0.0:
        profile = f.profile
        value, err = integrate.quad(
            lambda u: float(profile(u**half)),
            0.0,
            U,
            points=breaks or None,
            epsabs=quad.epsabs,
            epsrel=quad.epsrel,
            limit=quad.limit,
        )
        _check_quad(value, err, "radial potential")
        scale = gd.D * sphere_area(gd.d) * half
        logger.debug("radial potential R=%.3g value=%.12g", R, scale * value)
        return PotentialValue(scale * value, scale * err, tail, R, K, "radial")

    if f.profile is not None:
        return _axisymmetric(gd, f, rho, quad, K)

    pts, w = sphere_rule(gd.d, quad.n_polar)
    feval = f.eval

    def shell(u: float) -> np.ndarray:
        return np.asarray(feval(x + u**half * pts), dtype=float)

    values, err = integrate.quad_vec(
        shell,
        0.0,
        U,
        epsabs=quad.epsabs,
        epsrel=quad.epsrel,
        limit=quad.limit,
        points=breaks or None,
    )
    scale = gd.D * half
    value = scale * float(w @ values)
    abs_err = scale * float(err) * float(np.sum(w))
    _check_quad(value, abs_err, "spherical potential")
    logger.debug("spherical potential R=%.3g nodes=%d value=%.12g", R, len(w), value)
    return PotentialValue(value, abs_err, tail, R, K, "spherical")


def _radial_breaks(f: TestFunction, rho: float) -> list[float]:
    out = [rho]
    if f.support_radius is not None:
        out += [rho - f.support_radius, rho + f.support_radius]
    return sorted({b for b in out if b > 0.0})


def _kernel_shell_mean(d: int, a: float, s: float, rho: float) -> float:
    """int_{S^{d-1}} |s w - rho e|^{-a} dw for a unit vector e."""
    if d == 1:
        return abs(s - rho) ** (-a) + (s + rho) ** (-a)

    def integrand(theta: float) -> float:
        base = (s - rho) ** 2 + 4.0 * s * rho * math.sin(0.5 * theta) ** 2
        return base ** (-0.5 * a) * math.sin(theta) ** (d - 2)

    value, _ = integrate.quad(integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-11, limit=200)
    return sphere_area(d - 1) * value


def _axisymmetric(gd: GreenDensity, f: TestFunction, rho: float, quad: RadialPotentialSpec, K: float) -> PotentialValue:
    d, a = gd.d, gd.exponent
    profile = f.profile

    def bound(S: float) -> float:
        mass = f.tail_l1(S)
        if mass == 0.0:
            return 0.0
        if S <= rho:
            return math.inf
        return gd.D * (S - rho) ** (-a) * mass

    if quad.radius is not None:
        S = quad.radius
    elif f.support_radius is not None:
        S = f.support_radius
    else:
        S = rho + 1.0
        while bound(S) > quad.tail_tol and S < MAX_RADIUS:
            S = rho + 2.0 * (S - rho)
    tail = bound(S)
    if tail > quad.tail_tol:
        logger.warning("potential tail bound %.3g above %.3g at S=%.3g", tail, quad.tail_tol, S)

    breaks = sorted({b for b in (rho, f.support_radius) if b is not None and 0.0 < b < S})
    value, err = integrate.quad(
        lambda s: float(profile(s)) * s ** (d - 1) * _kernel_shell_mean(d, a, s, rho),
        0.0,
        S,
        points=breaks or None,
        epsabs=quad.epsabs,
        epsrel=quad.epsrel,
        limit=quad.limit,
    )
    _check_quad(value, err, "axisymmetric potential")
    logger.debug("axisymmetric potential rho=%.3g S=%.3g value=%.12g", rho, S, gd.D * value)
    return PotentialValue(gd.D * value, gd.D * err, tail, S, K, "axisymmetric")


# -------------------------------
# Green measure of a ball
# -------------------------------

def green_measure_of_ball(gd: GreenDensity, x, center, r: float) -> float:
    """
    G(x, B(center, r)): expected time the process started at x spends in the ball.

    At x = center this is D * |S^{d-1}| * r^{2/alpha} * alpha/2. Otherwise each
    ray from x meets the ball in a chord [s-, s+] whose radial integral is
    (alpha/2)(s+^{2/alpha} - s-^{2/alpha}), leaving a polar-angle quadrature.
    """
    if not r > 0.0:
        raise DomainError("requires r > 0")
    x = _point(gd, x)
    c = _point(gd, center, "center")
    alpha = gd.params.alpha
    p = 2.0 / alpha
    rho = float(np.linalg.norm(c - x))
    if rho == 0.0:
        return gd.D * sphere_area(gd.d) * r**p * alpha / 2.0

    def chord(theta: float) -> float:
        ct = math.cos(theta)
        disc = r * r - rho * rho * math.sin(theta) ** 2
        if disc <= 0.0:
            return 0.0
        root = math.sqrt(disc)
        upper = rho * ct + root
        if upper <= 0.0:
            return 0.0
        lower = max(rho * ct - root, 0.0)
        return 0.5 * alpha * (upper**p - lower**p)

    d = gd.d
    if d == 1:
        # the two rays are theta = 0 and theta = pi
        return gd.D * (chord(0.0) + chord(math.pi))

    theta_max = math.pi if rho < r else math.asin(min(1.0, r / rho))
    weight = sphere_area(d - 1)
    value, err = integrate.quad(
        lambda th: chord(th) * math.sin(th) ** (d - 2),
        0.0,
        theta_max,
        epsabs=1e-13,
        epsrel=1e-11,
        limit=200,
    )
    _check_quad(value, err, "ball measure")
    return gd.D * weight * value
