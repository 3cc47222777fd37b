from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.special import gammaincc

from ..errors import DomainError
from .quadrature import sphere_area


@dataclass(frozen=True)
class TestFunction:
    """f on R^d with its sup norm, L1 norm and L1 tail outside balls about `center`; `profile` set when f is radial."""

    __test__ = False  # not a pytest class

    eval: Callable[[np.ndarray], np.ndarray]
    sup_norm: float
    l1_norm: float
    kind: str
    d: int
    center: np.ndarray
    params: dict = field(default_factory=dict)
    profile: Optional[Callable[[np.ndarray], np.ndarray]] = None
    tail: Optional[Callable[[float], float]] = None
    support_radius: Optional[float] = None
    continuous: bool = True

    def __call__(self, pts) -> np.ndarray:
        return self.eval(np.asarray(pts, dtype=float))

    @property
    def cl_norm(self) -> float:
        return self.sup_norm + self.l1_norm

    def tail_l1(self, radius: float) -> float:
        """Bound on int_{|y - center| > radius} |f(y)| dy."""
        if radius <= 0.0 or self.tail is None:
            return self.l1_norm
        return self.tail(radius)

    def shifted(self, h) -> "TestFunction":
        """y -> f(y + h)."""
        h = np.asarray(h, dtype=float)
        base = self.eval
        return TestFunction(
            eval=lambda pts: base(pts + h),
            sup_norm=self.sup_norm,
            l1_norm=self.l1_norm,
            kind=self.kind,
            d=self.d,
            center=self.center - h,
            params=self.params,
            profile=self.profile,
            tail=self.tail,
            support_radius=self.support_radius,
            continuous=self.continuous,
        )

    def descriptor(self) -> dict:
        return {"kind": self.kind, "center": [float(c) for c in self.center], **self.params}


def _center(d: int, center) -> np.ndarray:
    if d < 1:
        raise DomainError("requires dim >= 1")
    if center is None:
        return np.zeros(d)
    c = np.asarray(center, dtype=float).reshape(-1)
    if c.shape != (d,):
        raise DomainError(f"requires a center in R^{d}")
    return c


def _radial(profile: Callable[[np.ndarray], np.ndarray], center: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    def fn(pts: np.ndarray) -> np.ndarray:
        return profile(np.linalg.norm(pts - center, axis=-1))
    return fn


def gaussian(d: int, sigma: float = 1.0, center=None, amplitude: float = 1.0) -> TestFunction:
    """amplitude * exp(-|y - center|^2 / (2 sigma^2)); sigma = 1, amplitude = 1 is the unit Gaussian."""
    if not sigma > 0.0:
        raise DomainError("requires sigma > 0")
    c = _center(d, center)
    mass = abs(amplitude) * (2.0 * math.pi * sigma * sigma) ** (d / 2.0)

    def profile(r):
        return amplitude * np.exp(-0.5 * np.square(r) / (sigma * sigma))

    return TestFunction(
        eval=_radial(profile, c),
        sup_norm=abs(amplitude),
        l1_norm=mass,
        kind="gaussian",
        d=d,
        center=c,
        params={"sigma": sigma, "amplitude": amplitude},
        profile=profile,
        tail=lambda R: mass * float(gammaincc(d / 2.0, 0.5 * R * R / (sigma * sigma))),
    )


def _bump_profile(radius: float, amplitude: float):
    def profile(r):
        s2 = np.square(np.asarray(r, dtype=float) / radius)
        inside = s2 < 1.0
        gap = np.where(inside, 1.0 - s2, 1.0)
        return np.where(inside, amplitude * np.exp(1.0 - 1.0 / gap), 0.0)
    return profile


def bump(d: int, radius: float = 1.0, center=None, amplitude: float = 1.0) -> TestFunction:
    """Smooth bump amplitude * exp(1 - 1/(1 - |y-c|^2/radius^2)) supported in the closed ball."""
    if not radius > 0.0:
        raise DomainError("requires radius > 0")
    c = _center(d, center)
    profile = _bump_profile(radius, amplitude)
    shell, _ = integrate.quad(lambda s: s ** (d - 1) * math.exp(1.0 - 1.0 / (1.0 - s * s)), 0.0, 1.0)
    mass = abs(amplitude) * sphere_area(d) * radius**d * shell
    return TestFunction(
        eval=_radial(profile, c),
        sup_norm=abs(amplitude),
        l1_norm=mass,
        kind="bump",
        d=d,
        center=c,
        params={"radius": radius, "amplitude": amplitude},
        profile=profile,
        tail=lambda R: 0.0 if R >= radius else mass,
        support_radius=radius,
    )


def indicator_ball(d: int, radius: float = 1.0, center=None) -> TestFunction:
    """1 on the closed ball; bounded and integrable but not continuous."""
    if not radius > 0.0:
        raise DomainError("requires radius > 0")
    c = _center(d, center)
    volume = sphere_area(d) * radius**d / d

    def profile(r):
        return (np.asarray(r) <= radius).astype(float)

    return TestFunction(
        eval=_radial(profile, c),
        sup_norm=1.0,
        l1_norm=volume,
        kind="indicator_ball",
        d=d,
        center=c,
        params={"radius": radius},
        profile=profile,
        tail=lambda R: 0.0 if R >= radius else volume,
        support_radius=radius,
        continuous=False,
    )


def custom(
    d: int,
    fn: Callable[[np.ndarray], np.ndarray],
    sup_norm: float,
    l1_norm: float,
    *,
    center=None,
    tail: Optional[Callable[[float], float]] = None,
    support_radius: Optional[float] = None,
    name: str = "custom",
) -> TestFunction:
    if sup_norm < 0.0 or l1_norm < 0.0:
        raise DomainError("requires nonnegative norms")
    return TestFunction(
        eval=fn,
        sup_norm=sup_norm,
        l1_norm=l1_norm,
        kind="custom",
        d=d,
        center=_center(d, center),
        params={"name": name},
        tail=tail,
        support_radius=support_radius,
    )
