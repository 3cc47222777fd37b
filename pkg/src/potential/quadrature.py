from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.special import roots_jacobi

from ..errors import DomainError


@dataclass(frozen=True)
class RadialPotentialSpec:
    """Quadrature for int f(x+y) |y|^{2/alpha-d} dy; radius None picks R from the L1 tail of f."""

    radius: Optional[float] = None
    n_polar: int = 24
    epsabs: float = 1e-11
    epsrel: float = 1e-10
    limit: int = 200
    tail_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.radius is not None and not self.radius > 0.0:
            raise DomainError("requires radius > 0")
        if self.n_polar < 2:
            raise DomainError("requires n_polar >= 2")


def sphere_area(d: int) -> float:
    """Area of the unit sphere S^{d-1} in R^d (2 for d = 1)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@lru_cache(maxsize=32)
def sphere_rule(d: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid in the azimuth times Gauss-Jacobi in each polar cosine; weights sum to the sphere area."""
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        phi = 2.0 * np.pi * np.arange(2 * n) / (2 * n)
        pts = np.column_stack([np.cos(phi), np.sin(phi)])
        return pts, np.full(2 * n, 2.0 * np.pi / (2 * n))
    a = (d - 3) / 2.0
    t, wt = roots_jacobi(n, a, a)
    lower_pts, lower_w = sphere_rule(d - 1, n)
    pts = np.concatenate(
        [np.column_stack([np.full(len(lower_pts), ti), math.sqrt(1.0 - ti * ti) * lower_pts]) for ti in t]
    )
    weights = np.concatenate([wi * lower_w for wi in wt])
    return pts, weights

