from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError

MAX_FDD_POINTS = 8


@dataclass(frozen=True)
class ModelParams:
    """The triple (beta, alpha, d) of a ggBm in R^d."""

    beta: float
    alpha: float
    d: int

    def __post_init__(self) -> None:
        if not 0.0 < self.beta <= 1.0:
            raise DomainError("requires 0 < beta <= 1")
        if not 0.0 < self.alpha <= 2.0:
            raise DomainError("requires 0 < alpha <= 2")
        if int(self.d) != self.d or self.d < 1:
            raise DomainError("requires integer dim >= 1")

    @property
    def hurst(self) -> float:
        return self.alpha / 2.0

    @property
    def is_brownian(self) -> bool:
        return self.beta == 1.0 and self.alpha == 1.0

    def green_violation(self) -> Optional[str]:
        """The first failed hypothesis of the Green measure theorem, or None."""
        if self.d * self.alpha <= 2.0:
            return "requires d*alpha > 2"
        if self.is_brownian:
            return None
        if self.alpha <= 1.0:
            return "requires alpha > 1"
        return None

    @property
    def green_exists(self) -> bool:
        return self.green_violation() is None

    def as_dict(self) -> dict:
        return {"beta": self.beta, "alpha": self.alpha, "dim": self.d}


@dataclass(frozen=True)
class GammaAlphaMatrix:
    times: np.ndarray
    entries: np.ndarray

    @classmethod
    def from_times(cls, times, alpha: float) -> "GammaAlphaMatrix":
        t = np.asarray(times, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise DomainError("requires a nonempty 1-D array of times")
        if np.any(t < 0.0) or np.any(np.diff(t) <= 0.0):
            raise DomainError("requires 0 <= t_1 < ... < t_n")
        ta = t**alpha
        entries = ta[:, None] + ta[None, :] - np.abs(t[:, None] - t[None, :]) ** alpha
        return cls(times=t, entries=entries)

    @property
    def n(self) -> int:
        return int(self.times.size)

    @property
    def covariance(self) -> np.ndarray:
        # per-component covariance of the fBm factor
        return 0.5 * self.entries
