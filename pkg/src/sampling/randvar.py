from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

TINY = float(np.finfo(float).tiny)


@dataclass(frozen=True)
class YBetaSample:
    value: float
    beta: float


def draw_one_sided_stable(beta: float, rng: np.random.Generator, size=None) -> np.ndarray:
    """
    One-sided beta-stable S > 0 with E[exp(-s S)] = exp(-s^beta), by Kanter's
    representation (the Chambers-Mallows-Stuck construction at full skewness):
        S = sin(beta U) / sin(U)^(1/beta) * (sin((1-beta) U) / E)^((1-beta)/beta)
    with U ~ Uniform(0, pi) and E ~ Exp(1) independent.
    """
    if not 0.0 < beta < 1.0:
        raise DomainError("requires 0 < beta < 1")
    u = np.pi * (1.0 - rng.random(size))  # (0, pi]
    e = np.maximum(rng.standard_exponential(size), TINY)
    s = (
        np.sin(beta * u) / np.sin(u) ** (1.0 / beta)
        * (np.sin((1.0 - beta) * u) / e) ** ((1.0 - beta) / beta)
    )
    return s


def sample_one_sided_stable(beta: float, rng: np.random.Generator) -> float:
    return float(draw_one_sided_stable(beta, rng))


def draw_y_beta(beta: float, rng: np.random.Generator, size=None) -> np.ndarray:
    """Y_beta = S^(-beta) with density M_beta; Y_1 is identically 1."""
    if not 0.0 < beta <= 1.0:
        raise DomainError("requires 0 < beta <= 1")
    if beta == 1.0:
        return np.ones(size) if size is not None else np.float64(1.0)
    y = draw_one_sided_stable(beta, rng, size) ** (-beta)
    return np.maximum(y, TINY)


def sample_y_beta(beta: float, rng: np.random.Generator) -> YBetaSample:
    return YBetaSample(value=float(draw_y_beta(beta, rng)), beta=beta)
