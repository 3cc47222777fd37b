from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


def trapezoid_weights(nodes: np.ndarray) -> np.ndarray:
    h = np.diff(nodes)
    w = np.zeros_like(nodes)
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w


@dataclass(frozen=True)
class TimeGrid:
    """Nodes 0, a q^K, ..., a, then uniform steps to t_max; trapezoid weights on all and on every other node."""

    nodes: np.ndarray
    weights: np.ndarray
    coarse_weights: np.ndarray

    @property
    def t_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def positive(self) -> np.ndarray:
        return self.nodes[1:]

    def __len__(self) -> int:
        return self.nodes.size


def build_time_grid(t_max: float, step: float = 0.25, n_geometric: int = 24, ratio: float = 0.8) -> TimeGrid:
    if not t_max > 0.0:
        raise DomainError("requires t_max > 0")
    if not step > 0.0:
        raise DomainError("requires step > 0")
    if not 0.0 < ratio < 1.0:
        raise DomainError("requires 0 < ratio < 1")
    if n_geometric < 0:
        raise DomainError("requires n_geometric >= 0")
    a = min(1.0, t_max)
    geometric = a * ratio ** np.arange(n_geometric, -1, -1, dtype=float)
    n_uniform = math.ceil((t_max - a) / step) if t_max > a else 0
    uniform = np.linspace(a, t_max, n_uniform + 1)[1:]
    nodes = np.concatenate([[0.0], geometric, uniform])

    keep = np.arange(0, nodes.size, 2)
    if keep[-1] != nodes.size - 1:
        keep = np.append(keep, nodes.size - 1)
    coarse = np.zeros_like(nodes)
    coarse[keep] = trapezoid_weights(nodes[keep])
    return TimeGrid(nodes=nodes, weights=trapezoid_weights(nodes), coarse_weights=coarse)
