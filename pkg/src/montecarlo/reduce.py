from __future__ import annotations

import math

import numpy as np


def pairwise_sum(values) -> float:
    """Tree reduction with a fixed shape: the result depends only on the order of `values`."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        return 0.0
    while v.size > 1:
        if v.size % 2:
            v = np.append(v, 0.0)
        half = v.size // 2
        v = v[:half] + v[half:]
    return float(v[0])


def mean_and_std_error(values) -> tuple[float, float]:
    """Sample mean and sample-std / sqrt(n), both through pairwise_sum."""
    v = np.asarray(values, dtype=float).ravel()
    n = v.size
    if n == 0:
        raise ValueError("no samples")
    mean = pairwise_sum(v) / n
    if n == 1:
        return mean, 0.0
    var = pairwise_sum(np.square(v - mean)) / (n - 1)
    return mean, math.sqrt(var / n)
