from __future__ import annotations

import math

from ..errors import DomainError
from ..process.params import ModelParams
from .specfun import gamma, m_wright_moment


def time_kernel_constant(alpha: float, d: int) -> float:
    """C(alpha, d) = (1/alpha) 2^(-1/alpha) pi^(-d/2) Gamma(d/2 - 1/alpha), for any alpha with d*alpha > 2."""
    if not 0.0 < alpha <= 2.0:
        raise DomainError("requires 0 < alpha <= 2")
    if int(d) != d or d < 1:
        raise DomainError("requires integer dim >= 1")
    if d * alpha <= 2.0:
        raise DomainError("requires d*alpha > 2")
    return (1.0 / alpha) * 2.0 ** (-1.0 / alpha) * math.pi ** (-d / 2.0) * gamma(d / 2.0 - 1.0 / alpha)


def green_constant(params: ModelParams) -> float:
    """D(beta, alpha, d) = C(alpha, d) * Gamma(1 - 1/alpha) / Gamma(1 - beta/alpha), the M-Wright moment of order -1/alpha."""
    reason = params.green_violation()
    if reason is not None:
        raise DomainError(reason)
    return time_kernel_constant(params.alpha, params.d) * m_wright_moment(params.beta, -1.0 / params.alpha)
