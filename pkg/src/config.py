from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import DomainError
from .montecarlo.perpetual import PerpetualSpec
from .process.params import ModelParams
from .sampling.streams import SeedSpec

SEED_ENVVAR = "GGBM_DEFAULT_SEED"
DEFAULT_SEED = 0
DEFAULT_PATHS = 100_000
DEFAULT_T_MAX = 50.0
DEFAULT_STEPS = 1024
GREEN_COMMANDS = ("estimate-potential", "verify:green", "eval:green-constant")


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs, validated before dispatch."""

    subcommand: str
    beta: float = 0.5
    alpha: float = 1.5
    dim: int = 3
    seed: int = DEFAULT_SEED
    n_paths: int = DEFAULT_PATHS
    t_max: float = DEFAULT_T_MAX
    steps: int = DEFAULT_STEPS
    out: Optional[Path] = None
    fmt: str = "json"
    threads: int = 1

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.beta, self.alpha, self.dim)

    @property
    def seed_spec(self) -> SeedSpec:
        return SeedSpec(self.seed)

    @property
    def needs_green(self) -> bool:
        return self.subcommand in GREEN_COMMANDS

    def perpetual_spec(self) -> PerpetualSpec:
        return PerpetualSpec(t_max=self.t_max, n_paths=self.n_paths, seed=self.seed_spec)

    def validate(self) -> ModelParams:
        """ModelParams for this run; DomainError names the failed inequality."""
        params = self.params
        SeedSpec(self.seed)
        if self.n_paths < 1:
            raise DomainError("requires paths >= 1")
        if self.threads < 1:
            raise DomainError("requires threads >= 1")
        if self.steps < 1:
            raise DomainError("requires steps >= 1")
        if not self.t_max > 0.0:
            raise DomainError("requires t_max > 0")
        if self.needs_green:
            reason = params.green_violation()
            if reason is not None:
                raise DomainError(reason)
        return params
