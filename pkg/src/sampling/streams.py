from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SeedSpec:
    """(master_seed, stream_index); the stream is Philox keyed by SeedSequence(master_seed, spawn_key=(stream_index,))."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= int(self.master_seed) <= MAX_SEED:
            raise DomainError("requires 0 <= seed < 2**64")
        if int(self.stream_index) < 0:
            raise DomainError("requires stream_index >= 0")

    def stream(self) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_index),))
        return np.random.Generator(np.random.Philox(seq))

    def child(self, stream_index: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, stream_index)

    def as_dict(self) -> dict:
        return {"master_seed": int(self.master_seed), "stream_index": int(self.stream_index)}
