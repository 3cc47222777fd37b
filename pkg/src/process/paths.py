from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from pathlib import Path as FilePath
from typing import Optional

import numpy as np

from ..errors import DomainError
from ..sampling.streams import SeedSpec


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid t_k = k * t_max / n_steps, k = 0..n_steps."""

    t_max: float
    n_steps: int

    def __post_init__(self) -> None:
        if not self.t_max > 0.0:
            raise DomainError("requires t_max > 0")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise DomainError("requires n_steps >= 1")

    @property
    def dt(self) -> float:
        return self.t_max / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt

    def scaled(self, factor: float) -> "GridSpec":
        return replace(self, t_max=self.t_max * factor)


@dataclass(frozen=True)
class Path:
    grid: GridSpec
    values: np.ndarray  # (n_steps + 1, d), values[0] == 0
    hurst: float
    seed: Optional[SeedSpec] = None

    @property
    def d(self) -> int:
        return int(self.values.shape[1])

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def path_to_csv(path: Path) -> str:
    """CSV text: header t,x1,...,xd then one row per grid point, 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"x{i + 1}" for i in range(path.d)])
    for t, row in zip(path.times, path.values):
        w.writerow([_fmt(t)] + [_fmt(v) for v in row])
    return buf.getvalue()


def write_path_csv(path: Path, out: FilePath) -> None:
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(path_to_csv(path), encoding="utf-8")


def read_path_csv(src: FilePath) -> tuple[np.ndarray, np.ndarray]:
    """(times, values) from a path CSV."""
    with src.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    return data[:, 0], data[:, 1:]
