# src/pipeline/report.py
from __future__ import annotations
import json
import math
from pathlib import Path
from typing import Iterable, Optional

from .digest import sha256_bytes


def _finite(value):
    """JSON has no inf/nan; non-finite floats become strings."""
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def check_entry(name: str, anchor: str, expected, observed, tolerance: float, passed: bool) -> dict:
    return {
        "name": name,
        "paper_anchor": anchor,
        "expected": expected,
        "observed": observed,
        "tolerance": tolerance,
        "pass": bool(passed),
    }


def build_report(suite: str, checks: Iterable[dict], extra: Optional[dict] = None) -> bytes:
    """Sorted, compact JSON: byte-identical for identical inputs."""
    checks = list(checks)
    data = {
        "suite": suite,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    if extra:
        data.update(extra)
    return dump_json(data)


def dump_json(data: dict) -> bytes:
    return json.dumps(_finite(data), sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def parse_report(b: bytes) -> dict:
    return json.loads(b.decode("utf-8"))


def write_report(data: bytes, out: Optional[Path]) -> Optional[str]:
    """Write to `out` (or return None if no path) and return its digest."""
    if out is None:
        return None
    out.write_bytes(data + b"\n")
    return sha256_bytes(data + b"\n")
