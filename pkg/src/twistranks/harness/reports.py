"""Sweep configuration and distribution reports."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["SweepConfig", "DistributionReport", "tv_distance", "default_cache_dir",
           "CACHE_ENV"]

CACHE_ENV = "TWISTRANKS_CACHE"
KINDS = ("selmer", "class", "monsky-invariance", "jutila")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "twistranks"


@dataclass(frozen=True)
class SweepConfig:
    kind: str
    H: int
    seed: int = 0
    workers: int = 1
    cache_dir: str = None
    filter: str = "odd,positive"
    threshold: float = 0.02
    cond_threshold: float = 0.05   # class sweep: r_8 given r_4 = 1
    shard_size: int = 1 << 20
    pairs: int = 200               # monsky battery
    max_primes: int = 3
    prime_bound: int = 10 ** 5
    method: str = "descent"        # monsky battery rank method

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        if self.H < 1:
            raise ValueError("H must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.method not in ("descent", "monsky"):
            raise ValueError("method is descent or monsky")

    @property
    def cache(self) -> Path:
        return Path(self.cache_dir) if self.cache_dir else default_cache_dir()


def tv_distance(observed: dict, predicted: dict) -> float:
    keys = set(observed) | set(predicted)
    return 0.5 * sum(abs(observed.get(k, 0.0) - predicted.get(k, 0.0)) for k in keys)


def _normalize(counts: dict) -> dict:
    total = sum(counts.values())
    return {k: counts[k] / total for k in sorted(counts)} if total else {}


@dataclass
class DistributionReport:
    kind: str
    H: int
    count: int
    observed: dict
    predicted: dict
    threshold: float
    seed: int
    runtime_seconds: float = 0.0
    counts: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_counts(cls, kind, H, counts, predicted, threshold, seed, **kw):
        counts = {int(k): int(v) for k, v in sorted(counts.items())}
        return cls(kind, H, sum(counts.values()), _normalize(counts),
                   {int(k): float(v) for k, v in sorted(predicted.items())},
                   threshold, seed, counts=counts, **kw)

    @property
    def tv_distance(self) -> float:
        return tv_distance(self.observed, self.predicted)

    @property
    def deviations(self) -> dict:
        keys = sorted(set(self.observed) | set(self.predicted))
        return {k: self.observed.get(k, 0.0) - self.predicted.get(k, 0.0) for k in keys}

    @property
    def passed(self) -> bool:
        ok = self.tv_distance <= self.threshold
        for sub in self.extra.values():
            if isinstance(sub, dict) and "pass" in sub:
                ok = ok and sub["pass"]
        return ok

    def to_dict(self, runtime: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "H": self.H,
            "count": self.count,
            "observed": {str(k): v for k, v in self.observed.items()},
            "predicted": {str(k): v for k, v in self.predicted.items()},
            "tv_distance": self.tv_distance,
            "threshold": self.threshold,
            "pass": self.passed,
            "seed": self.seed,
        }
        if runtime:
            out["runtime_seconds"] = round(self.runtime_seconds, 3)
        out.update(self.extra)
        return out

    def to_json(self, runtime: bool = True) -> str:
        return json.dumps(self.to_dict(runtime), indent=2, sort_keys=False)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{self.kind} H={self.H} n={self.count} tv={self.tv_distance:.5f} "
                f"threshold={self.threshold} {verdict}")
