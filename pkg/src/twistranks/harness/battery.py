"""Matched prime tuples and the invariance of r_2 under matching."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from math import prod

import numpy as np

from ..arith.selmer import selmer_rank_descent, selmer_rank_monsky
from ..arith.sieve import SquarefreeInt, primes_up_to
from ..arith.symbols import legendre
from .reports import SweepConfig

__all__ = ["BatteryResult", "SearchExhaustedError", "matched_tuple", "is_matched",
           "monsky_invariance_battery"]

BATTERY_HEADER = ("d", "e", "r2_d", "r2_e")


class SearchExhaustedError(RuntimeError):
    pass


@dataclass
class BatteryResult:
    pairs: int
    mismatches: int
    counterexamples: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    runtime_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.mismatches == 0 and self.pairs > 0


def is_matched(ps, qs) -> bool:
    """p_i = q_i mod 8 and (p_j/p_i) = (q_j/q_i) for all i != j."""
    if len(ps) != len(qs):
        return False
    if any(p % 8 != q % 8 for p, q in zip(ps, qs)):
        return False
    r = len(ps)
    for i in range(r):
        for j in range(r):
            if i != j and legendre(ps[j], ps[i]) != legendre(qs[j], qs[i]):
                return False
    return True


def matched_tuple(r: int, primes: np.ndarray, rng, tries: int = 20000):
    """Random distinct odd primes p_1..p_r and a matched q_1..q_r."""
    odd = primes[primes > 2]
    by_class = {c: odd[odd % 8 == c] for c in (1, 3, 5, 7)}
    for _ in range(100):
        ps = [int(x) for x in rng.choice(odd, size=r, replace=False)]
        qs = []
        for i, p in enumerate(ps):
            pool = by_class[p % 8]
            for _ in range(tries):
                q = int(pool[rng.integers(len(pool))])
                if q in qs:
                    continue
                if all(legendre(qs[j], q) == legendre(ps[j], p)
                       and legendre(q, qs[j]) == legendre(p, ps[j]) for j in range(i)):
                    qs.append(q)
                    break
            else:
                break
        if len(qs) == r:
            return tuple(ps), tuple(qs)
    raise SearchExhaustedError(f"no matched tuple with r = {r} found")


def _r2(primes, method: str) -> int:
    d = SquarefreeInt(prod(primes), tuple(sorted(primes)))
    if method == "monsky":
        return selmer_rank_monsky(d).r2
    return selmer_rank_descent(d).r2


def monsky_invariance_battery(config: SweepConfig) -> BatteryResult:
    if config.kind != "monsky-invariance":
        raise ValueError("the battery needs kind = monsky-invariance")
    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    primes = primes_up_to(config.prime_bound)
    result = BatteryResult(0, 0)
    for _ in range(config.pairs):
        r = int(rng.integers(1, config.max_primes + 1))
        ps, qs = matched_tuple(r, primes, rng)
        a, b = _r2(ps, config.method), _r2(qs, config.method)
        d, e = prod(ps), prod(qs)
        result.rows.append((d, e, a, b))
        result.pairs += 1
        if a != b:
            result.mismatches += 1
            result.counterexamples.append({"p": ps, "q": qs, "r2_d": a, "r2_e": b})
    result.runtime_seconds = time.perf_counter() - t0
    path = config.cache / f"monsky_battery_seed{config.seed}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BATTERY_HEADER)
        w.writerows(result.rows)
    return result
