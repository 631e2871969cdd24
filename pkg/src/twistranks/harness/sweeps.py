"""Sharded, resumable sweeps over squarefree d.

The range 1..H is cut into fixed shards.  Workers compute shards and hand
rows back; the parent is the only writer.  It stores each finished shard
as a CSV (so an interrupted sweep resumes where it stopped) and finally
concatenates the shards, which are already in increasing d, into one CSV.
"""

from __future__ import annotations

import io
import time
from collections import Counter
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from .. import ffstats
from ..arith.classgroup import redei_rank4
from ..arith.fastclass import class_data, smallest_prime_factors
from ..arith.fastselmer import monsky_r2_segment
from ..arith.sieve import count_squarefree, sieve_segment
from .gates import require_gate
from .reports import DistributionReport, SweepConfig, tv_distance

__all__ = [
    "selmer_sweep",
    "class_sweep",
    "predicted_selmer",
    "predicted_class",
    "SELMER_HEADER",
    "CLASS_HEADER",
]

SELMER_HEADER = ("d", "r2")
CLASS_HEADER = ("d", "disc", "h", "r2", "r4", "r8")
JMAX = 20


def predicted_selmer() -> dict:
    masses, _, _, _ = ffstats.p_alt_limit_distribution(JMAX)
    return {j: m for j, m in enumerate(masses) if m > 0}


def predicted_class() -> dict:
    masses, _, _, _ = ffstats.p_mat_limit_distribution(0, 2, JMAX)
    return {j: m for j, m in enumerate(masses) if m > 0}


def _selmer_shard(bounds):
    lo, hi = bounds
    vals, fac, cnt = sieve_segment(lo, hi)
    odd, r2 = monsky_r2_segment(vals, fac, cnt)
    return np.column_stack([odd, r2]) if len(odd) else np.zeros((0, 2), dtype=np.int64)


def _class_shard(bounds):
    lo, hi = bounds
    vals, fac, cnt = sieve_segment(lo, hi)
    if not len(vals):
        return np.zeros((0, 6), dtype=np.int64)
    r4 = np.array([redei_rank4(int(d), row[:c]) for d, row, c in
                   zip(vals.tolist(), fac.tolist(), cnt.tolist())], dtype=np.int64)
    spf = smallest_prime_factors(2 * int(vals.max()) + 2)
    data = class_data(vals, (r4 > 0).astype(np.int8), spf)
    computed = r4 > 0
    if np.any(data[computed, 3] != r4[computed]):
        bad = vals[computed][data[computed, 3] != r4[computed]]
        raise RuntimeError(f"Redei and forms 4-ranks disagree at d = {bad[:5].tolist()}")
    data[:, 3] = r4
    return np.column_stack([vals, data])


def _shards(H: int, size: int):
    lo = 1
    while lo <= H:
        hi = min(H + 1, lo + size)
        yield lo, hi
        lo = hi


def _shard_path(root: Path, kind: str, lo: int, hi: int) -> Path:
    return root / f"{kind}-shards" / f"{lo:012d}-{hi:012d}.csv"


def _write_csv(path: Path, header, rows: np.ndarray) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    if len(rows):
        np.savetxt(buf, rows, fmt="%d", delimiter=",")
    tmp = path.with_suffix(".tmp")
    tmp.write_text(buf.getvalue())
    tmp.replace(path)


def _read_csv(path: Path, ncols: int) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, dtype=np.int64, ndmin=2)
    return data.reshape(-1, ncols)


def _run_shards(config: SweepConfig, kind: str, header, fn) -> np.ndarray:
    root = config.cache
    bounds = list(_shards(config.H, config.shard_size))
    missing = [b for b in bounds if not _shard_path(root, kind, *b).exists()]
    if missing:
        if config.workers > 1 and len(missing) > 1:
            with get_context("spawn").Pool(config.workers) as pool:
                for b, rows in zip(missing, pool.imap(fn, missing)):
                    _write_csv(_shard_path(root, kind, *b), header, rows)
        else:
            for b in missing:
                _write_csv(_shard_path(root, kind, *b), header, fn(b))
    parts = [_read_csv(_shard_path(root, kind, *b), len(header)) for b in bounds]
    rows = np.concatenate(parts) if parts else np.zeros((0, len(header)), dtype=np.int64)
    order = np.argsort(rows[:, 0], kind="stable")
    rows = rows[order]
    _write_csv(root / f"{kind}_H{config.H}.csv", header, rows)
    return rows


def _save_report(config: SweepConfig, report: DistributionReport) -> None:
    path = config.cache / f"{report.kind}_H{config.H}_report.json"
    path.write_text(report.to_json())


def selmer_sweep(config: SweepConfig) -> DistributionReport:
    """r_2 of y^2 = x^3 - d^2 x for odd positive squarefree d <= H."""
    if config.kind != "selmer":
        raise ValueError("selmer_sweep needs kind = selmer")
    require_gate(config.cache, "monsky")
    t0 = time.perf_counter()
    rows = _run_shards(config, "selmer", SELMER_HEADER, _selmer_shard)
    counts = Counter(rows[:, 1].tolist())
    report = DistributionReport.from_counts(
        "selmer", config.H, counts, predicted_selmer(), config.threshold, config.seed)
    expected = count_squarefree(config.H, odd=True)
    if report.count != expected:
        raise RuntimeError(f"sweep saw {report.count} d but the sieve counts {expected}")
    report.runtime_seconds = time.perf_counter() - t0
    _save_report(config, report)
    return report


def class_sweep(config: SweepConfig) -> DistributionReport:
    """(r_4, r_8) of Q(sqrt(-d)) for positive squarefree d <= H."""
    if config.kind != "class":
        raise ValueError("class_sweep needs kind = class")
    require_gate(config.cache, "redei")
    t0 = time.perf_counter()
    rows = _run_shards(config, "class", CLASS_HEADER, _class_shard)
    r4 = rows[:, 4]
    r8 = rows[:, 5]
    counts = Counter(r4.tolist())
    cond_counts = Counter(r8[r4 == 1].tolist())
    cond_pred = {j: float(ffstats.p_mat(0, 2, j, 1)) for j in range(2)}
    n_cond = sum(cond_counts.values())
    cond_obs = {k: v / n_cond for k, v in sorted(cond_counts.items())} if n_cond else {}
    cond_tv = tv_distance(cond_obs, cond_pred) if n_cond else 1.0
    extra = {"conditional_r8_given_r4_1": {
        "count": n_cond,
        "observed": {str(k): v for k, v in cond_obs.items()},
        "predicted": {str(k): v for k, v in cond_pred.items()},
        "tv_distance": cond_tv,
        "threshold": config.cond_threshold,
        "pass": bool(n_cond and cond_tv <= config.cond_threshold),
    }}
    # the other rows of the chain, reported without a verdict
    table = {}
    for j in sorted(set(r4.tolist()) - {0}):
        sub = Counter(r8[r4 == j].tolist())
        tot = sum(sub.values())
        obs = {k: v / tot for k, v in sorted(sub.items())}
        pred = {k: float(ffstats.p_mat(0, 2, k, j)) for k in range(j + 1)}
        table[str(j)] = {"count": tot, "tv_distance": tv_distance(obs, pred),
                         "observed": {str(k): v for k, v in obs.items()},
                         "predicted": {str(k): v for k, v in pred.items()}}
    extra["conditional_r8_by_r4"] = table
    report = DistributionReport.from_counts(
        "class", config.H, counts, predicted_class(), config.threshold, config.seed,
        extra=extra)
    expected = count_squarefree(config.H)
    if report.count != expected:
        raise RuntimeError(f"sweep saw {report.count} d but the sieve counts {expected}")
    report.runtime_seconds = time.perf_counter() - t0
    _save_report(config, report)
    return report
