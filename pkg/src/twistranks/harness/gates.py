"""Oracle gates that must pass before the fast paths are used in sweeps."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import ffstats
from ..arith.classgroup import class_group, redei_rank4
from ..arith.fastclass import class_data
from ..arith.fastselmer import monsky_r2_segment
from ..arith.selmer import selmer_rank_descent
from ..arith.sieve import sieve_segment, squarefree_sieve

__all__ = [
    "GateResult",
    "GateNotPassedError",
    "recurrence_gate",
    "monsky_gate",
    "redei_gate",
    "run_gates",
    "require_gate",
    "gate_path",
    "GATES",
]

GATE_FILE = "validation.json"


class GateNotPassedError(RuntimeError):
    pass


@dataclass
class GateResult:
    name: str
    passed: bool
    checked: int
    mismatches: list = field(default_factory=list)
    seconds: float = 0.0


def recurrence_gate(max_general: int = 4, max_alt: int = 5) -> GateResult:
    """Recurrence counts against exhaustive enumeration."""
    t0 = time.perf_counter()
    bad, n = [], 0
    for ell in (2, 3):
        for m in range(max_general + 1):
            for k in range(max_general + 1):
                rec = [ffstats.count_rank_matrices(ell, m, k, r) for r in range(min(m, k) + 1)]
                if rec != ffstats.enumerate_rank_counts(ell, m, k):
                    bad.append(("general", ell, m, k))
                n += 1
    for k in range(max_alt + 1):
        rec = [ffstats.count_rank_alternating(2, k, r) if r % 2 == 0 else 0
               for r in range(k + 1)]
        if rec != ffstats.enumerate_alternating_rank_counts(2, k):
            bad.append(("alternating", 2, k))
        n += 1
    return GateResult("recurrence", not bad, n, bad, time.perf_counter() - t0)


def monsky_gate(H: int = 2000) -> GateResult:
    """The compiled Monsky path against the descent for odd squarefree d <= H."""
    t0 = time.perf_counter()
    vals, fac, cnt = sieve_segment(1, H + 1)
    odd, r2 = monsky_r2_segment(vals, fac, cnt)
    bad = []
    for d, r in zip(odd.tolist(), r2.tolist()):
        ref = selmer_rank_descent(d).r2
        if ref != r:
            bad.append((d, ref, r))
    return GateResult("monsky", not bad, len(odd), bad, time.perf_counter() - t0)


def redei_gate(H: int = 10 ** 4) -> GateResult:
    """Redei 4-rank and the compiled class kernel against the forms path."""
    t0 = time.perf_counter()
    ds = [s.d for s in squarefree_sieve(H)]
    fast = class_data(np.array(ds, dtype=np.int64))
    bad = []
    for d, row in zip(ds, fast.tolist()):
        cg = class_group(d)
        ref = (cg.discriminant, cg.h, cg.rank(1), cg.rank(2), cg.rank(3))
        r4 = redei_rank4(d)
        if r4 != ref[3] or tuple(row) != ref:
            bad.append((d, ref, r4, tuple(row)))
    return GateResult("redei", not bad, len(ds), bad, time.perf_counter() - t0)


GATES = {"recurrence": recurrence_gate, "monsky": monsky_gate, "redei": redei_gate}


def gate_path(cache_dir) -> Path:
    return Path(cache_dir) / GATE_FILE


def run_gates(cache_dir, names=None, **limits) -> dict:
    """Run gates and record the outcome in the cache directory."""
    names = list(GATES) if names is None else list(names)
    path = gate_path(cache_dir)
    state = json.loads(path.read_text()) if path.exists() else {}
    results = {}
    for name in names:
        fn = GATES[name]
        kw = {k: v for k, v in limits.items() if k in fn.__code__.co_varnames}
        res = fn(**kw)
        results[name] = res
        state[name] = {"passed": res.passed, "checked": res.checked,
                       "mismatches": [list(map(str, m)) for m in res.mismatches[:20]],
                       "seconds": round(res.seconds, 3)}
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(state, indent=2, sort_keys=True))
    tmp.replace(path)
    return results


def require_gate(cache_dir, name: str) -> None:
    path = gate_path(cache_dir)
    if not path.exists():
        raise GateNotPassedError(f"validation has not been run in {cache_dir}; run `validate` first")
    state = json.loads(path.read_text())
    if not state.get(name, {}).get("passed"):
        raise GateNotPassedError(f"the {name} gate has not passed in {cache_dir}")
