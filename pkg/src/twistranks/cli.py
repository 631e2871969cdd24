"""Command-line entry point.

Every subcommand reads optional defaults from an INI file (``--config``),
one section per subcommand plus ``[global]``; command-line flags win.
Data goes to stdout in csv, json or pretty form; diagnostics go to stderr.
Exit codes: 0 success, 1 computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import chains, ffstats
from .arith.classgroup import class_group, redei_rank4
from .arith.selmer import selmer_rank_descent, selmer_rank_monsky
from .arith.sieve import SquarefreeInt
from .grids import (bye_ramsey_construct, closure, example_grid, find_basis, is_closed,
                    parse_grid, parse_points)
from .harness import (GateNotPassedError, SweepConfig, class_sweep, jutila_probe,
                      monsky_invariance_battery, require_gate, run_gates, selmer_sweep)
from .harness.reports import default_cache_dir

__all__ = ["main", "run", "UsageError"]

FORMATS = ("csv", "json", "pretty")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- output ------------------------------------------------------------------

def _cell(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


class Output:
    """A table of rows plus optional metadata."""

    def __init__(self, columns, rows, meta=None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.meta = meta or {}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            payload = {"columns": self.columns,
                       "rows": [dict(zip(self.columns, map(_jsonable, r))) for r in self.rows]}
            if self.meta:
                payload["meta"] = _jsonable(self.meta)
            return json.dumps(payload, indent=2) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.columns)
            w.writerows([[_cell(v) for v in r] for r in self.rows])
            return buf.getvalue()
        cells = [self.columns] + [[_cell(v) for v in r] for r in self.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(self.columns))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
        lines.insert(1, "  ".join("-" * w for w in widths))
        for k, v in self.meta.items():
            lines.append(f"# {k}: {_cell(v) if not isinstance(v, dict) else json.dumps(_jsonable(v))}")
        return "\n".join(lines) + "\n"


# --- subcommands ---------------------------------------------------------------

def _ensemble(args):
    if args.alt:
        return "alternating", 0, 2
    return "general", args.u, args.ell


def cmd_matstats(args) -> Output:
    kind, u, ell = _ensemble(args)
    if args.limit:
        if kind == "alternating":
            masses, err, n, tail = ffstats.p_alt_limit_distribution(args.jmax)
        else:
            masses, err, n, tail = ffstats.p_mat_limit_distribution(u, ell, args.jmax)
        rows = [(j, m) for j, m in enumerate(masses)]
        return Output(["j", "probability"], rows,
                      {"ensemble": kind, "n": "limit", "error": err, "tail": tail})
    if args.n is None:
        raise UsageError("matstats needs --n or --limit")
    n = args.n
    if kind == "alternating":
        total = 2 ** (n * (n - 1) // 2)
        probs = [(j, ffstats.p_alt(j, n)) for j in range(n + 1) if (n - j) % 2 == 0]
    else:
        total = ell ** (max(n - u, 0) * n)
        probs = [(j, ffstats.p_mat(u, ell, j, n)) for j in range(n + 1)]
    # the count of matrices with that kernel dimension over the ensemble size
    rows = [(j, p, f"{p * total}/{total}") for j, p in probs]
    return Output(["j", "probability", "count_over_total"], rows,
                  {"ensemble": kind, "u": u, "ell": ell, "n": n})


def _parse_start(text: str):
    if text == "limit":
        return "limit"
    masses = {}
    for part in text.split(","):
        if ":" in part:
            k, v = part.split(":", 1)
            masses[int(k)] = Fraction(v)
        else:
            masses[int(part)] = Fraction(1)
    return masses


def cmd_chain(args) -> Output:
    kind, u, ell = _ensemble(args)
    spec = chains.ChainSpec(kind, u, ell, args.max_rank)
    start = _parse_start(args.start)
    if args.absorption:
        res = chains.absorption_distribution(spec, start)
        values = res.exact if res.exact is not None else res.masses
        rows = [(a, values[a]) for a in sorted(values)]
        return Output(["state", "probability"], rows, {"escape": res.escape, "chain": kind})
    if args.prefix:
        prefix = [int(x) for x in args.prefix.split(",")]
        p = chains.prefix_probability(spec, start, prefix)
        if isinstance(p, ffstats.LimitValue):
            return Output(["prefix", "probability", "error"], [(args.prefix, p.value, p.error)])
        return Output(["prefix", "probability"], [(args.prefix, p)])
    seq = chains.sample_sequence(spec, args.seed, args.steps, start)
    return Output(["step", "state"], list(enumerate(seq, 1)), {"seed": args.seed})


def _ds(values) -> list:
    out = []
    for v in values:
        for part in str(v).split(","):
            if part.strip():
                out.append(int(part))
    if not out:
        raise UsageError("give at least one --d")
    return out


def cmd_selmer(args) -> Output:
    if args.method == "monsky":
        require_gate(args.cache_dir, "monsky")
    rows = []
    for d in _ds(args.d):
        fn = selmer_rank_monsky if args.method == "monsky" else selmer_rank_descent
        res = fn(SquarefreeInt.of(d))
        rows.append((d, res.sel2_dim, res.torsion_dim, res.r2, res.method))
    return Output(["d", "sel2_dim", "torsion_dim", "r2", "method"], rows)


def cmd_classgroup(args) -> Output:
    if args.redei:
        require_gate(args.cache_dir, "redei")
    rows = []
    for d in _ds(args.d):
        cg = class_group(d)
        row = [d, cg.discriminant, cg.h, "x".join(map(str, cg.cyclic_factors)) or "1",
               cg.rank(1), cg.rank(2), cg.rank(3)]
        if args.redei:
            row.append(redei_rank4(d))
        rows.append(row)
    cols = ["d", "disc", "h", "structure", "r2", "r4", "r8"] + (["r4_redei"] if args.redei else [])
    return Output(cols, rows)


def cmd_sweep(args) -> Output:
    if args.H is None:
        raise UsageError("sweep needs --H")
    cfg = SweepConfig(args.kind, args.H, seed=args.seed, workers=args.workers,
                      cache_dir=str(args.cache_dir), threshold=args.threshold,
                      cond_threshold=args.cond_threshold, shard_size=args.shard_size,
                      pairs=args.pairs, max_primes=args.max_primes,
                      prime_bound=args.prime_bound, method=args.method)
    if args.kind == "monsky-invariance":
        res = monsky_invariance_battery(cfg)
        meta = {"pairs": res.pairs, "mismatches": res.mismatches, "pass": res.passed}
        return Output(["d", "e", "r2_d", "r2_e"], res.rows, meta)
    if args.kind not in ("selmer", "class"):
        raise UsageError(f"sweep kind {args.kind!r} is not a distribution sweep")
    rep = selmer_sweep(cfg) if args.kind == "selmer" else class_sweep(cfg)
    d = rep.to_dict(runtime=not args.no_runtime)
    keys = sorted(set(rep.observed) | set(rep.predicted))
    rows = [(k, rep.counts.get(k, 0), rep.observed.get(k, 0.0), rep.predicted.get(k, 0.0))
            for k in keys]
    meta = {k: v for k, v in d.items() if k not in ("observed", "predicted")}
    return Output(["rank", "count", "observed", "predicted"], rows, meta)


def _grid(args):
    if args.file:
        grid = parse_grid(Path(args.file).read_text(), args.ell, args.k0, args.B)
    else:
        grid = example_grid(args.example, args.ell)
        if args.B is not None or args.k0 != 1:
            grid = type(grid).of_sizes(grid.sizes, args.ell, args.k0, args.B)
    return grid


def _fmt_set(points) -> str:
    return "{" + " ".join("(" + ",".join(map(str, p)) + ")" for p in points) + "}"


def cmd_grid(args) -> Output:
    grid = _grid(args)
    meta = {"sizes": "x".join(map(str, grid.sizes)), "ell": grid.ring.ell}
    if args.all_subsets:
        n = len(grid)
        if n > args.max_points:
            raise UsageError(f"{n} points; --all-subsets is limited to {args.max_points}")
        rows = []
        for mask in range(1 << n):
            Y = tuple(p for i, p in enumerate(grid.points) if mask >> i & 1)
            rows.append((_fmt_set(Y), len(Y), is_closed(grid, Y), _fmt_set(closure(grid, Y))))
        return Output(["subset", "size", "closed", "closure"], rows, meta)
    if args.ramsey is not None:
        res = bye_ramsey_construct(grid, args.ramsey, args.seed, args.batteries, args.cap)
        rows = [(",".join(map(str, x)), res.g[x]) for x in grid.points]
        meta.update(attempts=res.attempts, batteries=res.batteries_checked,
                    min_slack=res.min_slack, seed=args.seed)
        return Output(["point", "g"], rows, meta)
    if args.points:
        Y = parse_points(Path(args.points).read_text(), grid)
        cl = closure(grid, Y)
        basis = find_basis(grid, cl)
        rows = [(",".join(map(str, x)), x in Y, x in cl, x in basis) for x in grid.points]
        return Output(["point", "in_Y", "in_closure", "in_basis"], rows, meta)
    basis = find_basis(grid, grid.points)
    rows = [(",".join(map(str, x)),) for x in basis]
    return Output(["basis_point"], rows, meta)


def cmd_jutila(args) -> Output:
    if args.decay:
        pairs = [(10 ** k, 10 ** k) for k in range(2, args.decay + 1)]
    else:
        if args.N1 is None or args.N2 is None:
            raise UsageError("jutila needs --N1 and --N2, or --decay")
        pairs = [(args.N1, args.N2)]
    rows = []
    for n1, n2 in pairs:
        r = jutila_probe(n1, n2, args.scheme, args.seed, args.signs)
        rows.append((r.N1, r.N2, r.lhs, r.bound, r.ratio, r.normalized))
    meta = {"scheme": args.scheme}
    if len(rows) > 1:
        norm = [r[5] for r in rows]
        meta["decreasing"] = all(a > b for a, b in zip(norm, norm[1:]))
    return Output(["N1", "N2", "lhs", "bound", "ratio", "normalized"], rows, meta)


def cmd_validate(args) -> Output:
    names = args.gates.split(",") if args.gates else None
    limits = {k: v for k, v in (("H", args.H),) if v is not None}
    results = run_gates(args.cache_dir, names, **limits)
    rows = [(r.name, r.passed, r.checked, len(r.mismatches)) for r in results.values()]
    out = Output(["gate", "passed", "checked", "mismatches"], rows,
                 {"cache_dir": str(args.cache_dir)})
    out.failed = not all(r.passed for r in results.values())
    return out


# --- parser ---------------------------------------------------------------------

def _ensemble_flags(p):
    p.add_argument("--alt", action="store_true", default=None, help="alternating ensemble over F_2")
    p.add_argument("--u", type=int, help="row offset of the general ensemble")
    p.add_argument("--ell", type=int, help="prime field size")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="INI file with per-subcommand defaults")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--seed", type=int)
    common.add_argument("--cache-dir", dest="cache_dir")

    parser = _Parser(prog="twistranks", description="Rank statistics of twist families.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("matstats", parents=[common], help="kernel-rank probabilities")
    _ensemble_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--limit", action="store_true", default=None)
    p.add_argument("--jmax", type=int)

    p = sub.add_parser("chain", parents=[common], help="rank Markov chains")
    _ensemble_flags(p)
    p.add_argument("--absorption", action="store_true", default=None)
    p.add_argument("--start", help="'limit' or masses like 3 or 2:1/2,3:1/2")
    p.add_argument("--max-rank", dest="max_rank", type=int)
    p.add_argument("--prefix", help="comma-separated rank prefix")
    p.add_argument("--steps", type=int)

    p = sub.add_parser("selmer", parents=[common], help="2-Selmer ranks of congruent twists")
    p.add_argument("--d", action="append")
    p.add_argument("--method", choices=("descent", "monsky"))

    p = sub.add_parser("classgroup", parents=[common], help="class groups of Q(sqrt(-d))")
    p.add_argument("--d", action="append")
    p.add_argument("--redei", action="store_true", default=None)

    p = sub.add_parser("sweep", parents=[common], help="distribution sweeps over d")
    p.add_argument("--kind", choices=("selmer", "class", "monsky-invariance"))
    p.add_argument("--H", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--cond-threshold", dest="cond_threshold", type=float)
    p.add_argument("--shard-size", dest="shard_size", type=int)
    p.add_argument("--pairs", type=int)
    p.add_argument("--max-primes", dest="max_primes", type=int)
    p.add_argument("--prime-bound", dest="prime_bound", type=int)
    p.add_argument("--method", choices=("descent", "monsky"))
    p.add_argument("--no-runtime", dest="no_runtime", action="store_true", default=None,
                   help="omit runtime_seconds so output is byte-stable")

    p = sub.add_parser("grid", parents=[common], help="closure, bases and bye_Ramsey on grids")
    p.add_argument("--example", help="built-in grid such as 2x2 or 4x4x4")
    p.add_argument("--file", help="grid description file")
    p.add_argument("--ell", type=int)
    p.add_argument("--k0", type=int)
    p.add_argument("--B", type=int)
    p.add_argument("--all-subsets", dest="all_subsets", action="store_true", default=None)
    p.add_argument("--max-points", dest="max_points", type=int)
    p.add_argument("--points", help="file listing a subset Y, one point per line")
    p.add_argument("--ramsey", type=int, metavar="M", help="construct g for the given M")
    p.add_argument("--batteries", type=int)
    p.add_argument("--cap", type=int)

    p = sub.add_parser("jutila", parents=[common], help="bilinear character-sum probe")
    p.add_argument("--N1", type=int)
    p.add_argument("--N2", type=int)
    p.add_argument("--scheme", choices=("constant", "random", "mobius"))
    p.add_argument("--signs", choices=("both", "positive", "negative"))
    p.add_argument("--decay", type=int, metavar="K", help="run N1 = N2 = 10^2 .. 10^K")

    p = sub.add_parser("validate", parents=[common], help="run the oracle gates")
    p.add_argument("--gates", help="comma-separated subset of recurrence,monsky,redei")
    p.add_argument("--H", type=int, help="override the gate ranges")
    return parser


DEFAULTS = {
    "global": {"format": "pretty", "seed": 0, "cache_dir": None},
    "matstats": {"alt": False, "u": 0, "ell": 2, "n": None, "limit": False, "jmax": 20},
    "chain": {"alt": False, "u": 0, "ell": 2, "absorption": False, "start": "limit",
              "max_rank": 40, "prefix": None, "steps": 10},
    "selmer": {"d": None, "method": "descent"},
    "classgroup": {"d": None, "redei": False},
    "sweep": {"kind": "selmer", "H": None, "workers": 1, "threshold": 0.02,
              "cond_threshold": 0.05, "shard_size": 1 << 20, "pairs": 200, "max_primes": 3,
              "prime_bound": 10 ** 5, "method": "descent", "no_runtime": False},
    "grid": {"example": "2x2", "file": None, "ell": 2, "k0": 1, "B": None,
             "all_subsets": False, "max_points": 16, "points": None, "ramsey": None,
             "batteries": 100, "cap": 64},
    "jutila": {"N1": None, "N2": None, "scheme": "constant", "signs": "both", "decay": None},
    "validate": {"gates": None, "H": None},
}

COMMANDS = {
    "matstats": cmd_matstats, "chain": cmd_chain, "selmer": cmd_selmer,
    "classgroup": cmd_classgroup, "sweep": cmd_sweep, "grid": cmd_grid,
    "jutila": cmd_jutila, "validate": cmd_validate,
}


def _coerce(value: str, default, key: str, section: str):
    """Convert an INI string using the type of the default."""
    if isinstance(default, bool):
        low = value.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"[{section}] {key}: expected a boolean, got {value!r}")
    if isinstance(default, int):
        try:
            return int(float(value)) if "e" in value.lower() else int(value)
        except ValueError:
            raise UsageError(f"[{section}] {key}: expected an integer, got {value!r}") from None
    if isinstance(default, float):
        try:
            return float(value)
        except ValueError:
            raise UsageError(f"[{section}] {key}: expected a number, got {value!r}") from None
    if key in ("N1", "N2", "H", "n", "ramsey", "decay"):
        try:
            return int(float(value)) if "e" in value.lower() else int(value)
        except ValueError:
            raise UsageError(f"[{section}] {key}: expected an integer, got {value!r}") from None
    if key == "d":
        return [value]
    return value


def load_config(path, command: str) -> dict:
    """Values from the [global] and [command] sections; unknown keys are errors."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise UsageError(f"malformed config {path}: {exc}") from None
    for section in cp.sections():
        if section != "global" and section not in COMMANDS:
            raise UsageError(f"unknown config section [{section}]")
    out = {}
    for section in ("global", command):
        if not cp.has_section(section):
            continue
        defaults = DEFAULTS[section]
        for key, raw in cp.items(section):
            k = key.replace("-", "_")
            if k not in defaults:
                raise UsageError(f"unknown key {key!r} in [{section}]")
            out[k] = _coerce(raw, defaults[k], k, section)
    return out


def resolve(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        raise UsageError(parser.format_usage().strip())
    merged = dict(DEFAULTS["global"])
    merged.update(DEFAULTS[args.command])
    if args.config:
        merged.update(load_config(args.config, args.command))
    for k, v in vars(args).items():
        if v is not None:
            merged[k] = v
    if merged["format"] not in FORMATS:
        raise UsageError(f"format must be one of {', '.join(FORMATS)}")
    merged["cache_dir"] = Path(merged["cache_dir"]) if merged["cache_dir"] else default_cache_dir()
    return argparse.Namespace(**merged)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = resolve(argv)
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except GateNotPassedError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2 if isinstance(exc, KeyError) else 1
    except Exception as exc:  # computation failures
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    stdout.write(out.render(args.format))
    return 1 if getattr(out, "failed", False) else 0


def main() -> None:
    sys.exit(run())
