"""Command-line entry point: suite sweeps with CSV output, bound tables for
measurement pairs, per-state entropy tables, and the limit checks.

Exit codes: 0 all pass, 1 any failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import report
from .entropies import (
    classical_renyi_entropy,
    cond_entropy_down,
    cond_entropy_up,
    gen_cond_entropy,
    mutual_info_down,
    mutual_info_up,
    quantum_relative_entropy,
    renyi_entropy,
    sandwiched_divergence,
)
from .inequalities import DIVERGENCE_SUITES, run_suite
from .linalg import SystemLayout
from .states import DensityOperator, MeasurementBasis, random_density, trial_rng
from .uncertainty import (
    UNCERTAINTY_SUITES,
    MeasurementPair,
    hall_bound,
    mub_pair,
    q_delta,
    q_delta_state_independent,
    q_mu,
    q_rho,
    r_cp,
    r_grudka,
    r_xz,
    random_pair,
)

ENV_SEED = "RENYI_LAB_SEED"
ALL_SUITES = DIVERGENCE_SUITES + UNCERTAINTY_SUITES

CSV_COLUMNS = ("trial_id", "seed", "dim_a", "dim_b", "dim_c", "alpha", "beta", "gamma",
               "delta", "direction", "lhs_bits", "rhs_bits", "gap_bits", "verdict",
               "opt_iters", "opt_residual")

CONFIG_KEYS = {"suite", "trials", "dim_a", "dim_b", "dim_c", "seed", "tol", "out", "explore"}


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.12g}"
    return str(x)


def _trial_seed_value(master_seed: int, i: int) -> int:
    return int(np.random.SeedSequence([int(master_seed), int(i)]).generate_state(1)[0])


def write_csv(path: str, reports, master_seed: int) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for i, r in enumerate(reports):
        dims = tuple(r.dims) + (1, 1, 1)
        row = (
            str(i), str(_trial_seed_value(master_seed, r.trial_seed)),
            str(dims[0]), str(dims[1]), str(dims[2]),
            _fmt(float(r.alpha)), _fmt(None if r.beta is None else float(r.beta)),
            _fmt(float(r.gamma)), _fmt(None if r.delta is None else float(r.delta)),
            r.direction, _fmt(float(r.lhs)), _fmt(float(r.rhs)), _fmt(float(r.gap)),
            r.verdict, str(r.opt_iters), _fmt(float(r.opt_residual)),
        )
        lines.append(",".join(row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# file formats: first line "dim d", then one "re im" pair per entry, row-major
# ---------------------------------------------------------------------------

def _read_matrix_file(path: str) -> np.ndarray:
    with open(path) as fh:
        tokens = [line.split("#")[0].strip() for line in fh]
    tokens = [t for t in tokens if t]
    head = tokens[0].split()
    if len(head) != 2 or head[0] != "dim":
        raise ConfigError(f"{path}: first line must be 'dim d'")
    d = int(head[1])
    entries = []
    for t in tokens[1:]:
        parts = t.split()
        if len(parts) != 2:
            raise ConfigError(f"{path}: expected 're im' rows, got {t!r}")
        entries.append(complex(float(parts[0]), float(parts[1])))
    if len(entries) != d * d:
        raise ConfigError(f"{path}: expected {d * d} entries, found {len(entries)}")
    return np.array(entries, dtype=complex).reshape(d, d)


def write_matrix_file(path: str, m: np.ndarray) -> None:
    m = np.asarray(m, dtype=complex)
    lines = [f"dim {m.shape[0]}"]
    for z in m.reshape(-1):
        lines.append(f"{z.real:.17g} {z.imag:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_state_file(path: str, dims=None) -> DensityOperator:
    m = _read_matrix_file(path)
    layout = SystemLayout(tuple(dims)) if dims else SystemLayout((m.shape[0],))
    return DensityOperator(m, layout)


def read_basis_file(path: str) -> MeasurementBasis:
    return MeasurementBasis(_read_matrix_file(path))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def load_config(path: str) -> dict:
    cfg = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#")[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{ln}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{ln}: unknown key {key!r}")
            cfg[key] = val
    return cfg


def _default_seed(args_seed) -> int:
    if args_seed is not None:
        return int(args_seed)
    env = os.environ.get(ENV_SEED)
    return int(env) if env else 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    suites = args.suite if args.suite else cfg.get("suite", "").split(",") if cfg.get("suite") else []
    suites = [s for s in suites if s]
    if not suites:
        raise ConfigError("no suites selected (use --suite)")
    for s in suites:
        if s not in ALL_SUITES:
            raise ConfigError(f"unknown suite {s!r}; known: {', '.join(ALL_SUITES)}")
    trials = int(args.trials if args.trials is not None else cfg.get("trials", 100))
    dim_a = int(args.dim_a if args.dim_a is not None else cfg.get("dim_a", 2))
    dim_b = int(args.dim_b if args.dim_b is not None else cfg.get("dim_b", 2))
    dim_c = int(args.dim_c if args.dim_c is not None else cfg.get("dim_c", 2))
    seed = _default_seed(args.seed if args.seed is not None else cfg.get("seed"))
    tol = float(args.tol if args.tol is not None else cfg.get("tol", report.BASE_TOL))
    out = args.out if args.out is not None else cfg.get("out", "sweep-out")
    explore = args.explore or cfg.get("explore", "").lower() in ("1", "true", "yes")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    for d in (dim_a, dim_b, dim_c):
        if not 2 <= d <= 8:
            raise ConfigError("subsystem dimensions must lie in [2, 8]")

    os.makedirs(out, exist_ok=True)
    any_fail = False
    for tag in suites:
        dims = (dim_a, dim_b, dim_c) if tag in ("chain", "chain-dup") else (dim_a, dim_b)
        reports, summary = run_suite(tag, trials, dims, seed, tol, explore)
        write_csv(os.path.join(out, f"{tag}.csv"), reports, seed)
        print(summary.line())
        if summary.failed and not explore:
            any_fail = True
    return 1 if any_fail else 0


def _resolve_pair(args) -> MeasurementPair:
    if args.pair:
        kind, _, arg = args.pair.partition(":")
        if kind == "mub":
            return mub_pair(int(arg or 2))
        if kind == "random":
            return random_pair(2, trial_rng(_default_seed(args.seed), 0))
        raise ConfigError(f"unknown named pair {args.pair!r} (use mub:d or random)")
    if args.basis_x and args.basis_z:
        return MeasurementPair.from_bases(read_basis_file(args.basis_x), read_basis_file(args.basis_z))
    raise ConfigError("provide --pair or both --basis-x and --basis-z")


def cmd_bounds(args) -> int:
    pair = _resolve_pair(args)
    deltas = [float(x) for x in args.deltas.split(",")] if args.deltas else [0.5, 2.0]
    rng = trial_rng(_default_seed(args.seed), 1)
    rho = random_density(pair.d, pair.d, rng)
    print(f"measurement pair on dimension {pair.d}; max overlap c = {pair.c:.10f}")
    rows = [
        ("q_MU", q_mu(pair).value),
        ("q(rho) [random rho]", q_rho(rho, pair).value),
        ("r_H", hall_bound(pair).value),
        ("r(X,Z)", r_xz(pair, "xz").value),
        ("r(Z,X)", r_xz(pair, "zx").value),
        ("r_CP", r_cp(pair).value),
        ("r_G", r_grudka(pair).value),
    ]
    for d in deltas:
        rows.append((f"q_delta(rho) delta={d:g}", q_delta(rho, pair, d).value))
        rows.append((f"q_delta_SI delta={d:g}", q_delta_state_independent(pair, d).value))
    width = max(len(r[0]) for r in rows)
    for name, val in rows:
        print(f"  {name:<{width}}  {val: .10f} bits")
    return 0


def cmd_state(args) -> int:
    dims = tuple(int(x) for x in args.dims.split(",")) if args.dims else None
    rho = read_state_file(args.state, dims)
    orders = [float(x) for x in args.orders.split(",")] if args.orders else [0.0, 0.5, 1.0, 2.0, math.inf]
    print(f"state on dimension {rho.dim} (layout {rho.layout.dims})")
    for a in orders:
        line = f"  H_{a:g} = {renyi_entropy(rho, a): .10f}"
        if len(rho.layout.dims) == 2 and a >= 0.5:
            down = cond_entropy_down(rho, a)
            up = cond_entropy_up(rho, a)
            mi_up = mutual_info_up(rho, a)
            mi_dn = mutual_info_down(rho, a)
            line += (f"   Hdn(A|B) = {down: .8f}  Hup(A|B) = {up.value: .8f}"
                     f"  Iup = {mi_up.value: .8f}  Idn = {mi_dn.value: .8f}")
        print(line)
    return 0


def cmd_limits(args) -> int:
    seed = _default_seed(args.seed)
    n = args.count
    worst_alpha = worst_d1 = worst_d0 = 0.0
    for i in range(n):
        rng = trial_rng(seed, i)
        rho = random_density(2, 2, rng)
        vn = renyi_entropy(rho, 1.0)
        for a in (1.0 - 1e-4, 1.0 + 1e-4):
            worst_alpha = max(worst_alpha, abs(renyi_entropy(rho, a) - vn))
        pair = random_pair(2, rng)
        q1 = q_rho(rho, pair).value
        qmu = q_mu(pair).value
        for d in (1.0 - 1e-4, 1.0 + 1e-4):
            worst_d1 = max(worst_d1, abs(q_delta(rho, pair, d).value - q1))
        for d in (-1e-4, 1e-4):
            worst_d0 = max(worst_d0, abs(q_delta(rho, pair, d).value - qmu))
    print(f"alpha->1 entropy residual over {n} states:   {worst_alpha:.3e}  (bound 1e-3)")
    print(f"delta->1 bound residual over {n} instances:  {worst_d1:.3e}  (bound 1e-3)")
    print(f"delta->0 bound residual over {n} instances:  {worst_d0:.3e}  (bound 1e-3)")
    ok = worst_alpha <= 1e-3 and worst_d1 <= 1e-3 and worst_d0 <= 1e-3
    print("limits:", "pass" if ok else "FAIL")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="renyi-lab",
                                 description="Renyi divergence inequality verification suites")
    sub = ap.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run verification suites and write CSV reports")
    sweep.add_argument("--suite", action="append",
                       help=f"suite tag (repeatable); one of: {', '.join(ALL_SUITES)}")
    sweep.add_argument("--trials", type=int)
    sweep.add_argument("--dim-a", type=int, dest="dim_a")
    sweep.add_argument("--dim-b", type=int, dest="dim_b")
    sweep.add_argument("--dim-c", type=int, dest="dim_c")
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--tol", type=float)
    sweep.add_argument("--out")
    sweep.add_argument("--explore", action="store_true",
                       help="out-of-range sampling; never affects the exit code")
    sweep.add_argument("--config", help="key=value config file; flags override")
    sweep.set_defaults(func=cmd_sweep)

    bounds = sub.add_parser("bounds", help="print uncertainty/exclusion bound constants")
    bounds.add_argument("--pair", help="named pair: mub:d or random")
    bounds.add_argument("--basis-x", dest="basis_x")
    bounds.add_argument("--basis-z", dest="basis_z")
    bounds.add_argument("--deltas", help="comma-separated delta orders")
    bounds.add_argument("--seed", type=int)
    bounds.set_defaults(func=cmd_bounds)

    state = sub.add_parser("state", help="entropy table for a state file")
    state.add_argument("state", help="state file ('dim d' header, 're im' rows)")
    state.add_argument("--orders", help="comma-separated Renyi orders")
    state.add_argument("--dims", help="comma-separated subsystem dimensions")
    state.set_defaults(func=cmd_state)

    limits = sub.add_parser("limits", help="order->1 and delta->{0,1} limit residuals")
    limits.add_argument("--count", type=int, default=100)
    limits.add_argument("--seed", type=int)
    limits.set_defaults(func=cmd_limits)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
