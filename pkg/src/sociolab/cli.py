"""Command-line entry point: run, sweep, hysteresis, traffic, export.

Every successful invocation writes a manifest under the output directory
recording the resolved configuration, and prints the manifest path; the
manifest is itself a valid config file, so any run can be repeated
bit-identically with `run --config <manifest>`.

Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .config import (ConfigError, config_to_mapping, load_config, parse_value,
                     schema_help)
from .evolution import ExtinctionError
from .experiments import hysteresis_sweep, run, run_replicates, sweep_nu
from .io import write_manifest, write_snapshot_csv
from .traffic import (ALL_STRATEGIES, Strategy, run_traffic_grid,
                      simulate_traffic, write_traffic_csv)


class _Parser(argparse.ArgumentParser):
    """argparse, but malformed flags exit 1 (2 is reserved for runtime errors)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _float_list(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _parse_overrides(pairs: list[str]) -> dict[str, str]:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, _, raw = pair.partition("=")
        overrides[key.strip()] = raw.strip()
    return overrides


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=None,
                   help="config file (key = value per line); defaults apply "
                        "for any key not set")
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (shorthand for --set run.seed=N)")
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="KEY=VALUE", help="override one config key "
                   "(repeatable, validated against the schema)")
    p.add_argument("--snapshot-steps", default=None, metavar="T1,T2,...",
                   help="shorthand for --set run.snapshot_steps=...")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="sociolab",
        description=__doc__,
        epilog="config keys:\n" + schema_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version",
                        version=f"sociolab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = dict(formatter_class=argparse.RawDescriptionHelpFormatter,
                  epilog="config keys:\n" + schema_help())

    p_run = sub.add_parser("run", help="one replicate ensemble of the "
                           "lattice experiment", **common)
    _add_config_flags(p_run)
    p_run.add_argument("--out", type=Path, required=True,
                       help="output directory")
    p_run.add_argument("--strict", action="store_true",
                       help="treat population extinction as an error (exit 2)")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="parallel workers across replicates")

    p_sweep = sub.add_parser("sweep", help="replicate ensembles across "
                             "offspring-placement localities nu", **common)
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--out", type=Path, required=True)
    p_sweep.add_argument("--nu-values", type=_float_list, default=[0.05, 0.95],
                         metavar="V1,V2,...")
    p_sweep.add_argument("--strict", action="store_true")
    p_sweep.add_argument("--jobs", type=int, default=1)

    p_hys = sub.add_parser("hysteresis", help="quasi-static friendliness "
                           "sweep on the homogeneous lattice")
    p_hys.add_argument("--out", type=Path, required=True)
    p_hys.add_argument("--seed", type=int, default=0)
    p_hys.add_argument("--rho-values", type=_float_list,
                       default=[round(0.025 * i, 3) for i in range(25)],
                       metavar="V1,V2,...")
    p_hys.add_argument("--size", type=int, default=50,
                       help="lattice side length")

    p_tr = sub.add_parser("traffic", help="signal-control strategy "
                          "comparison on the grid network")
    p_tr.add_argument("--out", type=Path, required=True)
    p_tr.add_argument("--strategy", default="all",
                      help="comma list of strategies, or 'all' "
                           f"({', '.join(s.value for s in ALL_STRATEGIES)})")
    p_tr.add_argument("--utilization", type=_float_list, default=[0.3, 0.85],
                      metavar="U1,U2,...")
    p_tr.add_argument("--seed", type=int, default=None,
                      help="run a single seed instead of the seed range")
    p_tr.add_argument("--seeds", type=int, default=10,
                      help="number of seeds per grid point (0..N-1)")
    p_tr.add_argument("--steps", type=int, default=3000)
    p_tr.add_argument("--jobs", type=int, default=1)

    p_exp = sub.add_parser("export", help="run one replicate and export "
                           "only its grid snapshots", **common)
    _add_config_flags(p_exp)
    p_exp.add_argument("--out", type=Path, required=True)
    p_exp.add_argument("--replicate", type=int, default=0)
    p_exp.add_argument("--strict", action="store_true")

    return parser


def _resolve_config(args):
    overrides = _parse_overrides(args.overrides)
    if args.seed is not None:
        overrides["run.seed"] = str(args.seed)
    if getattr(args, "snapshot_steps", None) is not None:
        overrides["run.snapshot_steps"] = args.snapshot_steps
    return load_config(args.config, overrides)


def _manifest_for_config(out_dir: Path, cfg) -> Path:
    path = out_dir / "manifest"
    write_manifest(path, dict(config_to_mapping(cfg)))
    return path


def _run_one_replicate(payload):
    cfg, rep = payload
    return rep, run(cfg, rep)


def _cmd_run(args) -> int:
    cfg = _resolve_config(args)
    args.out.mkdir(parents=True, exist_ok=True)
    if args.jobs > 1:
        from .experiments import persist_run, write_ensemble_summary, EnsembleResult
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            pairs = list(pool.map(_run_one_replicate,
                                  [(cfg, r) for r in range(cfg.replicates)]))
        pairs.sort()
        trajectories = [t for _, t in pairs]
        for rep, traj in pairs:
            persist_run(traj, cfg, args.out, rep)
        write_ensemble_summary(args.out / "ensemble.csv",
                               EnsembleResult(cfg, trajectories))
        result_trajs = trajectories
    else:
        result_trajs = run_replicates(cfg, args.out).trajectories
    manifest = _manifest_for_config(args.out, cfg)
    print(manifest)
    extinct = [t for t in result_trajs if t.extinct_at is not None]
    if extinct:
        print(f"warning: {len(extinct)} replicate(s) went extinct",
              file=sys.stderr)
        if args.strict:
            return 2
    return 0


def _cmd_sweep(args) -> int:
    cfg = _resolve_config(args)
    args.out.mkdir(parents=True, exist_ok=True)
    for nu in args.nu_values:
        if not 0.0 <= nu <= 1.0:
            raise ConfigError(f"nu must lie in [0, 1], got {nu}")
    sweep_nu(cfg, args.nu_values, args.out)
    manifest = _manifest_for_config(args.out, cfg)
    print(manifest)
    return 0


def _cmd_hysteresis(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    hysteresis_sweep(args.rho_values, width=args.size, height=args.size,
                     seed=args.seed, out_path=args.out / "hysteresis.csv")
    manifest_path = args.out / "manifest"
    write_manifest(manifest_path, {
        "command": "hysteresis",
        "seed": args.seed,
        "size": args.size,
        "rho_values": ",".join(repr(v) for v in args.rho_values),
        "build": f"sociolab {__version__}",
    })
    print(manifest_path)
    return 0


def _cmd_traffic(args) -> int:
    if args.strategy == "all":
        strategies = list(ALL_STRATEGIES)
    else:
        try:
            strategies = [Strategy(s.strip())
                          for s in args.strategy.split(",") if s.strip()]
        except ValueError as e:
            raise ConfigError(str(e)) from e
    for u in args.utilization:
        if not 0.0 < u < 1.0:
            raise ConfigError(f"utilization must lie in (0, 1), got {u}")
    seeds = [args.seed] if args.seed is not None else list(range(args.seeds))
    args.out.mkdir(parents=True, exist_ok=True)
    cells = [(s, u, seed) for s in strategies
             for u in args.utilization for seed in seeds]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_traffic_cell,
                                    [(s, u, seed, args.steps)
                                     for s, u, seed in cells]))
    else:
        results = [simulate_traffic(s, u, seed, args.steps)
                   for s, u, seed in cells]
    write_traffic_csv(args.out / "traffic.csv", results)
    manifest_path = args.out / "manifest"
    write_manifest(manifest_path, {
        "command": "traffic",
        "strategies": ",".join(s.value for s in strategies),
        "utilizations": ",".join(repr(u) for u in args.utilization),
        "seeds": ",".join(str(s) for s in seeds),
        "steps": args.steps,
        "build": f"sociolab {__version__}",
    })
    print(manifest_path)
    return 0


def _traffic_cell(payload):
    strategy, u, seed, steps = payload
    return simulate_traffic(strategy, u, seed, steps)


def _cmd_export(args) -> int:
    cfg = _resolve_config(args)
    args.out.mkdir(parents=True, exist_ok=True)
    traj = run(cfg, args.replicate)
    for t, codes in sorted(traj.snapshots.items()):
        write_snapshot_csv(args.out / f"step{t:05d}.csv", codes)
    manifest = _manifest_for_config(args.out, cfg)
    print(manifest)
    if traj.extinct_at is not None:
        print(f"warning: extinct at step {traj.extinct_at}", file=sys.stderr)
        if args.strict:
            return 2
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "hysteresis": _cmd_hysteresis,
    "traffic": _cmd_traffic,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"sociolab: config error: {e}", file=sys.stderr)
        return 1
    except (ExtinctionError, OSError, RuntimeError) as e:
        print(f"sociolab: runtime error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
