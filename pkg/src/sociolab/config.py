"""Experiment configuration: schema, defaults, flat key=value config files.

The config format is plain text, one `dotted.key = value` per line, with
`#` comments. Every key has a schema entry carrying its type, default and
description; unknown keys are rejected. The defaults reproduce the
headline lattice experiment (50x50 grid, 60% occupancy, T=1.1/R=1/P=0/S=-1,
beta=0.05, nu=0.95, epsilon=0.05, mutation split 0.8/0.2, two families at
rho=0 and rho=0.2).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .evolution import EvolutionParams
from .game import PayoffMatrix
from .world import FamilySpec


class ConfigError(ValueError):
    """Invalid config file, key, or value."""


def _parse_bool(s: str) -> bool:
    if s.lower() in ("true", "1", "yes"):
        return True
    if s.lower() in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {s!r}")


def _parse_int_list(s: str) -> tuple[int, ...]:
    s = s.strip()
    if not s:
        return ()
    return tuple(int(x) for x in s.split(","))


def _parse_families(s: str) -> tuple[FamilySpec, ...]:
    """`id:initial_rho:share` entries separated by `;`."""
    fams = []
    for part in s.split(";"):
        bits = part.strip().split(":")
        if len(bits) != 3:
            raise ConfigError(f"bad family spec {part!r}, want id:rho:share")
        fams.append(FamilySpec(bits[0], float(bits[1]), float(bits[2])))
    return tuple(fams)


def _fmt_families(fams: Sequence[FamilySpec]) -> str:
    return ";".join(f"{f.family_id}:{f.initial_rho}:{f.share}" for f in fams)


# key -> (parser, default, description)
SCHEMA = {
    "world.width": (int, 50, "grid width in cells"),
    "world.height": (int, 50, "grid height in cells"),
    "world.occupancy": (float, 0.6, "fraction of cells initially occupied"),
    "world.families": (_parse_families,
                       (FamilySpec("f1", 0.0, 0.5), FamilySpec("f2", 0.2, 0.5)),
                       "founding families as id:initial_rho:share;..."),
    "payoff.T": (float, 1.1, "temptation payoff (defect vs cooperator)"),
    "payoff.R": (float, 1.0, "reward payoff (mutual cooperation)"),
    "payoff.P": (float, 0.0, "punishment payoff (mutual defection)"),
    "payoff.S": (float, -1.0, "sucker payoff (cooperate vs defector)"),
    "evolution.beta": (float, 0.05, "death probability per agent per step"),
    "evolution.nu": (float, 0.95, "probability of local offspring placement"),
    "evolution.epsilon": (float, 0.05, "probability of deviating from best response"),
    "evolution.p_down": (float, 0.8, "probability of the downward mutation branch"),
    "evolution.mutation_rate": (float, 0.02,
                                "probability a birth mutates (else exact copy)"),
    "run.steps": (int, 2500, "number of simulation steps"),
    "run.snapshot_steps": (_parse_int_list, (0, 250, 500, 1000, 2000, 2500),
                           "times at which to export grid snapshots"),
    "run.replicates": (int, 20, "replicate count for ensembles"),
    "run.seed": (int, 1, "master seed; replicate i uses stream (seed, i)"),
    "run.crossover_window": (int, 50,
                             "persistence window for the payoff crossover"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved configuration of one lattice experiment."""

    width: int = 50
    height: int = 50
    occupancy: float = 0.6
    families: tuple[FamilySpec, ...] = (FamilySpec("f1", 0.0, 0.5),
                                        FamilySpec("f2", 0.2, 0.5))
    params: EvolutionParams = field(default_factory=EvolutionParams)
    steps: int = 2500
    snapshot_steps: tuple[int, ...] = (0, 250, 500, 1000, 2000, 2500)
    replicates: int = 20
    master_seed: int = 1
    crossover_window: int = 50

    def __post_init__(self):
        if self.steps < 1:
            raise ConfigError("run.steps must be >= 1")
        if self.replicates < 1:
            raise ConfigError("run.replicates must be >= 1")


def config_from_mapping(values: dict[str, object]) -> ExperimentConfig:
    """Build an ExperimentConfig from a flat schema-keyed mapping."""
    v = {k: default for k, (_, default, _) in SCHEMA.items()}
    for key, val in values.items():
        if key not in SCHEMA:
            raise ConfigError(f"unknown config key {key!r}")
        v[key] = val
    try:
        matrix = PayoffMatrix(T=v["payoff.T"], R=v["payoff.R"],
                              P=v["payoff.P"], S=v["payoff.S"])
        params = EvolutionParams(beta=v["evolution.beta"],
                                 nu=v["evolution.nu"],
                                 epsilon=v["evolution.epsilon"],
                                 p_down=v["evolution.p_down"],
                                 mutation_rate=v["evolution.mutation_rate"],
                                 matrix=matrix)
        return ExperimentConfig(
            width=v["world.width"], height=v["world.height"],
            occupancy=v["world.occupancy"], families=tuple(v["world.families"]),
            params=params, steps=v["run.steps"],
            snapshot_steps=tuple(v["run.snapshot_steps"]),
            replicates=v["run.replicates"], master_seed=v["run.seed"],
            crossover_window=v["run.crossover_window"],
        )
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e)) from e


def parse_value(key: str, raw: str):
    """Parse one raw string value against the schema."""
    if key not in SCHEMA:
        raise ConfigError(f"unknown config key {key!r}")
    parser = SCHEMA[key][0]
    try:
        return parser(raw)
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({e})") from e


def parse_config_text(text: str) -> dict[str, object]:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in stripped.split("=", 1))
        values[key] = parse_value(key, raw)
    return values


def load_config(path, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Read a config file and apply raw `--set key=value` overrides."""
    values = parse_config_text(Path(path).read_text()) if path else {}
    for key, raw in (overrides or {}).items():
        values[key] = parse_value(key, raw)
    return config_from_mapping(values)


def config_to_mapping(cfg: ExperimentConfig) -> dict[str, str]:
    """Flatten a config back to schema keys (all values as strings)."""
    m = cfg.params.matrix
    return {
        "world.width": str(cfg.width),
        "world.height": str(cfg.height),
        "world.occupancy": repr(cfg.occupancy),
        "world.families": _fmt_families(cfg.families),
        "payoff.T": repr(m.T), "payoff.R": repr(m.R),
        "payoff.P": repr(m.P), "payoff.S": repr(m.S),
        "evolution.beta": repr(cfg.params.beta),
        "evolution.nu": repr(cfg.params.nu),
        "evolution.epsilon": repr(cfg.params.epsilon),
        "evolution.p_down": repr(cfg.params.p_down),
        "evolution.mutation_rate": repr(cfg.params.mutation_rate),
        "run.steps": str(cfg.steps),
        "run.snapshot_steps": ",".join(str(s) for s in cfg.snapshot_steps),
        "run.replicates": str(cfg.replicates),
        "run.seed": str(cfg.master_seed),
        "run.crossover_window": str(cfg.crossover_window),
    }


def with_nu(cfg: ExperimentConfig, nu: float) -> ExperimentConfig:
    return replace(cfg, params=replace(cfg.params, nu=nu))


def schema_help() -> str:
    """One line per config key with its default, for --help output."""
    lines = []
    for key, (_, default, desc) in SCHEMA.items():
        if key == "world.families":
            default = _fmt_families(default)
        elif isinstance(default, tuple):
            default = ",".join(str(x) for x in default)
        lines.append(f"  {key} (default {default}): {desc}")
    return "\n".join(lines)
