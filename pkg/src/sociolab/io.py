"""File formats: stats.csv, grid snapshot CSVs, cluster reports, run manifests.

Floats are written with repr() so every file round-trips bit-exactly back
to the in-memory values. Missing conditional means (e.g. no cooperators)
are written as empty fields.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .metrics import CoopCluster, StepStats

STATS_BASE_COLUMNS = ["step", "mean_rho", "coop_fraction", "mean_payoff_coop",
                      "mean_payoff_def", "n_coop", "n_def"]


def stats_columns(family_ids) -> list[str]:
    return STATS_BASE_COLUMNS + [f"n_family_{fid}" for fid in family_ids]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_stats_csv(path, stats: list[StepStats], family_ids) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(stats_columns(family_ids))
        for st in stats:
            row = [st.step, _fmt(st.mean_rho), _fmt(st.coop_fraction),
                   _fmt(st.mean_payoff_coop), _fmt(st.mean_payoff_def),
                   st.n_coop, st.n_def]
            row += [st.family_counts.get(fid, 0) for fid in family_ids]
            wr.writerow(row)


def read_stats_csv(path) -> list[StepStats]:
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if header[:7] != STATS_BASE_COLUMNS:
            raise ValueError(f"unexpected stats header in {path}: {header[:7]}")
        fam_ids = [c[len("n_family_"):] for c in header[7:]]
        out = []
        for row in rd:
            out.append(StepStats(
                step=int(row[0]),
                mean_rho=float(row[1]),
                coop_fraction=float(row[2]),
                mean_payoff_coop=float(row[3]) if row[3] else None,
                mean_payoff_def=float(row[4]) if row[4] else None,
                n_coop=int(row[5]),
                n_def=int(row[6]),
                family_counts={fid: int(v) for fid, v in zip(fam_ids, row[7:])},
            ))
        return out


def write_snapshot_csv(path, codes: np.ndarray) -> None:
    """height rows x width columns of cell codes (-1 empty)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        for row in codes:
            wr.writerow(int(v) for v in row)


def read_snapshot_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [[int(v) for v in row] for row in csv.reader(fh) if row]
    return np.array(rows, dtype=np.int64)


def write_cluster_report(path, step: int, clusters: list[CoopCluster]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["step", "cluster_rank", "size", "n_families",
                     "mixed_family"])
        for rank, c in enumerate(clusters):
            wr.writerow([step, rank, c.size, len(c.families),
                         str(c.mixed_family).lower()])


def write_manifest(path, entries: dict[str, object]) -> None:
    """Flat `key = value` manifest, same shape as the config format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for key, value in entries.items():
            fh.write(f"{key} = {_fmt(value)}\n")


def read_manifest(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, _, raw = stripped.partition("=")
        out[key.strip()] = raw.strip()
    return out
