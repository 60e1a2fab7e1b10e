"""Marginal-based fidelity between a synthetic table and real data.

For each k-way column combination the three tables are discretized under a
model fitted on training data only, the empirical cell distributions are
compared by total variation distance (half the L1 difference over the union
of observed cells), and the per-depth score is the plain average over all
C(m, k) combinations.  The same score computed for the holdout table gives
the sampling-noise floor that a synthetic table should be judged against.
"""

from __future__ import annotations

import csv
import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from synthbench.discretize import (
    DiscretizationConfig,
    DiscretizedTable,
    apply_discretizer,
    fit_discretizer,
)
from synthbench.ingest import Table

REPORT_VERSION = 1

# Cell spaces up to this size are counted with a dense bincount; larger ones
# fall back to a sparse union-of-observed-cells merge so memory tracks the
# number of occupied cells rather than the full product space.
_DENSE_CELL_LIMIT = 1 << 20


@dataclass(frozen=True)
class MarginalSpec:
    """A k-way interaction: strictly increasing column indices."""

    columns: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.columns:
            raise ValueError("a marginal needs at least one column")
        if any(b <= a for a, b in zip(self.columns, self.columns[1:])):
            raise ValueError(f"columns must be strictly increasing, got {self.columns}")
        if self.columns[0] < 0:
            raise ValueError("column indices must be non-negative")

    @property
    def depth(self) -> int:
        return len(self.columns)


@dataclass(frozen=True)
class MarginalDistribution:
    """Relative frequency of every observed code combination."""

    spec: MarginalSpec
    cells: Mapping[tuple[int, ...], float]


def enumerate_combinations(column_count: int, depth: int) -> list[MarginalSpec]:
    """All C(m, k) column combinations in lexicographic order."""
    if column_count < 1:
        raise ValueError(f"need at least one column, got {column_count}")
    if not 1 <= depth <= column_count:
        raise ValueError(f"depth must be in 1..{column_count}, got {depth}")
    return [
        MarginalSpec(combo) for combo in itertools.combinations(range(column_count), depth)
    ]


def _joint_keys(dt: DiscretizedTable, columns: tuple[int, ...]) -> tuple[np.ndarray, int]:
    """Mixed-radix key per row over the given columns, plus the space size."""
    space = 1
    for col in columns:
        space *= dt.cardinalities[col]
    keys = dt.codes[:, columns[0]].astype(np.int64)
    for col in columns[1:]:
        keys = keys * dt.cardinalities[col] + dt.codes[:, col]
    return keys, space


def _tvd_from_keys(keys_a: np.ndarray, keys_b: np.ndarray, space: int) -> float:
    n_a = len(keys_a)
    n_b = len(keys_b)
    if space <= _DENSE_CELL_LIMIT:
        count_a = np.bincount(keys_a, minlength=space)
        count_b = np.bincount(keys_b, minlength=space)
    else:
        merged, inverse = np.unique(np.concatenate([keys_a, keys_b]), return_inverse=True)
        count_a = np.bincount(inverse[:n_a], minlength=len(merged))
        count_b = np.bincount(inverse[n_a:], minlength=len(merged))
    return 0.5 * float(np.abs(count_a / n_a - count_b / n_b).sum())


def marginal(dt: DiscretizedTable, spec: MarginalSpec) -> MarginalDistribution:
    """Empirical distribution of one column combination."""
    if dt.row_count == 0:
        raise ValueError("cannot take a marginal of an empty table")
    if spec.columns[-1] >= dt.column_count:
        raise ValueError(
            f"marginal references column {spec.columns[-1]} but table has {dt.column_count}"
        )
    keys, _ = _joint_keys(dt, spec.columns)
    uniques, counts = np.unique(keys, return_counts=True)

    radices = [dt.cardinalities[col] for col in spec.columns]
    cells = {}
    n = dt.row_count
    for key, count in zip(uniques.tolist(), counts.tolist()):
        combo = []
        for radix in reversed(radices):
            key, code = divmod(key, radix)
            combo.append(code)
        cells[tuple(reversed(combo))] = count / n
    return MarginalDistribution(spec, cells)


def tvd(p: MarginalDistribution, q: MarginalDistribution) -> float:
    """Total variation distance over the union of observed cells."""
    if p.spec != q.spec:
        raise ValueError(f"marginals cover different interactions: {p.spec} vs {q.spec}")
    # Sorted union keeps the summation order, and therefore the rounding,
    # independent of argument order.
    total = 0.0
    for cell in sorted(p.cells.keys() | q.cells.keys()):
        total += abs(p.cells.get(cell, 0.0) - q.cells.get(cell, 0.0))
    return 0.5 * total


@dataclass(frozen=True)
class DepthFidelity:
    """Scores for one interaction depth."""

    depth: int
    granularity: int
    column_sets: tuple[tuple[str, ...], ...]
    tvd_synthetic: tuple[float, ...]
    tvd_holdout: tuple[float, ...]
    f_synthetic: float
    f_holdout: float
    ratio: float | None

    @property
    def interaction_count(self) -> int:
        return len(self.column_sets)


@dataclass(frozen=True, eq=False)
class FidelityReport:
    """Per-depth fidelity of one synthetic table against train and holdout."""

    column_names: tuple[str, ...]
    rows_train: int
    rows_holdout: int
    rows_synthetic: int
    config: DiscretizationConfig
    seed: int | None
    by_depth: tuple[DepthFidelity, ...]

    def depth(self, depth: int) -> DepthFidelity:
        for entry in self.by_depth:
            if entry.depth == depth:
                return entry
        raise KeyError(f"report has no depth-{depth} scores")

    @property
    def depths(self) -> tuple[int, ...]:
        return tuple(entry.depth for entry in self.by_depth)

    def to_json_dict(self) -> dict:
        return {
            "report_version": REPORT_VERSION,
            "kind": "fidelity",
            "columns": list(self.column_names),
            "rows": {
                "train": self.rows_train,
                "holdout": self.rows_holdout,
                "synthetic": self.rows_synthetic,
            },
            "config": self.config.to_json_dict(),
            "seed": self.seed,
            "depths": {
                str(entry.depth): {
                    "granularity": entry.granularity,
                    "interactions": entry.interaction_count,
                    "f_synthetic": entry.f_synthetic,
                    "f_holdout": entry.f_holdout,
                    "ratio": entry.ratio,
                }
                for entry in self.by_depth
            },
        }

    def save_json(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def save_interactions_csv(self, path: str | Path) -> None:
        """One row per interaction: depth, columns, and both distances."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["depth", "columns", "tvd_synthetic", "tvd_holdout"])
            for entry in self.by_depth:
                for names, tvd_s, tvd_h in zip(
                    entry.column_sets, entry.tvd_synthetic, entry.tvd_holdout
                ):
                    writer.writerow([entry.depth, "|".join(names), repr(tvd_s), repr(tvd_h)])


def _require_matching_schema(reference: Table, other: Table, label: str) -> None:
    if reference.schema != other.schema:
        raise ValueError(f"{label} table schema does not match the training schema")


def fidelity_report(
    train: Table,
    holdout: Table,
    synthetic: Table,
    config: DiscretizationConfig | None = None,
    depths: Sequence[int] = (1, 2, 3),
    *,
    seed: int | None = None,
) -> FidelityReport:
    """Score a synthetic table against train/holdout at the given depths."""
    config = config or DiscretizationConfig()
    _require_matching_schema(train, holdout, "holdout")
    _require_matching_schema(train, synthetic, "synthetic")
    for label, table in (("train", train), ("holdout", holdout), ("synthetic", synthetic)):
        if table.row_count == 0:
            raise ValueError(f"{label} table is empty")
    if not depths:
        raise ValueError("need at least one interaction depth")

    m = len(train.schema)
    by_depth = []
    for depth in sorted(set(depths)):
        granularity = config.c_for_depth(depth)
        model = fit_discretizer(train, granularity)
        dt_train = apply_discretizer(model, train)
        dt_holdout = apply_discretizer(model, holdout)
        dt_synth = apply_discretizer(model, synthetic)

        column_sets = []
        tvd_synth = []
        tvd_hold = []
        for spec in enumerate_combinations(m, depth):
            keys_t, space = _joint_keys(dt_train, spec.columns)
            keys_h, _ = _joint_keys(dt_holdout, spec.columns)
            keys_s, _ = _joint_keys(dt_synth, spec.columns)
            column_sets.append(tuple(train.schema[i].name for i in spec.columns))
            tvd_synth.append(_tvd_from_keys(keys_t, keys_s, space))
            tvd_hold.append(_tvd_from_keys(keys_t, keys_h, space))

        f_synthetic = float(np.mean(tvd_synth))
        f_holdout = float(np.mean(tvd_hold))
        ratio = f_synthetic / f_holdout if f_holdout > 0.0 else None
        by_depth.append(
            DepthFidelity(
                depth=depth,
                granularity=granularity,
                column_sets=tuple(column_sets),
                tvd_synthetic=tuple(tvd_synth),
                tvd_holdout=tuple(tvd_hold),
                f_synthetic=f_synthetic,
                f_holdout=f_holdout,
                ratio=ratio,
            )
        )

    return FidelityReport(
        column_names=tuple(s.name for s in train.schema),
        rows_train=train.row_count,
        rows_holdout=holdout.row_count,
        rows_synthetic=synthetic.row_count,
        config=config,
        seed=seed,
        by_depth=tuple(by_depth),
    )
