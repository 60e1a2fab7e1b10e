"""Reference generators that bracket the fidelity/privacy tradeoff.

``copy_identity`` is the memorizing extreme, ``sample_independent`` the
structure-free extreme, and ``perturb`` sweeps between them: it bootstraps
training rows and replaces each cell, independently with probability p, by
the same-column value of a uniformly chosen different training row.  Cell
replacement preserves every univariate marginal in expectation while
progressively destroying joint structure, so a sweep over p traces a curve
any useful synthesizer should beat.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from synthbench.ingest import Column, Table


@dataclass(frozen=True)
class PerturbationConfig:
    """Noise level, output size and seed for the perturbation baseline."""

    noise_probability: float
    output_rows: int = 50_000
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.noise_probability <= 1.0:
            raise ValueError(f"noise probability must be in [0, 1], got {self.noise_probability}")
        if self.output_rows < 0:
            raise ValueError(f"output rows must be non-negative, got {self.output_rows}")


def _bootstrap_indices(rng: np.random.Generator, train_rows: int, output_rows: int) -> np.ndarray:
    return rng.integers(0, train_rows, size=output_rows)


def perturb(train: Table, config: PerturbationConfig) -> Table:
    """Bootstrap rows, then swap cells to random other rows' values at rate p.

    Draw order is fixed (source rows, then the replacement mask, then donor
    rows) so a zero-noise run reproduces ``copy_identity`` row for row at
    the same seed.
    """
    n_train = train.row_count
    if n_train == 0:
        raise ValueError("training table is empty")
    rng = np.random.default_rng(config.seed)
    n_out = config.output_rows
    m = len(train.schema)

    src = _bootstrap_indices(rng, n_train, n_out)
    replace = rng.random((n_out, m)) < config.noise_probability
    if n_train > 1:
        donors = rng.integers(0, n_train - 1, size=(n_out, m))
        donors += donors >= src[:, np.newaxis]
    else:
        donors = np.zeros((n_out, m), dtype=np.int64)

    columns = []
    for j, col in enumerate(train.columns):
        pick = np.where(replace[:, j], donors[:, j], src)
        columns.append(Column(col.values[pick], col.missing[pick]))
    return Table(list(train.schema), columns)


def copy_identity(train: Table, output_rows: int, seed: int = 0) -> Table:
    """Bootstrap training rows verbatim; the memorizing extreme."""
    if train.row_count == 0:
        raise ValueError("training table is empty")
    if output_rows < 0:
        raise ValueError(f"output rows must be non-negative, got {output_rows}")
    rng = np.random.default_rng(seed)
    return train.take(_bootstrap_indices(rng, train.row_count, output_rows))


def sample_independent(train: Table, output_rows: int, seed: int = 0) -> Table:
    """Sample each column independently from its own empirical distribution.

    Univariate marginals match training up to sampling noise while all
    cross-column structure is destroyed; the structure-free extreme.
    """
    if train.row_count == 0:
        raise ValueError("training table is empty")
    if output_rows < 0:
        raise ValueError(f"output rows must be non-negative, got {output_rows}")
    rng = np.random.default_rng(seed)
    n_train = train.row_count
    columns = []
    for col in train.columns:
        pick = rng.integers(0, n_train, size=output_rows)
        columns.append(Column(col.values[pick], col.missing[pick]))
    return Table(list(train.schema), columns)


def _build_perturb(train: Table, params: Mapping) -> Table:
    config = PerturbationConfig(
        noise_probability=float(params["noise"]),
        output_rows=int(params.get("rows", 50_000)),
        seed=int(params.get("seed", 0)),
    )
    return perturb(train, config)


def _build_identity(train: Table, params: Mapping) -> Table:
    return copy_identity(train, int(params.get("rows", 50_000)), int(params.get("seed", 0)))


def _build_independent(train: Table, params: Mapping) -> Table:
    return sample_independent(train, int(params.get("rows", 50_000)), int(params.get("seed", 0)))


BASELINE_BUILDERS: dict[str, Callable[[Table, Mapping], Table]] = {
    "perturb": _build_perturb,
    "identity": _build_identity,
    "independent": _build_independent,
}

_BASELINE_PARAMS: dict[str, frozenset[str]] = {
    "perturb": frozenset({"noise", "rows", "seed"}),
    "identity": frozenset({"rows", "seed"}),
    "independent": frozenset({"rows", "seed"}),
}


def build_baseline(name: str, train: Table, params: Mapping | None = None) -> Table:
    """Generate a baseline table by registry name."""
    if name not in BASELINE_BUILDERS:
        raise ValueError(
            f"unknown baseline {name!r}; expected one of {', '.join(sorted(BASELINE_BUILDERS))}"
        )
    params = dict(params or {})
    unknown = sorted(set(params) - _BASELINE_PARAMS[name])
    if unknown:
        raise ValueError(f"baseline {name!r} got unknown parameters: {', '.join(unknown)}")
    if name == "perturb" and "noise" not in params:
        raise ValueError("baseline 'perturb' requires a 'noise' parameter")
    return BASELINE_BUILDERS[name](train, params)
