"""Training-fitted discretization of mixed-type tables into small code spaces.

Numeric and datetime columns get quantile bins fitted on the training table
alone: the interior cut points are the i/c quantiles (lower interpolation),
deduplicated, and a value v maps to the number of cut points strictly below
it.  Bins are therefore left-open, (a, b], which keeps a heavy point mass
(such as a column that is mostly zero) inside the lowest code instead of
splitting it across two codes.  Values outside the training range clamp into
the first or last bin.

Categorical columns with more than c distinct training values lump the
(c_j - c + 1) least frequent values (ties broken by value) into a single
group so at most c regular codes remain.  Kept values are coded by
descending training frequency.  The last regular code doubles as the
overflow code: values unseen in training map there, joining the lump group
when one exists.

Every column additionally reserves its final code for missing values, so
applying a model never fails on unexpected missing cells; whether training
itself contained missing values is recorded on the rule.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from synthbench.ingest import CATEGORICAL, KINDS, Table

SERIAL_VERSION = 1


@dataclass(frozen=True)
class DiscretizationConfig:
    """Code-space sizes per interaction depth plus the privacy scan size."""

    c_univariate: int = 100
    c_bivariate: int = 10
    c_threeway: int = 5
    c_privacy: int = 10

    def __post_init__(self) -> None:
        for field_name in ("c_univariate", "c_bivariate", "c_threeway", "c_privacy"):
            value = getattr(self, field_name)
            if not isinstance(value, int) or value < 2:
                raise ValueError(f"{field_name} must be an integer >= 2, got {value!r}")

    def c_for_depth(self, depth: int) -> int:
        by_depth = {1: self.c_univariate, 2: self.c_bivariate, 3: self.c_threeway}
        if depth not in by_depth:
            raise ValueError(f"no code-space size configured for depth {depth}")
        return by_depth[depth]

    def to_json_dict(self) -> dict:
        return {
            "c_univariate": self.c_univariate,
            "c_bivariate": self.c_bivariate,
            "c_threeway": self.c_threeway,
            "c_privacy": self.c_privacy,
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "DiscretizationConfig":
        allowed = {"c_univariate", "c_bivariate", "c_threeway", "c_privacy"}
        unknown = sorted(set(raw) - allowed)
        if unknown:
            raise ValueError(f"unknown discretization settings: {', '.join(unknown)}")
        return cls(**raw)


@dataclass(frozen=True)
class QuantileBins:
    """Interior cut points, ascending; code = count of cut points < value."""

    edges: tuple[float, ...]

    @property
    def n_regular(self) -> int:
        return len(self.edges) + 1


@dataclass(frozen=True)
class CategoryMap:
    """Kept values in code order plus one trailing lump-or-overflow code."""

    kept: tuple[str, ...]
    has_lump_group: bool
    lumped: tuple[str, ...] = ()

    @property
    def n_regular(self) -> int:
        return len(self.kept) + 1

    @property
    def overflow_code(self) -> int:
        return len(self.kept)


@dataclass(frozen=True)
class ColumnRule:
    """Fitted encoding for one column."""

    name: str
    kind: str
    mapper: Union[QuantileBins, CategoryMap]
    has_missing_code: bool

    @property
    def n_regular(self) -> int:
        return self.mapper.n_regular

    @property
    def missing_code(self) -> int:
        return self.mapper.n_regular

    @property
    def cardinality(self) -> int:
        return self.mapper.n_regular + 1


@dataclass(frozen=True)
class DiscretizationModel:
    """Per-column rules fitted at one code-space size."""

    granularity: int
    rules: tuple[ColumnRule, ...]

    def to_json_dict(self) -> dict:
        columns = []
        for rule in self.rules:
            entry: dict = {
                "name": rule.name,
                "kind": rule.kind,
                "has_missing_code": rule.has_missing_code,
                "cardinality": rule.cardinality,
            }
            if isinstance(rule.mapper, QuantileBins):
                entry["bins"] = {"edges": list(rule.mapper.edges)}
            else:
                entry["categories"] = {
                    "kept": list(rule.mapper.kept),
                    "has_lump_group": rule.mapper.has_lump_group,
                    "lumped": list(rule.mapper.lumped),
                }
            columns.append(entry)
        return {
            "serial_version": SERIAL_VERSION,
            "granularity": self.granularity,
            "columns": columns,
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "DiscretizationModel":
        if raw.get("serial_version") != SERIAL_VERSION:
            raise ValueError(f"unsupported model serialization version {raw.get('serial_version')!r}")
        rules = []
        for entry in raw["columns"]:
            kind = entry["kind"]
            if kind not in KINDS:
                raise ValueError(f"model declares unknown kind {kind!r}")
            if "bins" in entry:
                mapper: Union[QuantileBins, CategoryMap] = QuantileBins(
                    tuple(float(e) for e in entry["bins"]["edges"])
                )
            else:
                cats = entry["categories"]
                mapper = CategoryMap(
                    tuple(cats["kept"]),
                    bool(cats["has_lump_group"]),
                    tuple(cats["lumped"]),
                )
            rule = ColumnRule(entry["name"], kind, mapper, bool(entry["has_missing_code"]))
            if rule.cardinality != entry["cardinality"]:
                raise ValueError(f"cardinality mismatch in serialized rule for {rule.name!r}")
            rules.append(rule)
        return cls(int(raw["granularity"]), tuple(rules))

    @property
    def fingerprint(self) -> str:
        payload = json.dumps(self.to_json_dict(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path: str | Path) -> "DiscretizationModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass(frozen=True, eq=False)
class DiscretizedTable:
    """Integer codes for every cell of a table under one model."""

    codes: np.ndarray
    cardinalities: tuple[int, ...]
    column_names: tuple[str, ...]
    provenance: str

    def __post_init__(self) -> None:
        if self.codes.ndim != 2:
            raise ValueError("codes must be a 2-d array")
        if self.codes.shape[1] != len(self.cardinalities) or len(self.cardinalities) != len(
            self.column_names
        ):
            raise ValueError("codes, cardinalities and column names disagree on column count")
        if any(card < 2 for card in self.cardinalities):
            raise ValueError("all cardinalities must be >= 2")
        if self.codes.size:
            lows = self.codes.min(axis=0)
            highs = self.codes.max(axis=0)
            if lows.min() < 0 or (highs >= np.asarray(self.cardinalities)).any():
                raise ValueError("codes out of range for declared cardinalities")

    @property
    def row_count(self) -> int:
        return self.codes.shape[0]

    @property
    def column_count(self) -> int:
        return self.codes.shape[1]


def _fit_numeric(values: np.ndarray, missing: np.ndarray, c: int, name: str) -> QuantileBins:
    present = values[~missing]
    if present.size == 0:
        warnings.warn(
            f"column {name!r} has no observed values; its rule degenerates to a single code",
            RuntimeWarning,
            stacklevel=3,
        )
        return QuantileBins(())
    probs = np.arange(1, c) / c
    cuts = np.quantile(present, probs, method="lower")
    return QuantileBins(tuple(float(e) for e in np.unique(cuts)))


def _fit_categorical(values: np.ndarray, missing: np.ndarray, c: int, name: str) -> CategoryMap:
    counts = Counter(values[~missing].tolist())
    if not counts:
        warnings.warn(
            f"column {name!r} has no observed values; its rule degenerates to a single code",
            RuntimeWarning,
            stacklevel=3,
        )
        return CategoryMap((), False)
    distinct = len(counts)
    if distinct > c:
        by_rarity = sorted(counts, key=lambda v: (counts[v], v))
        lumped = tuple(by_rarity[: distinct - c + 1])
        kept_values = set(counts) - set(lumped)
    else:
        lumped = ()
        kept_values = set(counts)
    kept = tuple(sorted(kept_values, key=lambda v: (-counts[v], v)))
    return CategoryMap(kept, bool(lumped), lumped)


def fit_discretizer(train: Table, c: int) -> DiscretizationModel:
    """Fit per-column encoding rules on the training table alone."""
    if not isinstance(c, int) or c < 2:
        raise ValueError(f"code-space size must be an integer >= 2, got {c!r}")
    if train.row_count == 0:
        raise ValueError("cannot fit a discretizer on an empty table")
    rules = []
    for schema, col in zip(train.schema, train.columns):
        if schema.kind == CATEGORICAL:
            mapper: Union[QuantileBins, CategoryMap] = _fit_categorical(
                col.values, col.missing, c, schema.name
            )
        else:
            mapper = _fit_numeric(col.values, col.missing, c, schema.name)
        rules.append(ColumnRule(schema.name, schema.kind, mapper, bool(col.missing.any())))
    return DiscretizationModel(c, tuple(rules))


def apply_discretizer(model: DiscretizationModel, table: Table) -> DiscretizedTable:
    """Encode a table under a fitted model; total over all cell contents."""
    available = {s.name: s.kind for s in table.schema}
    for rule in model.rules:
        if rule.name not in available:
            raise ValueError(f"table lacks column {rule.name!r} required by the model")
        if available[rule.name] != rule.kind:
            raise ValueError(
                f"column {rule.name!r} is {available[rule.name]} but the model expects {rule.kind}"
            )
    extra = sorted(set(available) - {rule.name for rule in model.rules})
    if extra:
        raise ValueError(f"table has columns unknown to the model: {', '.join(extra)}")

    n = table.row_count
    codes = np.empty((n, len(model.rules)), dtype=np.int32)
    for j, rule in enumerate(model.rules):
        col = table.column(rule.name)
        if isinstance(rule.mapper, QuantileBins):
            edges = np.asarray(rule.mapper.edges, dtype=np.float64)
            # searchsorted(side="left") counts edges strictly below each value,
            # which is exactly the left-open bin index.
            with np.errstate(invalid="ignore"):
                column_codes = np.searchsorted(edges, col.values, side="left").astype(np.int32)
        else:
            lookup = {value: code for code, value in enumerate(rule.mapper.kept)}
            overflow = rule.mapper.overflow_code
            uniques, inverse = np.unique(col.values.astype(object), return_inverse=True)
            mapped = np.array(
                [lookup.get(value, overflow) for value in uniques.tolist()], dtype=np.int32
            )
            column_codes = mapped[inverse]
        column_codes[col.missing] = rule.missing_code
        codes[:, j] = column_codes

    return DiscretizedTable(
        codes,
        tuple(rule.cardinality for rule in model.rules),
        tuple(rule.name for rule in model.rules),
        model.fingerprint,
    )
