"""Loading delimited text files into typed columnar tables.

Column kinds are inferred conservatively from the cell text: a column is
numeric only if every non-missing cell parses as a finite number, datetime
only if every non-missing cell parses under one of the configured formats,
and categorical otherwise.  A single non-conforming value demotes the whole
column to categorical.  Datetime cells are stored as epoch seconds (naive
timestamps are treated as UTC) so downstream binning handles them exactly
like numeric columns.

Cells are stripped of surrounding whitespace before interpretation, and a
cell whose stripped text is one of the missing tokens ("" and "?" by
default) is recorded in the column's missing mask rather than its values.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"
DATETIME = "datetime"
KINDS = (NUMERIC, CATEGORICAL, DATETIME)

DEFAULT_MISSING_TOKENS = frozenset({"", "?"})
DEFAULT_DATETIME_FORMATS = (
    "%Y-%m-%d",
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M:%S.%f",
)


@dataclass(frozen=True)
class ColumnSchema:
    """Name and kind of one column."""

    name: str
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(
                f"unknown kind {self.kind!r} for column {self.name!r}; "
                f"expected one of {', '.join(KINDS)}"
            )


@dataclass(eq=False)
class Column:
    """Values and missing mask for one column.

    ``values`` is float64 for numeric and datetime columns (epoch seconds for
    the latter) and an object array of ``str`` for categorical columns.
    Positions flagged in ``missing`` hold placeholders (NaN or "") and must
    never be read as data.
    """

    values: np.ndarray
    missing: np.ndarray

    def __post_init__(self) -> None:
        self.missing = np.asarray(self.missing, dtype=bool)
        if self.values.shape != self.missing.shape or self.values.ndim != 1:
            raise ValueError("column values and missing mask must be 1-d and equal length")


@dataclass(eq=False)
class Table:
    """An ordered collection of named, typed columns of equal length."""

    schema: list[ColumnSchema]
    columns: list[Column]

    def __post_init__(self) -> None:
        if len(self.schema) != len(self.columns):
            raise ValueError("schema and column payloads differ in length")
        names = [s.name for s in self.schema]
        if len(set(names)) != len(names):
            raise ValueError("column names must be unique")
        lengths = {len(c.values) for c in self.columns}
        if len(lengths) > 1:
            raise ValueError(f"columns have unequal row counts: {sorted(lengths)}")

    @property
    def row_count(self) -> int:
        return 0 if not self.columns else len(self.columns[0].values)

    @property
    def column_names(self) -> list[str]:
        return [s.name for s in self.schema]

    def column(self, name: str) -> Column:
        for schema, col in zip(self.schema, self.columns):
            if schema.name == name:
                return col
        raise KeyError(f"no column named {name!r}")

    def kind_of(self, name: str) -> str:
        for schema in self.schema:
            if schema.name == name:
                return schema.kind
        raise KeyError(f"no column named {name!r}")

    def take(self, rows: np.ndarray | Sequence[int]) -> "Table":
        """Row subset (or re-ordering) as a new table."""
        idx = np.asarray(rows, dtype=np.int64)
        cols = [Column(c.values[idx], c.missing[idx]) for c in self.columns]
        return Table(list(self.schema), cols)

    def select_columns(self, names: Sequence[str]) -> "Table":
        """Column subset in the given order as a new table."""
        schema = []
        cols = []
        for name in names:
            schema.append(ColumnSchema(name, self.kind_of(name)))
            cols.append(self.column(name))
        return Table(schema, cols)

    def equals(self, other: "Table") -> bool:
        """True when schemas match and all non-missing values agree exactly."""
        if self.schema != other.schema or self.row_count != other.row_count:
            return False
        for a, b in zip(self.columns, other.columns):
            if not np.array_equal(a.missing, b.missing):
                return False
            keep = ~a.missing
            if not np.array_equal(a.values[keep], b.values[keep]):
                return False
        return True


def _parse_number(token: str) -> float | None:
    try:
        value = float(token)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _parse_datetime(token: str, formats: Sequence[str]) -> float | None:
    for fmt in formats:
        try:
            parsed = datetime.strptime(token, fmt)
        except ValueError:
            continue
        return parsed.replace(tzinfo=timezone.utc).timestamp()
    return None


def _normalize_override(
    schema_override: Mapping[str, str] | Sequence[ColumnSchema] | None,
) -> dict[str, str]:
    if schema_override is None:
        return {}
    if isinstance(schema_override, Mapping):
        pairs = list(schema_override.items())
    else:
        pairs = [(entry.name, entry.kind) for entry in schema_override]
    override = {}
    for name, kind in pairs:
        if kind not in KINDS:
            raise ValueError(f"schema override declares unknown kind {kind!r} for {name!r}")
        override[name] = kind
    return override


def load_schema_override(path: str | Path) -> dict[str, str]:
    """Read a column-name-to-kind mapping from a small JSON config file."""
    import json

    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
    ):
        raise ValueError(f"schema override {path} must be a flat name-to-kind mapping")
    return _normalize_override(raw)


def load_table(
    path: str | Path,
    schema_override: Mapping[str, str] | Sequence[ColumnSchema] | None = None,
    *,
    delimiter: str = ",",
    missing_tokens: Iterable[str] = DEFAULT_MISSING_TOKENS,
    datetime_formats: Sequence[str] = DEFAULT_DATETIME_FORMATS,
) -> Table:
    """Load a delimited text file with a header row into a typed Table."""
    missing = frozenset(missing_tokens)
    override = _normalize_override(schema_override)

    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    with fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    if not rows:
        raise ValueError(f"{path} is empty: expected at least a header row")

    header = [cell.strip() for cell in rows[0]]
    if len(set(header)) != len(header):
        raise ValueError(f"{path} has duplicate column names in its header")
    unknown = sorted(set(override) - set(header))
    if unknown:
        raise ValueError(f"schema override names columns not in {path}: {', '.join(unknown)}")

    width = len(header)
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ValueError(
                f"{path} line {lineno} is ragged: expected {width} fields, got {len(row)}"
            )

    body = rows[1:]
    schema: list[ColumnSchema] = []
    columns: list[Column] = []
    for j, name in enumerate(header):
        cells = [row[j].strip() for row in body]
        mask = np.array([cell in missing for cell in cells], dtype=bool)
        present = [cell for cell, is_missing in zip(cells, mask) if not is_missing]

        kind = override.get(name)
        if kind is None:
            kind = _infer_kind(present, datetime_formats)
        schema.append(ColumnSchema(name, kind))
        columns.append(
            _build_column(name, kind, cells, mask, present, datetime_formats)
        )
    return Table(schema, columns)


def _infer_kind(present: list[str], datetime_formats: Sequence[str]) -> str:
    if not present:
        return CATEGORICAL
    if all(_parse_number(cell) is not None for cell in present):
        return NUMERIC
    if all(_parse_datetime(cell, datetime_formats) is not None for cell in present):
        return DATETIME
    return CATEGORICAL


def _build_column(
    name: str,
    kind: str,
    cells: list[str],
    mask: np.ndarray,
    present: list[str],
    datetime_formats: Sequence[str],
) -> Column:
    n = len(cells)
    if kind == CATEGORICAL:
        values = np.empty(n, dtype=object)
        for i, cell in enumerate(cells):
            values[i] = "" if mask[i] else cell
        return Column(values, mask)

    values = np.full(n, np.nan, dtype=np.float64)
    parse = (
        _parse_number
        if kind == NUMERIC
        else lambda cell: _parse_datetime(cell, datetime_formats)
    )
    for i, cell in enumerate(cells):
        if mask[i]:
            continue
        parsed = parse(cell)
        if parsed is None:
            raise ValueError(
                f"column {name!r} is declared {kind} but value {cell!r} does not parse"
            )
        values[i] = parsed
    return Column(values, mask)


def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 2**53:
        return str(int(value))
    return repr(float(value))


def _format_datetime(value: float) -> str:
    stamp = datetime.fromtimestamp(value, tz=timezone.utc)
    if stamp.microsecond == 0:
        return stamp.strftime("%Y-%m-%dT%H:%M:%S")
    return stamp.strftime("%Y-%m-%dT%H:%M:%S.%f")


def save_table(table: Table, path: str | Path, *, delimiter: str = ",") -> None:
    """Write a table back to delimited text; missing cells become empty fields."""
    formatters = []
    for schema in table.schema:
        if schema.kind == NUMERIC:
            formatters.append(_format_number)
        elif schema.kind == DATETIME:
            formatters.append(_format_datetime)
        else:
            formatters.append(str)

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow(table.column_names)
        n = table.row_count
        cols = table.columns
        for i in range(n):
            writer.writerow(
                ""
                if col.missing[i]
                else fmt(col.values[i])
                for col, fmt in zip(cols, formatters)
            )


def split_train_holdout(table: Table, seed: int) -> tuple[Table, Table]:
    """Seeded 50/50 row partition; an odd row goes to the training half.

    Rows keep their original relative order inside each half, so repeated
    calls with one seed are reproducible row for row.
    """
    n = table.row_count
    if n < 2:
        raise ValueError(f"need at least 2 rows to split, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    cut = (n + 1) // 2
    train_idx = np.sort(perm[:cut])
    holdout_idx = np.sort(perm[cut:])
    return table.take(train_idx), table.take(holdout_idx)
