"""Table factories shared by the test modules."""

import numpy as np
from synthbench.ingest import CATEGORICAL, DATETIME, NUMERIC, Column, ColumnSchema, Table


def make_table(spec):
    """Build a table from {name: (kind, values)} or {name: values}.

    Kind is inferred from the first value when not given: floats/ints become
    numeric, strings categorical.  None marks a missing cell.
    """
    schema = []
    columns = []
    for name, payload in spec.items():
        if isinstance(payload, tuple) and len(payload) == 2 and payload[0] in (
            NUMERIC,
            CATEGORICAL,
            DATETIME,
        ):
            kind, raw = payload
        else:
            raw = payload
            first = next((v for v in raw if v is not None), "")
            kind = CATEGORICAL if isinstance(first, str) else NUMERIC
        missing = np.array([v is None for v in raw], dtype=bool)
        if kind == CATEGORICAL:
            values = np.array([("" if v is None else str(v)) for v in raw], dtype=object)
        else:
            values = np.array(
                [(np.nan if v is None else float(v)) for v in raw], dtype=np.float64
            )
        schema.append(ColumnSchema(name, kind))
        columns.append(Column(values, missing))
    return Table(schema, columns)


def random_mixed_table(rng, rows, numeric_cols=2, categorical_cols=2, missing_rate=0.05):
    spec = {}
    for i in range(numeric_cols):
        vals = rng.choice([0.0, 1.5, 2.0, 7.25, 100.0, -3.0], size=rows).tolist()
        spread = rng.normal(0, 10, size=rows)
        vals = [v + s for v, s in zip(vals, spread)]
        spec[f"num{i}"] = (NUMERIC, _with_missing(rng, vals, missing_rate))
    for i in range(categorical_cols):
        alphabet = [f"tok{j}" for j in range(int(rng.integers(2, 9)))]
        vals = rng.choice(alphabet, size=rows).tolist()
        spec[f"cat{i}"] = (CATEGORICAL, _with_missing(rng, vals, missing_rate))
    return make_table(spec)


def _with_missing(rng, values, rate):
    return [None if rng.random() < rate else v for v in values]


