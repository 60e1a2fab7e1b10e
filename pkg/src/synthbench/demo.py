"""Seeded generator for a census-like demo dataset.

Produces a table shaped like the classic adult census extract: 48,842 rows
and 15 columns, 6 numeric and 9 categorical, including zero-inflated
capital columns, a near-unique sampling weight, "?" missing markers and a
long-tailed country column.  Columns are driven by shared latent factors so
pairwise and three-way structure is present for fidelity scoring to detect.
"""

from __future__ import annotations

import numpy as np

from synthbench.ingest import CATEGORICAL, NUMERIC, Column, ColumnSchema, Table

DEFAULT_ROWS = 48_842

_EDUCATION = (
    "preschool", "grade-1-4", "grade-5-6", "grade-7-8", "grade-9", "grade-10",
    "grade-11", "grade-12", "hs-grad", "some-college", "assoc-voc", "assoc-acad",
    "bachelors", "masters", "prof-school", "doctorate",
)
_WORKCLASS = (
    "private", "self-emp-small", "self-emp-inc", "federal-gov", "state-gov",
    "local-gov", "unpaid", "never-worked",
)
_OCCUPATION = (
    "cleaners", "machine-op", "farming", "transport", "service", "admin",
    "craft", "sales", "protective", "tech-support", "armed-forces",
    "professional", "managerial", "specialty",
)
_MARITAL = (
    "never-married", "married", "divorced", "separated", "widowed",
    "married-af", "married-absent",
)
_RELATIONSHIP = ("husband", "wife", "own-child", "unmarried", "not-in-family", "other-relative")
_RACE = ("group-a", "group-b", "group-c", "group-d", "group-e")
_SEX = ("female", "male")
_COUNTRY = tuple(f"country-{i:02d}" for i in range(41))


def _categorical(values: np.ndarray, missing: np.ndarray | None = None) -> Column:
    out = values.astype(object)
    if missing is None:
        missing = np.zeros(len(values), dtype=bool)
    else:
        out[missing] = ""
    return Column(out, missing)


def _numeric(values: np.ndarray) -> Column:
    return Column(values.astype(np.float64), np.zeros(len(values), dtype=bool))


def _softmax_pick(rng: np.random.Generator, logits: np.ndarray) -> np.ndarray:
    logits = logits - logits.max(axis=1, keepdims=True)
    probs = np.exp(logits)
    probs /= probs.sum(axis=1, keepdims=True)
    cumulative = probs.cumsum(axis=1)
    draws = rng.random((len(logits), 1))
    return (draws > cumulative).sum(axis=1)


_EDUCATION_PROBS = (
    0.005, 0.012, 0.010, 0.020, 0.016, 0.028, 0.037, 0.013,
    0.318, 0.220, 0.042, 0.033, 0.168, 0.056, 0.012, 0.010,
)


def make_census_table(rows: int = DEFAULT_ROWS, seed: int = 7) -> Table:
    """Generate the demo table; one seed gives one exact table."""
    if rows < 1:
        raise ValueError(f"need at least one row, got {rows}")
    rng = np.random.default_rng(seed)

    edu_idx = rng.choice(len(_EDUCATION), size=rows, p=_EDUCATION_PROBS)
    education = np.take(np.array(_EDUCATION, dtype=object), edu_idx)
    # Reported years of schooling track the credential with recording noise.
    years_jitter = rng.choice([-1.0, 0.0, 1.0], size=rows, p=[0.15, 0.7, 0.15])
    education_years = np.clip(edu_idx + 1.0 + years_jitter, 1, 16)
    edu_grade = (edu_idx - 8.5) / 3.0

    # One mildly shared latent keeps cross-column structure detectable while
    # most of each column's variance stays idiosyncratic.
    skill = 0.55 * edu_grade + 0.85 * rng.normal(0.0, 1.0, rows)

    age = np.clip(np.round(38.0 + 13.0 * rng.normal(0.0, 1.0, rows) + 1.5 * skill), 17, 90)
    elder = rng.random(rows) < 0.004
    age[elder] = 90.0

    occ_logits = np.empty((rows, len(_OCCUPATION)))
    grade = (np.arange(len(_OCCUPATION)) - 6.5) / 3.0
    for j, g in enumerate(grade):
        occ_logits[:, j] = 0.9 * g * skill - 0.16 * g * g
    occ_idx = _softmax_pick(rng, occ_logits + rng.gumbel(0.0, 0.8, (rows, len(_OCCUPATION))))
    occupation = np.take(np.array(_OCCUPATION, dtype=object), occ_idx)

    work_logits = np.zeros((rows, len(_WORKCLASS)))
    work_logits[:, 0] = 1.25
    work_logits[:, 1] = 0.2 * skill + 0.1
    work_logits[:, 2] = 0.35 * skill - 0.5
    work_logits[:, 3] = 0.25 * skill - 0.45 + 0.35 * (occ_idx >= 9)
    work_logits[:, 4] = -0.3 + 0.3 * (occ_idx >= 9)
    work_logits[:, 5] = -0.1 + 0.2 * (occ_idx >= 8)
    work_logits[:, 6] = -2.6 - 0.5 * skill
    work_logits[:, 7] = -3.0 - 0.5 * skill - 0.04 * (age - 17.0)
    work_idx = _softmax_pick(rng, work_logits + rng.gumbel(0.0, 0.5, (rows, len(_WORKCLASS))))
    workclass = np.take(np.array(_WORKCLASS, dtype=object), work_idx)

    hours_base = np.array([40, 42, 48, 40, 40, 40, 22, 8])[work_idx]
    hours = hours_base + np.round(3.2 * skill + rng.normal(0.0, 10.5, rows))
    spike = rng.random(rows)
    hours = np.where(spike < 0.20, 40.0, hours)
    hours = np.where((spike >= 0.20) & (spike < 0.25), 50.0, hours)
    hours = np.clip(hours, 1, 99)

    married_logit = 0.08 * (age - 30.0) + 0.2 * skill
    married_prob = 1.0 / (1.0 + np.exp(-married_logit))
    married = rng.random(rows) < married_prob * 0.72
    marital_other = rng.choice(
        np.array(["never-married", "divorced", "separated", "widowed", "married-absent"], object),
        size=rows,
        p=[0.50, 0.26, 0.08, 0.10, 0.06],
    )
    widow_bias = (age > 65) & ~married & (rng.random(rows) < 0.35)
    marital_other[widow_bias] = "widowed"
    young = (age < 26) & ~married
    marital_other[young & (rng.random(rows) < 0.85)] = "never-married"
    af = rng.random(rows) < 0.012
    marital = np.where(married, "married", marital_other).astype(object)
    marital[af & married] = "married-af"

    sex = np.where(rng.random(rows) < 0.52, "male", "female").astype(object)
    relationship = np.empty(rows, dtype=object)
    relationship[:] = "not-in-family"
    is_married = np.isin(marital.astype(str), ("married", "married-af"))
    relationship[is_married & (sex == "male")] = "husband"
    relationship[is_married & (sex == "female")] = "wife"
    child = ~is_married & (age < 25) & (rng.random(rows) < 0.75)
    relationship[child] = "own-child"
    unmarried = ~is_married & ~child & (rng.random(rows) < 0.3)
    relationship[unmarried] = "unmarried"
    other_rel = ~is_married & ~child & ~unmarried & (rng.random(rows) < 0.08)
    relationship[other_rel] = "other-relative"
    # Household surveys misreport relationships at a small but real rate.
    relabel = rng.random(rows) < 0.10
    relationship[relabel] = rng.choice(
        np.array(_RELATIONSHIP, object), size=int(relabel.sum())
    )

    race = rng.choice(np.array(_RACE, object), size=rows, p=[0.62, 0.18, 0.10, 0.06, 0.04])

    country_tail = 0.8 ** np.arange(1, len(_COUNTRY))
    country_probs = np.concatenate([[0.45], 0.55 * country_tail / country_tail.sum()])
    country = rng.choice(np.array(_COUNTRY, object), size=rows, p=country_probs)

    weight = np.round(np.exp(rng.normal(12.0, 0.55, rows)) / 1.75 + 12285.0)

    gain_mask = rng.random(rows) < np.clip(0.10 + 0.03 * skill, 0.005, 0.3)
    gain = np.zeros(rows)
    gain[gain_mask] = np.round(np.exp(rng.normal(8.3, 0.95, gain_mask.sum())))
    windfall = gain_mask & (rng.random(rows) < 0.02)
    gain[windfall] = 99_999.0
    gain = np.clip(gain, 0, 99_999)

    loss_mask = rng.random(rows) < np.clip(0.095 + 0.012 * skill, 0.005, 0.25)
    loss = np.zeros(rows)
    loss[loss_mask] = np.clip(np.round(rng.normal(1870.0, 320.0, loss_mask.sum())), 155, 3900)

    income_logit = (
        1.0 * skill
        + 0.04 * (age - 38.0)
        - 0.001 * (age - 38.0) ** 2
        + 0.025 * (hours - 40.0)
        + 0.95 * is_married.astype(float)
        + 0.85 * (gain > 4000)
        - 1.15
    )
    income = np.where(
        rng.random(rows) < 1.0 / (1.0 + np.exp(-income_logit)), "over-50k", "at-most-50k"
    ).astype(object)

    workclass_missing = rng.random(rows) < 0.056
    occupation_missing = workclass_missing | (rng.random(rows) < 0.002)
    country_missing = rng.random(rows) < 0.018

    schema = [
        ColumnSchema("age", NUMERIC),
        ColumnSchema("workclass", CATEGORICAL),
        ColumnSchema("sampling_weight", NUMERIC),
        ColumnSchema("education", CATEGORICAL),
        ColumnSchema("education_years", NUMERIC),
        ColumnSchema("marital_status", CATEGORICAL),
        ColumnSchema("occupation", CATEGORICAL),
        ColumnSchema("relationship", CATEGORICAL),
        ColumnSchema("race", CATEGORICAL),
        ColumnSchema("sex", CATEGORICAL),
        ColumnSchema("capital_gain", NUMERIC),
        ColumnSchema("capital_loss", NUMERIC),
        ColumnSchema("hours_per_week", NUMERIC),
        ColumnSchema("native_country", CATEGORICAL),
        ColumnSchema("income_band", CATEGORICAL),
    ]
    columns = [
        _numeric(age),
        _categorical(workclass, workclass_missing),
        _numeric(weight),
        _categorical(education),
        _numeric(education_years),
        _categorical(marital),
        _categorical(occupation, occupation_missing),
        _categorical(relationship),
        _categorical(race),
        _categorical(sex),
        _numeric(gain),
        _numeric(loss),
        _numeric(hours),
        _categorical(country, country_missing),
        _categorical(income),
    ]
    return Table(schema, columns)


def main() -> None:
    import argparse

    from synthbench.ingest import save_table

    parser = argparse.ArgumentParser(description="write the census-like demo dataset")
    parser.add_argument("output", help="destination CSV path")
    parser.add_argument("--rows", type=int, default=DEFAULT_ROWS)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    save_table(make_census_table(args.rows, args.seed), args.output)


if __name__ == "__main__":
    main()
