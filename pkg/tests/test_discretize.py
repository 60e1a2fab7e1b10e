import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synthbench.discretize import (
    CategoryMap,
    DiscretizationConfig,
    DiscretizationModel,
    DiscretizedTable,
    QuantileBins,
    apply_discretizer,
    fit_discretizer,
)
from synthbench.ingest import CATEGORICAL, NUMERIC

from helpers import make_table, random_mixed_table


def fit_apply(train, c, target=None):
    model = fit_discretizer(train, c)
    return model, apply_discretizer(model, target if target is not None else train)


def numeric_table(values):
    return make_table({"x": (NUMERIC, values)})


def categorical_table(values):
    return make_table({"x": (CATEGORICAL, values)})


def codes_of(disc, index=0):
    return disc.codes[:, index]


class TestConfig:
    def test_defaults(self):
        config = DiscretizationConfig()
        assert (config.c_univariate, config.c_bivariate, config.c_threeway) == (100, 10, 5)
        assert config.c_privacy == 10

    def test_c_for_depth(self):
        config = DiscretizationConfig()
        assert [config.c_for_depth(d) for d in (1, 2, 3)] == [100, 10, 5]
        with pytest.raises(ValueError):
            config.c_for_depth(4)

    def test_rejects_small_or_fractional_sizes(self):
        with pytest.raises(ValueError):
            DiscretizationConfig(c_univariate=1)
        with pytest.raises(ValueError):
            DiscretizationConfig(c_bivariate=2.5)

    def test_json_round_trip(self):
        config = DiscretizationConfig(c_univariate=7, c_privacy=3)
        assert DiscretizationConfig.from_json_dict(config.to_json_dict()) == config


class TestNumericBins:
    def test_distinct_values_fewer_than_c_get_their_own_codes(self):
        table = numeric_table([5.0, 1.0, 3.0, 1.0, 5.0])
        _, disc = fit_apply(table, 10)
        assert codes_of(disc).tolist() == [2, 0, 1, 0, 2]

    def test_zero_heavy_column_isolates_zero_in_lowest_code(self):
        table = numeric_table([0.0] * 9 + [10.0])
        _, disc = fit_apply(table, 4)
        assert codes_of(disc).tolist() == [0] * 9 + [1]

    def test_majority_value_never_shares_a_code_upward(self):
        rng = np.random.default_rng(0)
        values = np.where(rng.random(1000) < 0.85, 0.0, rng.integers(1, 40, 1000)).tolist()
        table = numeric_table(values)
        _, disc = fit_apply(table, 100)
        zero_codes = {code for code, v in zip(codes_of(disc).tolist(), values) if v == 0.0}
        nonzero_codes = {code for code, v in zip(codes_of(disc).tolist(), values) if v != 0.0}
        assert zero_codes == {0}
        assert 0 not in nonzero_codes

    def test_intervals_are_open_below_closed_above(self):
        model, _ = fit_apply(numeric_table([1.0, 2.0, 3.0, 4.0]), 2)
        rule = model.rules[0]
        assert isinstance(rule.mapper, QuantileBins)
        edge = rule.mapper.edges[0]
        probe = numeric_table([edge, np.nextafter(edge, np.inf)])
        disc = apply_discretizer(model, probe)
        assert codes_of(disc).tolist() == [0, 1]

    def test_unseen_values_clamp_to_end_bins(self):
        model, _ = fit_apply(numeric_table(list(range(1, 11))), 5)
        probe = numeric_table([-1000.0, 1000.0])
        disc = apply_discretizer(model, probe)
        assert codes_of(disc).tolist() == [0, model.rules[0].n_regular - 1]

    def test_bin_count_never_exceeds_c(self):
        rng = np.random.default_rng(3)
        table = numeric_table(rng.normal(size=5000).tolist())
        model, disc = fit_apply(table, 8)
        assert model.rules[0].n_regular <= 8
        assert len(set(codes_of(disc).tolist())) <= 8

    def test_all_missing_numeric_column_warns_and_maps_to_missing_code(self):
        table = make_table({"x": (NUMERIC, [None, None, None])})
        with pytest.warns(RuntimeWarning, match="no observed values"):
            model = fit_discretizer(table, 5)
        disc = apply_discretizer(model, table)
        assert codes_of(disc).tolist() == [model.rules[0].missing_code] * 3


class TestCategoryLumping:
    def test_twelve_distinct_values_at_c_ten(self):
        values = []
        for i, count in enumerate([40, 35, 30, 25, 20, 15, 10, 8, 6, 4, 2, 1]):
            values.extend([f"v{i:02d}"] * count)
        table = categorical_table(values)
        model, disc = fit_apply(table, 10)
        mapper = model.rules[0].mapper
        assert isinstance(mapper, CategoryMap)
        assert mapper.kept == tuple(f"v{i:02d}" for i in range(9))
        assert mapper.lumped == ("v11", "v10", "v09")
        assert mapper.has_lump_group
        assert model.rules[0].cardinality == 11
        lump_mass = int((codes_of(disc) == mapper.overflow_code).sum())
        assert lump_mass == 4 + 2 + 1

    def test_no_lump_group_when_cardinality_fits(self):
        table = categorical_table(["a", "b", "a", "c"])
        model, disc = fit_apply(table, 10)
        mapper = model.rules[0].mapper
        assert mapper.kept == ("a", "b", "c")
        assert not mapper.has_lump_group
        assert mapper.lumped == ()
        assert set(codes_of(disc).tolist()) == {0, 1, 2}

    def test_kept_order_is_frequency_then_value(self):
        table = categorical_table(["b"] * 3 + ["a"] * 3 + ["c"] * 5)
        model, _ = fit_apply(table, 10)
        assert model.rules[0].mapper.kept == ("c", "a", "b")

    def test_lump_ties_break_by_value(self):
        values = ["keep"] * 10 + ["x"] * 2 + ["y"] * 2 + ["z"] * 2
        model, _ = fit_apply(categorical_table(values), 3)
        mapper = model.rules[0].mapper
        assert mapper.lumped == ("x", "y")
        assert mapper.kept == ("keep", "z")

    def test_lumped_values_have_minimal_total_frequency(self):
        rng = np.random.default_rng(11)
        values = [f"v{rng.integers(0, 30):02d}" for _ in range(2000)]
        model, _ = fit_apply(categorical_table(values), 8)
        mapper = model.rules[0].mapper
        freq = {v: values.count(v) for v in set(values)}
        lump_total = sum(freq[v] for v in mapper.lumped)
        worst_kept = min(freq[v] for v in mapper.kept)
        assert all(freq[v] <= worst_kept for v in mapper.lumped)
        assert lump_total <= len(mapper.lumped) * worst_kept

    def test_unseen_category_maps_to_overflow_code(self):
        model, _ = fit_apply(categorical_table(["a", "a", "b"]), 10)
        disc = apply_discretizer(model, categorical_table(["zebra", "a"]))
        assert codes_of(disc).tolist() == [model.rules[0].mapper.overflow_code, 0]


class TestMissingHandling:
    def test_missing_code_is_reserved_even_without_train_missing(self):
        model, _ = fit_apply(numeric_table([1.0, 2.0, 3.0]), 5)
        rule = model.rules[0]
        assert not rule.has_missing_code
        assert rule.cardinality == rule.n_regular + 1
        probe = make_table({"x": (NUMERIC, [None, 2.0])})
        disc = apply_discretizer(model, probe)
        assert codes_of(disc).tolist() == [rule.missing_code, 1]

    def test_train_missing_sets_flag(self):
        model, disc = fit_apply(categorical_table(["a", None, "b"]), 5)
        rule = model.rules[0]
        assert rule.has_missing_code
        assert codes_of(disc).tolist()[1] == rule.missing_code

    def test_missing_is_the_highest_code(self):
        model, _ = fit_apply(categorical_table(["a", "b", None]), 5)
        rule = model.rules[0]
        assert rule.missing_code == rule.cardinality - 1
        assert rule.missing_code > rule.mapper.overflow_code


class TestModelSerialization:
    def test_round_trip_preserves_fingerprint_and_codes(self, tmp_path, rng):
        table = random_mixed_table(rng, 300, 2, 2, missing_rate=0.1)
        model = fit_discretizer(table, 7)
        path = tmp_path / "model.json"
        model.save(path)
        back = DiscretizationModel.load(path)
        assert back == model
        assert back.fingerprint == model.fingerprint
        assert np.array_equal(
            apply_discretizer(back, table).codes, apply_discretizer(model, table).codes
        )

    def test_serialized_form_is_human_readable_json(self, tmp_path):
        model = fit_discretizer(categorical_table(["a", "b", "a"]), 4)
        path = tmp_path / "model.json"
        model.save(path)
        text = path.read_text()
        assert '"granularity": 4' in text
        assert '"kept"' in text and "\n" in text

    def test_fit_is_deterministic(self):
        table = categorical_table(["a", "b", "c", "a"])
        assert fit_discretizer(table, 3).fingerprint == fit_discretizer(table, 3).fingerprint

    def test_version_is_checked(self):
        model = fit_discretizer(categorical_table(["a"]), 4)
        raw = model.to_json_dict()
        raw["serial_version"] = 99
        with pytest.raises(ValueError, match="version"):
            DiscretizationModel.from_json_dict(raw)


class TestApplyErrors:
    def test_fit_rejects_c_below_two(self):
        with pytest.raises(ValueError, match=">= 2"):
            fit_discretizer(numeric_table([1.0]), 1)

    def test_fit_rejects_empty_table(self):
        table = make_table({"x": (NUMERIC, [])})
        with pytest.raises(ValueError, match="empty"):
            fit_discretizer(table, 5)

    def test_apply_rejects_missing_column(self):
        model = fit_discretizer(make_table({"x": (NUMERIC, [1.0]), "y": (NUMERIC, [2.0])}), 5)
        with pytest.raises(ValueError, match="lacks column"):
            apply_discretizer(model, numeric_table([1.0]))

    def test_apply_rejects_kind_mismatch(self):
        model = fit_discretizer(numeric_table([1.0, 2.0]), 5)
        with pytest.raises(ValueError, match="expects numeric"):
            apply_discretizer(model, categorical_table(["1", "2"]))

    def test_apply_rejects_extra_column(self):
        model = fit_discretizer(numeric_table([1.0, 2.0]), 5)
        probe = make_table({"x": (NUMERIC, [1.0]), "extra": (NUMERIC, [0.0])})
        with pytest.raises(ValueError, match="unknown to the model"):
            apply_discretizer(model, probe)

    def test_discretized_table_bounds_are_checked(self):
        with pytest.raises(ValueError, match="out of range"):
            DiscretizedTable(
                codes=np.array([[5]], dtype=np.int32),
                cardinalities=(3,),
                column_names=("x",),
                provenance="p",
            )


@settings(max_examples=25, deadline=None)
@given(
    rows=st.integers(min_value=1, max_value=120),
    c=st.integers(min_value=2, max_value=12),
    seed=st.integers(min_value=0, max_value=10_000),
)
def test_train_codes_stay_within_budget(rows, c, seed):
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        table = random_mixed_table(rng, rows, 2, 2, missing_rate=0.15)
        model = fit_discretizer(table, c)
        disc = apply_discretizer(model, table)
    for j, rule in enumerate(model.rules):
        column_codes = disc.codes[:, j]
        assert column_codes.min() >= 0
        assert column_codes.max() < rule.cardinality
        present = column_codes[column_codes != rule.missing_code]
        assert len(np.unique(present)) <= c
        assert disc.cardinalities[j] == rule.cardinality


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_apply_is_pure(seed):
    rng = np.random.default_rng(seed)
    train = random_mixed_table(rng, 80, 1, 1, missing_rate=0.1)
    probe = random_mixed_table(np.random.default_rng(seed + 1), 40, 1, 1, missing_rate=0.1)
    model = fit_discretizer(train, 5)
    first = apply_discretizer(model, probe)
    second = apply_discretizer(model, probe)
    assert np.array_equal(first.codes, second.codes)
    assert first.provenance == second.provenance == model.fingerprint
