"""
Tests for trait parsing and binarization
"""

import math

import numpy as np
import pytest

from config import PANTHERIA_ROLE_CONFIG
from fca.binarize import (
    BinarizationSchema,
    FeatureRule,
    Role,
    TraitColumn,
    TraitTable,
    apply_schema,
    infer_schema,
    load_role_config,
    load_schema,
    parse_labeled_csv,
    parse_trait_csv,
    role_config_from_dict,
    save_schema,
)
from fca.context import ObjectSet, derive_extent
from fca.errors import SchemaError
from fca.generate import synthetic_trait_csv

ROLES = role_config_from_dict({
    "id_column": "id",
    "columns": {"F": "numeric", "LAT": "latitude", "LON": "longitude"}
})


def _table(values, role=Role.NUMERIC, name="F"):
    ids = tuple(f"s{i}" for i in range(len(values)))
    return TraitTable(ids, (TraitColumn(name, role, np.array(values, dtype=float)),))


@pytest.mark.parametrize("cell", ["-999", "", "NA", "NaN", "-999.0", " NA "])
def test_missing_tokens(cell):
    table = parse_trait_csv(f"id,F,LAT,LON\ns1,{cell},10,10\n", ROLES)
    assert math.isnan(table.column("F").values[0])


def test_plain_number():
    table = parse_trait_csv("id,F,LAT,LON\ns1,3.5,10,10\n", ROLES)
    assert table.column("F").values[0] == 3.5


@pytest.mark.parametrize("cell", ["abc", "inf", "-inf"])
def test_unparseable_cells(cell):
    with pytest.raises(SchemaError) as excinfo:
        parse_trait_csv(f"id,F,LAT,LON\ns1,{cell},10,10\n", ROLES)
    assert excinfo.value.column == "F"


def test_unknown_column_in_role_config():
    with pytest.raises(SchemaError) as excinfo:
        parse_trait_csv("id,F,LAT\ns1,1,10\n", ROLES)
    assert excinfo.value.column == "LON"


def test_unknown_role_rejected():
    with pytest.raises(SchemaError):
        load_role_config('{"id_column": "id", "columns": {"F": "ordinal"}}')
    with pytest.raises(SchemaError):
        load_role_config("not json")


def test_duplicate_ids_rejected():
    with pytest.raises(SchemaError):
        parse_trait_csv("id,F,LAT,LON\ns1,1,1,1\ns1,2,2,2\n", ROLES)


def test_median_thresholds():
    assert infer_schema(_table([1, 2, 3, 4, math.nan])).features[0].thresholds == [2.5]
    assert infer_schema(_table([5])).features[0].thresholds == [5.0]


def test_all_missing_column():
    with pytest.raises(SchemaError) as excinfo:
        infer_schema(_table([math.nan, math.nan]))
    assert excinfo.value.column == "F"


def test_numeric_categories():
    table = _table([1, 2, 3, 4, math.nan, 2.5])
    ctx = apply_schema(table, infer_schema(table))
    assert ctx.attribute_names == ("F=HIGH", "F=LOW", "F=NAN")
    names = [ctx.attribute_names_of(derive_extent(ctx, ObjectSet.from_indices([i], 6))) for i in range(6)]
    assert names == [["F=LOW"], ["F=LOW"], ["F=HIGH"], ["F=HIGH"], ["F=NAN"], ["F=LOW"]]


@pytest.mark.parametrize("value,category", [
    (-90, "S"), (-30.5, "S"), (-30, "TROPICAL"), (0, "TROPICAL"),
    (29.9, "TROPICAL"), (30, "N"), (45, "N"), (90, "N")
])
def test_latitude_bins(value, category):
    rule = infer_schema(_table([0], Role.LATITUDE, "LAT")).features[0]
    assert rule.category_of(value) == category


@pytest.mark.parametrize("value,category", [(-180, "WEST"), (-25.1, "WEST"), (-25, "EAST"), (0, "EAST"), (180, "EAST")])
def test_longitude_split(value, category):
    rule = infer_schema(_table([0], Role.LONGITUDE, "LON")).features[0]
    assert rule.category_of(value) == category


def test_coordinate_out_of_range():
    with pytest.raises(SchemaError):
        infer_schema(_table([95], Role.LATITUDE, "LAT"))
    rule = infer_schema(_table([10], Role.LONGITUDE, "LON")).features[0]
    with pytest.raises(SchemaError):
        rule.category_of(200)


def test_rule_shape_validated():
    with pytest.raises(ValueError):
        FeatureRule(name="F", role=Role.NUMERIC, thresholds=[1, 2], categories=["HIGH", "LOW", "NAN"])
    with pytest.raises(ValueError):
        FeatureRule(name="F", role=Role.LATITUDE, thresholds=[30, -30], categories=["S", "TROPICAL", "N", "NAN"])


def test_one_bit_per_source_column():
    roles = role_config_from_dict(PANTHERIA_ROLE_CONFIG)
    table = parse_trait_csv(synthetic_trait_csv(300, seed=11), roles)
    schema = infer_schema(table)
    ctx = apply_schema(table, schema)

    assert len(table.columns) == 15
    assert ctx.n_attributes == 47
    assert ctx.n_objects == 300
    offset = 0
    for rule in schema.features:
        width = len(rule.categories)
        block = ((1 << width) - 1) << offset
        for row in ctx.incidence_rows:
            assert (row & block).bit_count() == 1
        offset += width


def test_schema_reuse_gives_same_attributes():
    roles = role_config_from_dict(PANTHERIA_ROLE_CONFIG)
    first = parse_trait_csv(synthetic_trait_csv(200, seed=1), roles)
    second = parse_trait_csv(synthetic_trait_csv(50, seed=2), roles)
    schema = load_schema(save_schema(infer_schema(first)))
    assert apply_schema(second, schema).attribute_names == apply_schema(first, schema).attribute_names
    assert schema == infer_schema(first)


def test_schema_must_match_table():
    table = _table([1, 2, 3])
    other = infer_schema(_table([1, 2], name="G"))
    with pytest.raises(SchemaError):
        apply_schema(table, other)
    wrong_role = BinarizationSchema(features=[
        FeatureRule(name="F", role=Role.LONGITUDE, thresholds=[-25], categories=["WEST", "EAST", "NAN"])
    ])
    with pytest.raises(SchemaError):
        apply_schema(table, wrong_role)


def test_load_schema_rejects_garbage():
    with pytest.raises(SchemaError):
        load_schema('{"features": [{"name": "F", "role": "numeric", "thresholds": [], "categories": []}]}')


def test_labeled_csv(contrast_dataset):
    assert contrast_dataset.table.n_objects == 12
    assert contrast_dataset.positive_indices == [0, 1, 2, 3, 4, 5]
    assert contrast_dataset.negative_indices == [6, 7, 8, 9, 10, 11]


def test_labeled_csv_needs_label_column():
    with pytest.raises(SchemaError):
        parse_labeled_csv("id,F,LAT,LON\ns1,1,1,1\n", ROLES)


def test_take_reorders_rows():
    table = _table([1, 2, 3])
    taken = table.take([2, 0])
    assert taken.object_ids == ("s2", "s0")
    assert list(taken.column("F").values) == [3.0, 1.0]


def test_short_row_rejected():
    with pytest.raises(SchemaError) as excinfo:
        parse_trait_csv("id,F,LAT,LON\ns1,1,1,1\ns2,3\n", ROLES)
    assert excinfo.value.column == "LAT"
    assert "s2" in str(excinfo.value)


def test_long_row_rejected():
    with pytest.raises(SchemaError):
        parse_trait_csv("id,F,LAT,LON\ns1,1,1,1,1\n", ROLES)


def test_duplicate_header_rejected():
    with pytest.raises(SchemaError) as excinfo:
        parse_trait_csv("id,F,F,LAT,LON\ns1,1,2,1,1\n", ROLES)
    assert excinfo.value.column == "F"


def test_header_only_table():
    table = parse_trait_csv("id,F,LAT,LON\n", ROLES)
    assert table.n_objects == 0
    assert [c.name for c in table.columns] == ["F", "LAT", "LON"]


LABELED = role_config_from_dict({
    "id_column": "id",
    "label_column": "y",
    "positive_label": "1",
    "columns": {"F": "numeric"}
})


def test_blank_label_rejected():
    with pytest.raises(SchemaError) as excinfo:
        parse_labeled_csv("id,F,y\ns1,1,1\ns2,2, \n", LABELED)
    assert excinfo.value.column == "y"
    assert "s2" in str(excinfo.value)


def test_truncated_label_rejected():
    with pytest.raises(SchemaError) as excinfo:
        parse_labeled_csv("id,F,y\ns1,1,1\ns2,2\n", LABELED)
    assert excinfo.value.column == "y"


def test_any_other_label_is_negative_without_negative_label():
    dataset = parse_labeled_csv("id,F,y\ns1,1,1\ns2,2,0\ns3,3,maybe\n", LABELED)
    assert dataset.labels == (True, False, False)


def test_negative_label_restricts_values():
    roles = role_config_from_dict({**LABELED.model_dump(mode="json"), "negative_label": "0"})
    assert parse_labeled_csv("id,F,y\ns1,1,1\ns2,2,0\n", roles).labels == (True, False)
    with pytest.raises(SchemaError) as excinfo:
        parse_labeled_csv("id,F,y\ns1,1,1\ns2,2,0\ns3,3,maybe\n", roles)
    assert "maybe" in str(excinfo.value)


def test_negative_label_must_differ():
    with pytest.raises(SchemaError):
        role_config_from_dict({**LABELED.model_dump(mode="json"), "negative_label": "1"})


@pytest.mark.parametrize("n", [1, 2, 3, 10, 11, 100, 101])
def test_median_split_is_balanced(n):
    rng = np.random.default_rng(n)
    table = _table(rng.permutation(n).astype(float) * 1.5)
    ctx = apply_schema(table, infer_schema(table))
    high = sum(row & 1 for row in ctx.incidence_rows)
    low = sum((row >> 1) & 1 for row in ctx.incidence_rows)
    assert high + low == n
    assert abs(high - low) <= 1


@pytest.mark.parametrize("seed", range(5))
def test_binarization_ignores_row_order(seed):
    roles = role_config_from_dict(PANTHERIA_ROLE_CONFIG)
    table = parse_trait_csv(synthetic_trait_csv(80, seed=seed), roles)
    perm = np.random.default_rng(seed).permutation(table.n_objects)

    ctx = apply_schema(table, infer_schema(table))
    shuffled = table.take(perm)
    permuted = apply_schema(shuffled, infer_schema(shuffled))

    assert infer_schema(shuffled) == infer_schema(table)
    assert permuted.attribute_names == ctx.attribute_names
    assert permuted.object_names == tuple(ctx.object_names[i] for i in perm)
    assert permuted.incidence_rows == tuple(ctx.incidence_rows[i] for i in perm)
