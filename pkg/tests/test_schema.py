import pytest

from riskforge.errors import SchemaError, VersionMismatchError
from riskforge.schema import FeatureSchema, FeatureSpec


def spec_numeric(name="age"):
    return FeatureSpec(name=name, kind="numeric", numeric_range=(0.0, 120.0))


def test_duplicate_feature_names_rejected():
    with pytest.raises(SchemaError):
        FeatureSchema(features=(spec_numeric(), spec_numeric()), label_name="y")


def test_label_collision_rejected():
    with pytest.raises(SchemaError):
        FeatureSchema(features=(spec_numeric("y"),), label_name="y")


def test_duplicate_codes_rejected():
    with pytest.raises(SchemaError):
        FeatureSpec(name="g", kind="categorical", categories=((0, "a"), (0, "b")))


def test_negative_code_rejected():
    with pytest.raises(SchemaError):
        FeatureSpec(name="g", kind="categorical", categories=((-1, "a"), (0, "b")))


def test_numeric_range_order():
    with pytest.raises(SchemaError):
        FeatureSpec(name="x", kind="numeric", numeric_range=(2.0, 1.0))


def test_index_name_bijection_stable_over_roundtrip(small_schema, tmp_path):
    path = tmp_path / "schema.json"
    small_schema.save(path)
    loaded = FeatureSchema.load(path)
    assert loaded == small_schema
    assert loaded.feature_names == small_schema.feature_names
    for j, name in enumerate(loaded.feature_names):
        assert loaded.index_of(name) == j
    assert loaded.fingerprint() == small_schema.fingerprint()


def test_version_mismatch(tmp_path):
    path = tmp_path / "schema.json"
    path.write_text('{"format_version": 99, "label_name": "y", "features": []}')
    with pytest.raises(VersionMismatchError):
        FeatureSchema.load(path)


def test_is_binary(small_schema):
    assert small_schema.is_binary("flag")
    assert not small_schema.is_binary("grade")
    assert not small_schema.is_binary("age")
