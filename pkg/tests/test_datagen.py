from pathlib import Path

import numpy as np
import pytest

from riskforge.datagen import (
    BINARY_RATES,
    CATEGORICAL_RATES,
    N_OTHER,
    N_SUICIDE,
    build_cohort,
    cohort_schema,
    write_cohort,
)
from riskforge.dataset import load_csv
from riskforge.schema import FeatureSchema
from riskforge.stats import class_conditional_moments

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def test_schema_has_nineteen_features():
    schema = cohort_schema()
    assert len(schema) == 19
    assert schema.label_name == "suicide"
    assert schema.text_columns == ("death_reason",)


def test_cohort_is_deterministic():
    a = build_cohort()
    b = build_cohort()
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.labels, b.labels)


def test_exact_age_moments():
    m = class_conditional_moments(build_cohort(), ["age"])
    assert abs(m.mean("age", 1) - 49.01) < 1e-9
    assert abs(m.std("age", 1) - 20.98) < 1e-9
    assert abs(m.mean("age", 0) - 54.63) < 1e-9
    assert abs(m.std("age", 0) - 23.01) < 1e-9


def test_exact_binary_rates():
    ds = build_cohort()
    m = class_conditional_moments(ds)
    for name, (rate1, rate0) in BINARY_RATES.items():
        assert m.mean(name, 1) == pytest.approx(rate1, abs=1e-12)
        assert m.mean(name, 0) == pytest.approx(rate0, abs=1e-12)


def test_class_sizes():
    ds = build_cohort()
    assert int(ds.labels.sum()) == N_SUICIDE
    assert ds.n_rows == N_SUICIDE + N_OTHER


def test_categorical_counts_exact():
    ds = build_cohort()
    edu = ds.column("education_level").astype(int)
    suicide_edu = edu[ds.labels == 1]
    probs = CATEGORICAL_RATES["education_level"][0]
    for code, p in enumerate(probs):
        assert int((suicide_edu == code).sum()) == round(p * N_SUICIDE)


def test_bundled_files_match_generator(tmp_path):
    """data/ files in the repo must be exactly what the generator emits."""
    csv_path, schema_path = write_cohort(tmp_path)
    assert (DATA_DIR / "cohort_1k.csv").read_bytes() == csv_path.read_bytes()
    assert (DATA_DIR / "cohort_schema.json").read_bytes() == schema_path.read_bytes()


def test_bundled_csv_loads_clean():
    schema = FeatureSchema.load(DATA_DIR / "cohort_schema.json")
    ds = load_csv(DATA_DIR / "cohort_1k.csv", schema)
    assert ds.n_rows == 1000
    assert ds.n_features == 19
    assert not ds.has_missing
    assert ds.ignored_columns == ("record_id",)


def test_death_reason_phrases_present():
    ds = build_cohort()
    text = " ".join(ds.text_values["death_reason"])
    for phrase in ("mental disorders", "chronic", "family disputes", "physical disabilities"):
        assert phrase.split()[0] in text
