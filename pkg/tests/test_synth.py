import numpy as np
import pytest

from riskforge import synth
from riskforge.dataset import Dataset
from riskforge.errors import SchemaMismatchError, SingleClassError
from riskforge.schema import FeatureSchema, FeatureSpec


@pytest.fixture(scope="module")
def fit_dataset():
    schema = FeatureSchema(
        features=(
            FeatureSpec("age", "numeric"),
            FeatureSpec("anger", "categorical", categories=((0, "no"), (1, "yes"))),
            FeatureSpec("grade", "categorical", categories=((0, "a"), (1, "b"), (2, "c"))),
        ),
        label_name="label",
    )
    rng = np.random.default_rng(11)
    n1, n0 = 40, 60
    age = np.concatenate([rng.normal(49, 20, n1), rng.normal(55, 23, n0)])
    anger = np.concatenate([(rng.random(n1) < 0.8), (rng.random(n0) < 0.1)]).astype(float)
    grade = np.concatenate([rng.integers(0, 3, n1), rng.integers(0, 3, n0)]).astype(float)
    labels = np.concatenate([np.ones(n1, dtype=int), np.zeros(n0, dtype=int)])
    return Dataset(schema=schema, values=np.column_stack([age, anger, grade]), labels=labels)


def test_fit_marginals_are_observed_frequencies(fit_dataset):
    s = synth.fit(fit_dataset)
    anger = s.marginal(1, "anger")
    observed = fit_dataset.values[fit_dataset.labels == 1, 1]
    assert anger.probabilities[1] == pytest.approx(observed.mean())
    assert sum(anger.probabilities) == pytest.approx(1.0, abs=1e-9)
    assert s.class_prior == pytest.approx(fit_dataset.labels.mean())


def test_fit_counting_example():
    schema = FeatureSchema(
        features=(FeatureSpec("anger", "categorical", categories=((0, "no"), (1, "yes"))),),
        label_name="y",
    )
    values = np.array([[1.0], [1.0], [1.0], [1.0], [0.0], [0.0], [1.0]])
    labels = np.array([1, 1, 1, 1, 1, 0, 0])
    ds = Dataset(schema=schema, values=values, labels=labels)
    s = synth.fit(ds)
    assert s.marginal(1, "anger").probabilities == (pytest.approx(0.2), pytest.approx(0.8))


def test_fit_single_row_class_is_point_mass():
    schema = FeatureSchema(
        features=(FeatureSpec("g", "categorical", categories=((0, "a"), (1, "b"))),),
        label_name="y",
    )
    ds = Dataset(schema=schema, values=np.array([[1.0], [0.0], [0.0]]), labels=np.array([1, 0, 0]))
    s = synth.fit(ds)
    assert s.marginal(1, "g").probabilities == (0.0, 1.0)


def test_fit_requires_both_classes(fit_dataset):
    solo = fit_dataset.take(np.flatnonzero(fit_dataset.labels == 1))
    with pytest.raises(SingleClassError):
        synth.fit(solo)


def test_generate_deterministic_and_schema_valid(fit_dataset):
    s = synth.fit(fit_dataset)
    a = synth.generate(s, 500, seed=3)
    b = synth.generate(s, 500, seed=3)
    assert np.array_equal(a.values, b.values) and np.array_equal(a.labels, b.labels)
    c = synth.generate(s, 500, seed=4)
    assert not np.array_equal(a.values, c.values)
    # schema validity: declared codes and clipped numerics
    assert set(np.unique(a.values[:, 1])) <= {0.0, 1.0}
    assert set(np.unique(a.values[:, 2])) <= {0.0, 1.0, 2.0}
    for label in (0, 1):
        pool = s.marginal(label, "age")
        sub = a.values[a.labels == label, 0]
        assert sub.min() >= pool.clip_min - 1e-12 and sub.max() <= pool.clip_max + 1e-12


def test_generate_constant_feature_stays_constant():
    schema = FeatureSchema(
        features=(FeatureSpec("c", "categorical", categories=((0, "a"), (1, "b"))),),
        label_name="y",
    )
    ds = Dataset(schema=schema, values=np.array([[1.0]] * 5 + [[0.0]] * 5), labels=np.array([1] * 5 + [0] * 5))
    s = synth.fit(ds)
    out = synth.generate(s, 200, seed=0)
    assert set(np.unique(out.values[out.labels == 1, 0])) == {1.0}
    assert set(np.unique(out.values[out.labels == 0, 0])) == {0.0}


def test_generate_converges_to_marginals(fit_dataset):
    s = synth.fit(fit_dataset)
    big = synth.generate(s, 200_000, seed=9)
    p_fit = s.marginal(1, "anger").probabilities[1]
    p_syn = big.values[big.labels == 1, 1].mean()
    assert abs(p_syn - p_fit) <= 0.02


def test_generate_class_ratio_override(fit_dataset):
    s = synth.fit(fit_dataset)
    balanced = synth.generate(s, 20_000, seed=5, class_ratio=0.5)
    assert abs(balanced.labels.mean() - 0.5) < 0.02


def test_fidelity_identity(fit_dataset):
    report = synth.fidelity_report(fit_dataset, fit_dataset)
    assert report.max_delta_mean == 0.0
    assert report.max_delta_std == 0.0
    assert "independen" in report.notes


def test_fidelity_label_flip_shows_anger_gap(fit_dataset):
    flipped = Dataset(
        schema=fit_dataset.schema,
        values=fit_dataset.values.copy(),
        labels=1 - fit_dataset.labels,
    )
    report = synth.fidelity_report(fit_dataset, flipped)
    m1 = fit_dataset.values[fit_dataset.labels == 1, 1].mean()
    m0 = fit_dataset.values[fit_dataset.labels == 0, 1].mean()
    assert report.delta_mean("anger", 1) == pytest.approx(abs(m1 - m0))


def test_fidelity_schema_mismatch(fit_dataset, small_dataset):
    with pytest.raises(SchemaMismatchError):
        synth.fidelity_report(fit_dataset, small_dataset)


def test_averaged_fidelity_small_deltas(fit_dataset):
    s = synth.fit(fit_dataset)
    report = synth.averaged_fidelity(fit_dataset, s, 30_000, seeds=[1, 2, 3])
    for name in ("anger", "grade"):
        for label in (0, 1):
            assert report.rows[(name, label)]["delta_mean"] <= 0.02
    assert report.seeds == (1, 2, 3)


def test_synthesizer_roundtrip(fit_dataset, tmp_path):
    s = synth.fit(fit_dataset)
    path = tmp_path / "synth.json"
    s.save(path)
    loaded = synth.Synthesizer.load(path)
    a = synth.generate(s, 100, seed=7)
    b = synth.generate(loaded, 100, seed=7)
    assert np.array_equal(a.values, b.values)


def test_bandwidth_silverman_rule():
    values = np.sort(np.random.default_rng(0).normal(0, 1, 200))
    q75, q25 = np.percentile(values, [75, 25])
    expected = 0.5 * (q75 - q25) / 200 ** 0.2
    assert synth._bandwidth(values) == pytest.approx(expected)
