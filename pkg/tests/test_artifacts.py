import json

import numpy as np
import pytest

from conftest import random_training_matrix
from riskforge.dataset import Dataset
from riskforge.encoding import encode_for_linear, encode_for_trees
from riskforge.errors import FingerprintMismatchError, VersionMismatchError
from riskforge.learners import (
    TrainConfig,
    load_artifact,
    predict_score,
    save_artifact,
    train_decision_tree,
    train_gradient_boosted,
    train_linear_svm,
    train_logistic_regression,
    train_perceptron,
    train_random_forest,
)
from riskforge.schema import FeatureSchema, FeatureSpec


@pytest.fixture(scope="module")
def artifact_dataset():
    schema = FeatureSchema(
        features=(
            FeatureSpec("age", "numeric"),
            FeatureSpec("flag", "categorical", categories=((0, "n"), (1, "y"))),
            FeatureSpec("grade", "categorical", categories=((0, "a"), (1, "b"), (2, "c"))),
        ),
        label_name="label",
    )
    rng = np.random.default_rng(0)
    n = 120
    values = np.column_stack(
        [rng.normal(50, 12, n), rng.integers(0, 2, n).astype(float), rng.integers(0, 3, n).astype(float)]
    )
    labels = ((values[:, 0] > 50) & (values[:, 1] > 0)).astype(np.int64)
    labels[:3] = [1, 0, 1]
    return Dataset(schema=schema, values=values, labels=labels)


TRAINERS = {
    "tree": [train_decision_tree, train_random_forest, train_gradient_boosted],
    "linear": [train_logistic_regression, train_perceptron, train_linear_svm],
}


@pytest.mark.parametrize(
    "encoding,trainer",
    [(enc, t) for enc, ts in TRAINERS.items() for t in ts],
    ids=lambda v: getattr(v, "__name__", v),
)
def test_roundtrip_identical_predictions_on_probes(encoding, trainer, artifact_dataset, tmp_path):
    import warnings

    mat = encode_for_trees(artifact_dataset) if encoding == "tree" else encode_for_linear(artifact_dataset)
    cfg = TrainConfig(n_trees=5, n_rounds=5, lr_max_epochs=30, svm_epochs=10)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        model = trainer(mat, cfg)
    path = tmp_path / "model.json"
    save_artifact(model, path, artifact_dataset.schema, train_config=cfg)
    loaded = load_artifact(path)
    rng = np.random.default_rng(1)
    probes = np.column_stack(
        [rng.normal(50, 12, 100), rng.integers(0, 2, 100).astype(float), rng.integers(0, 3, 100).astype(float)]
    )
    before = predict_score(model, probes)
    after = predict_score(loaded.model, probes)
    assert np.array_equal(before, after)  # bit-identical, not merely close


def test_fingerprint_tamper_detected(artifact_dataset, tmp_path):
    model = train_decision_tree(encode_for_trees(artifact_dataset), TrainConfig())
    path = tmp_path / "model.json"
    save_artifact(model, path, artifact_dataset.schema)
    doc = json.loads(path.read_text())
    doc["schema_fingerprint"] = "0" * 64
    path.write_text(json.dumps(doc))
    with pytest.raises(FingerprintMismatchError):
        load_artifact(path)


def test_schema_mismatch_on_load(artifact_dataset, tmp_path):
    model = train_decision_tree(encode_for_trees(artifact_dataset), TrainConfig())
    path = tmp_path / "model.json"
    save_artifact(model, path, artifact_dataset.schema)
    other = FeatureSchema(features=(FeatureSpec("z", "numeric"),), label_name="y")
    with pytest.raises(FingerprintMismatchError):
        load_artifact(path, schema=other)


def test_version_mismatch_names_versions(artifact_dataset, tmp_path):
    model = train_decision_tree(encode_for_trees(artifact_dataset), TrainConfig())
    path = tmp_path / "model.json"
    save_artifact(model, path, artifact_dataset.schema)
    doc = json.loads(path.read_text())
    doc["format_version"] = 0
    path.write_text(json.dumps(doc))
    with pytest.raises(VersionMismatchError) as err:
        load_artifact(path)
    assert "0" in str(err.value) and "1" in str(err.value)


def test_background_and_defaults_roundtrip(artifact_dataset, tmp_path):
    model = train_decision_tree(encode_for_trees(artifact_dataset), TrainConfig())
    path = tmp_path / "model.json"
    background = artifact_dataset.values[:16]
    defaults = {"age": 50.0, "flag": 0.0, "grade": 1.0}
    save_artifact(
        model,
        path,
        artifact_dataset.schema,
        metrics={"accuracy": [0.9, 0.01]},
        background=background,
        imputation_defaults=defaults,
    )
    loaded = load_artifact(path)
    assert np.array_equal(loaded.background, background)
    assert loaded.imputation_defaults == defaults
    assert loaded.metrics == {"accuracy": [0.9, 0.01]}
    assert loaded.family == "decision_tree"
    assert loaded.train_config == TrainConfig()
