import numpy as np
import pytest

from riskforge.dataset import Dataset
from riskforge.schema import FeatureSchema, FeatureSpec


@pytest.fixture(scope="session")
def small_schema() -> FeatureSchema:
    return FeatureSchema(
        features=(
            FeatureSpec("age", "numeric"),
            FeatureSpec("flag", "categorical", categories=((0, "no"), (1, "yes"))),
            FeatureSpec("grade", "categorical", categories=((0, "low"), (1, "mid"), (2, "high"))),
        ),
        label_name="label",
        text_columns=("note",),
    )


@pytest.fixture
def small_dataset(small_schema) -> Dataset:
    values = np.array(
        [
            [50.0, 1, 0],
            [30.0, 0, 1],
            [70.0, 1, 2],
            [40.0, 0, 0],
            [60.0, 1, 1],
            [20.0, 0, 2],
        ]
    )
    labels = np.array([1, 0, 1, 0, 1, 0])
    notes = ("chronic disease", "chronic pain", "mental disorders", "", "family disputes", "the and of")
    return Dataset(schema=small_schema, values=values, labels=labels, text_values={"note": notes})


@pytest.fixture(scope="session")
def separable_matrix():
    """1-D threshold-separable fixture: x < 5 -> class 0, else class 1."""
    from riskforge.encoding import EncodedMatrix

    X = np.array([[1.0], [2.0], [3.0], [4.0], [6.0], [7.0], [8.0], [9.0]])
    y = np.array([0, 0, 0, 0, 1, 1, 1, 1])
    return EncodedMatrix(values=X, labels=y, column_names=("x",), encoder=None)


def random_training_matrix(rng: np.random.Generator, n: int = 60, k: int = 5):
    """Mixed discrete/continuous columns with a learnable signal."""
    from riskforge.encoding import EncodedMatrix

    cols = []
    for j in range(k):
        if rng.random() < 0.6:
            cols.append(rng.integers(0, 4, n).astype(float))
        else:
            cols.append(rng.normal(0.0, 1.0, n))
    X = np.column_stack(cols)
    signal = X @ rng.normal(0.0, 1.0, k)
    y = (signal + rng.normal(0.0, 0.8, n) > np.median(signal)).astype(np.int64)
    if y.min() == y.max():  # ensure both classes
        y[0] = 1 - y[0]
    return EncodedMatrix(values=X, labels=y, column_names=tuple(f"f{j}" for j in range(k)), encoder=None)
