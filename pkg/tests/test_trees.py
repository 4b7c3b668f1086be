import numpy as np
import pytest

from riskforge.encoding import EncodedMatrix
from riskforge.errors import DegenerateDataWarning
from riskforge.learners import TrainConfig, predict_label, predict_score, train_decision_tree

from conftest import random_training_matrix
from reference_impl import flatten_engine, flatten_reference, grow_reference


def test_pure_label_single_leaf(separable_matrix):
    mat = EncodedMatrix(
        values=separable_matrix.values,
        labels=np.ones(8, dtype=np.int64),
        column_names=("x",),
        encoder=None,
    )
    model = train_decision_tree(mat, TrainConfig())
    assert model.tree.n_nodes == 1
    assert model.tree.value[0] == 1.0


def test_threshold_separable_depth_one(separable_matrix):
    model = train_decision_tree(separable_matrix, TrainConfig(min_samples_leaf=1))
    tree = model.tree
    assert tree.n_leaves == 2
    assert tree.feature_index[0] == 0
    assert tree.threshold[0] == 5.0  # midpoint of 4 and 6
    assert np.array_equal(predict_label(model, separable_matrix.values), separable_matrix.labels)


def test_xor_needs_depth_two():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]] * 4)
    y = np.array([0, 1, 1, 0] * 4)
    mat = EncodedMatrix(values=X, labels=y, column_names=("a", "b"), encoder=None)
    shallow = train_decision_tree(mat, TrainConfig(max_depth=1, min_samples_leaf=1))
    shallow_acc = (predict_label(shallow, X) == y).mean()
    assert shallow_acc <= 0.5  # no depth-1 tree separates XOR
    deep = train_decision_tree(mat, TrainConfig(max_depth=2, min_samples_leaf=1))
    assert (predict_label(deep, X) == y).all()
    assert deep.tree.max_depth == 2


def test_degenerate_identical_rows_warns():
    X = np.ones((10, 2))
    y = np.array([0, 1] * 5)
    mat = EncodedMatrix(values=X, labels=y, column_names=("a", "b"), encoder=None)
    with pytest.warns(DegenerateDataWarning):
        model = train_decision_tree(mat, TrainConfig())
    assert model.tree.n_nodes == 1
    assert model.tree.value[0] == 0.5


def test_cover_bookkeeping(separable_matrix):
    model = train_decision_tree(separable_matrix, TrainConfig(min_samples_leaf=1))
    t = model.tree
    for i in range(t.n_nodes):
        if t.feature_index[i] >= 0:
            assert t.cover[i] == t.cover[t.left[i]] + t.cover[t.right[i]]


def test_min_samples_leaf_respected():
    rng = np.random.default_rng(5)
    mat = random_training_matrix(rng, n=80, k=4)
    model = train_decision_tree(mat, TrainConfig(min_samples_leaf=7))
    t = model.tree
    leaf_covers = t.cover[t.feature_index < 0]
    assert leaf_covers.min() >= 7


def test_max_depth_respected():
    rng = np.random.default_rng(6)
    mat = random_training_matrix(rng, n=200, k=5)
    model = train_decision_tree(mat, TrainConfig(max_depth=3, min_samples_leaf=1))
    assert model.tree.max_depth <= 3


def test_leaf_values_are_positive_fractions():
    rng = np.random.default_rng(7)
    mat = random_training_matrix(rng, n=100, k=4)
    model = train_decision_tree(mat, TrainConfig(max_depth=2, min_samples_leaf=5))
    scores = predict_score(model, mat.values)
    assert ((scores >= 0) & (scores <= 1)).all()


@pytest.mark.parametrize("trial", range(10))
def test_engine_matches_reference_grower(trial):
    """Dual-route check: the vectorized engine reproduces a naive recursive
    CART with identical split semantics, node for node."""
    rng = np.random.default_rng(100 + trial)
    n = int(rng.integers(20, 90))
    k = int(rng.integers(2, 6))
    mat = random_training_matrix(rng, n=n, k=k)
    depth = int(rng.integers(1, 5))
    min_leaf = int(rng.integers(1, 4))
    model = train_decision_tree(mat, TrainConfig(max_depth=depth, min_samples_leaf=min_leaf))
    ref = grow_reference(mat.values, y=mat.labels.astype(float), criterion="gini", max_depth=depth, min_leaf=min_leaf)
    assert flatten_engine(model.tree) == flatten_reference(ref)


def test_determinism(separable_matrix):
    a = train_decision_tree(separable_matrix, TrainConfig())
    b = train_decision_tree(separable_matrix, TrainConfig())
    assert np.array_equal(a.tree.threshold, b.tree.threshold, equal_nan=True)
    assert np.array_equal(a.tree.value, b.tree.value)


def test_tie_break_prefers_lowest_feature():
    # duplicated column: identical gains, must split on the lower index
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0], [1.0, 1.0]])
    y = np.array([0, 1, 0, 1])
    mat = EncodedMatrix(values=X, labels=y, column_names=("a", "b"), encoder=None)
    model = train_decision_tree(mat, TrainConfig(min_samples_leaf=1))
    assert model.tree.feature_index[0] == 0


def test_node_view_round_trip(separable_matrix):
    model = train_decision_tree(separable_matrix, TrainConfig(min_samples_leaf=1))
    root = model.root
    assert not root.is_leaf
    assert root.left.is_leaf and root.right.is_leaf
    assert root.left.value == 0.0 and root.right.value == 1.0
    assert root.cover == root.left.cover + root.right.cover
