import numpy as np
import pytest

from conftest import random_training_matrix
from riskforge.dataset import Dataset
from riskforge.encoding import encode_for_linear, encode_for_trees
from riskforge.errors import TooManyFeaturesError, UnknownFeatureError, UnsupportedModelError
from riskforge.explain import (
    BackgroundSet,
    beeswarm_export,
    dependence_values,
    explain_row,
    gain_importance,
    global_mean_abs_shap,
    shapley_brute_force,
    shapley_linear,
    shapley_sampling,
    shapley_tree_exact,
)
from riskforge.learners import (
    LinearModel,
    TrainConfig,
    train_decision_tree,
    train_gradient_boosted,
    train_linear_svm,
    train_logistic_regression,
    train_random_forest,
)
from riskforge.learners.tree_engine import FlatTree
from riskforge.learners.trees import CLASS_PROBABILITY, TreeModel
from riskforge.schema import FeatureSchema, FeatureSpec


def constant_tree_model(value, names=("a", "b")):
    tree = FlatTree(
        feature_index=np.array([-1]),
        threshold=np.array([np.nan]),
        left=np.array([-1]),
        right=np.array([-1]),
        value=np.array([float(value)]),
        cover=np.array([1]),
        gain=np.array([0.0]),
    )
    return TreeModel(tree=tree, leaf_semantics=CLASS_PROBABILITY, feature_names=names)


def stump_model(names=("a", "b")):
    """x0 >= 0 -> 1 else 0."""
    tree = FlatTree(
        feature_index=np.array([0, -1, -1]),
        threshold=np.array([0.0, np.nan, np.nan]),
        left=np.array([1, -1, -1]),
        right=np.array([2, -1, -1]),
        value=np.array([0.5, 0.0, 1.0]),
        cover=np.array([2, 1, 1]),
        gain=np.array([1.0, 0.0, 0.0]),
    )
    return TreeModel(tree=tree, leaf_semantics=CLASS_PROBABILITY, feature_names=names)


class TestBruteForce:
    def test_constant_model_all_zero(self):
        model = constant_tree_model(0.7)
        bg = BackgroundSet.from_rows(np.zeros((3, 2)))
        exp = shapley_brute_force(model, np.array([5.0, -1.0]), bg)
        assert np.allclose(exp.phi, 0.0)
        assert exp.base_value == pytest.approx(0.7)
        assert exp.prediction == pytest.approx(0.7)

    def test_stump_hand_enumeration(self):
        model = stump_model()
        bg = BackgroundSet.from_rows(np.array([[-1.0, 0.0]]))
        exp = shapley_brute_force(model, np.array([1.0, 5.0]), bg)
        assert exp.base_value == 0.0
        assert exp.phi[0] == pytest.approx(1.0)
        assert exp.phi[1] == 0.0
        assert exp.output_scale == "probability"

    def test_symmetric_and_model(self):
        tree = FlatTree(
            feature_index=np.array([0, -1, 1, -1, -1]),
            threshold=np.array([0.5, np.nan, 0.5, np.nan, np.nan]),
            left=np.array([1, -1, 3, -1, -1]),
            right=np.array([2, -1, 4, -1, -1]),
            value=np.array([0.25, 0.0, 0.5, 0.0, 1.0]),
            cover=np.array([4, 2, 2, 1, 1]),
            gain=np.zeros(5),
        )
        model = TreeModel(tree=tree, leaf_semantics=CLASS_PROBABILITY, feature_names=("a", "b"))
        bg = BackgroundSet.from_rows(np.array([[0.0, 0.0]]))
        exp = shapley_brute_force(model, np.array([1.0, 1.0]), bg)
        assert exp.phi[0] == pytest.approx(0.5)
        assert exp.phi[1] == pytest.approx(0.5)

    def test_too_many_features_guard(self):
        model = constant_tree_model(0.5, names=tuple(f"f{j}" for j in range(21)))
        bg = BackgroundSet.from_rows(np.zeros((1, 21)))
        with pytest.raises(TooManyFeaturesError):
            shapley_brute_force(model, np.zeros(21), bg)

    def test_efficiency(self):
        rng = np.random.default_rng(0)
        mat = random_training_matrix(rng, n=50, k=5)
        model = train_decision_tree(mat, TrainConfig(max_depth=3, min_samples_leaf=2))
        bg = BackgroundSet.from_rows(mat.values[:8])
        for i in range(5):
            exp = shapley_brute_force(model, mat.values[i], bg)
            assert exp.additivity_gap <= 1e-9


class TestTreeExact:
    @pytest.mark.parametrize("trial", range(12))
    def test_matches_brute_force_randomized(self, trial):
        rng = np.random.default_rng(500 + trial)
        k = int(rng.integers(3, 8))
        mat = random_training_matrix(rng, n=int(rng.integers(30, 80)), k=k)
        cfg = TrainConfig(
            max_depth=4, min_samples_leaf=2, n_trees=4, n_rounds=5, boost_max_depth=3, seed=trial
        )
        trainer = [train_decision_tree, train_random_forest, train_gradient_boosted][trial % 3]
        model = trainer(mat, cfg)
        bg = BackgroundSet.from_rows(mat.values[rng.choice(mat.n_rows, size=6, replace=False)])
        x = mat.values[int(rng.integers(0, mat.n_rows))]
        brute = shapley_brute_force(model, x, bg)
        fast = shapley_tree_exact(model, x, bg)
        assert np.abs(brute.phi - fast.phi).max() <= 1e-9
        assert abs(brute.base_value - fast.base_value) <= 1e-9
        assert fast.additivity_gap <= 1e-9
        assert fast.output_scale == brute.output_scale

    def test_single_leaf_tree(self):
        model = constant_tree_model(0.3)
        bg = BackgroundSet.from_rows(np.array([[1.0, 2.0], [3.0, 4.0]]))
        exp = shapley_tree_exact(model, np.array([0.0, 0.0]), bg)
        assert exp.base_value == pytest.approx(0.3)
        assert np.allclose(exp.phi, 0.0)

    def test_stump_reproduced(self):
        model = stump_model()
        bg = BackgroundSet.from_rows(np.array([[-1.0, 0.0]]))
        exp = shapley_tree_exact(model, np.array([1.0, 5.0]), bg)
        assert exp.base_value == 0.0 and exp.phi[0] == pytest.approx(1.0) and exp.phi[1] == 0.0

    def test_dummy_feature_exactly_zero(self):
        rng = np.random.default_rng(3)
        mat = random_training_matrix(rng, n=60, k=3)
        # append a column the model never sees vary -> never split on
        values = np.column_stack([mat.values, np.zeros(mat.n_rows)])
        from riskforge.encoding import EncodedMatrix

        mat4 = EncodedMatrix(
            values=values, labels=mat.labels, column_names=mat.column_names + ("dummy",), encoder=None
        )
        model = train_decision_tree(mat4, TrainConfig(max_depth=3, min_samples_leaf=2))
        bg = BackgroundSet.from_rows(values[:10])
        exp = shapley_tree_exact(model, values[0], bg)
        assert exp.phi[3] == 0.0

    def test_unsupported_model(self):
        rng = np.random.default_rng(4)
        mat = random_training_matrix(rng, n=40, k=3)
        lin = train_logistic_regression(mat, TrainConfig(lr_max_epochs=5))
        with pytest.raises(UnsupportedModelError):
            shapley_tree_exact(lin, mat.values[0], BackgroundSet.from_rows(mat.values[:4]))


@pytest.fixture(scope="module")
def linear_setup():
    schema = FeatureSchema(
        features=(
            FeatureSpec("age", "numeric"),
            FeatureSpec("flag", "categorical", categories=((0, "n"), (1, "y"))),
            FeatureSpec("grade", "categorical", categories=((0, "a"), (1, "b"), (2, "c"))),
        ),
        label_name="label",
    )
    rng = np.random.default_rng(7)
    n = 90
    values = np.column_stack(
        [rng.normal(40, 9, n), rng.integers(0, 2, n).astype(float), rng.integers(0, 3, n).astype(float)]
    )
    labels = ((values[:, 0] > 40) ^ (values[:, 1] > 0)).astype(np.int64)
    ds = Dataset(schema=schema, values=values, labels=labels)
    model = train_logistic_regression(encode_for_linear(ds), TrainConfig(lr_max_epochs=60))
    bg = BackgroundSet.from_dataset(ds, size=10, seed=1)
    return ds, model, bg


class TestLinear:
    def test_x_equal_background_mean_gives_zero_phi(self, linear_setup):
        ds, model, bg = linear_setup
        # a background of one row r: explaining r itself gives phi = 0
        solo = BackgroundSet.from_rows(ds.values[:1])
        exp = shapley_linear(model, ds.values[0], solo)
        assert np.allclose(exp.phi, 0.0, atol=1e-12)
        assert exp.additivity_gap <= 1e-12

    def test_equals_brute_force_on_margin(self, linear_setup):
        ds, model, bg = linear_setup
        hinge_twin = LinearModel(
            weights=model.weights.copy(), bias=model.bias, kind="hinge", encoder=model.encoder
        )
        for i in (0, 3, 11):
            lin = shapley_linear(model, ds.values[i], bg)
            brute = shapley_brute_force(hinge_twin, ds.values[i], bg)
            assert np.abs(lin.phi - brute.phi).max() <= 1e-12
            assert lin.output_scale == "margin"

    def test_onehot_group_folds_to_single_phi(self, linear_setup):
        ds, model, bg = linear_setup
        exp = shapley_linear(model, ds.values[5], bg)
        assert exp.phi.shape == (3,)  # 5 encoded columns folded to 3 features
        enc = model.encoder
        x_enc = enc.transform_rows(ds.values[5][None, :])[0]
        bg_mean = enc.transform_rows(bg.rows).mean(axis=0)
        grade_cols = list(enc.groups[2])
        manual = ((x_enc - bg_mean) * model.weights)[grade_cols].sum()
        assert exp.phi[2] == pytest.approx(manual, abs=1e-12)


class TestSampling:
    def test_matches_brute_force_within_three_se(self, linear_setup):
        ds, model, bg = linear_setup
        x = ds.values[2]
        brute = shapley_brute_force(model, x, bg)  # probability scale for logistic
        sampled = shapley_sampling(model, x, bg, n_permutations=2000, seed=0)
        assert (np.abs(sampled.phi - brute.phi) <= 3 * sampled.std_errors + 1e-9).all()
        assert sampled.residual_before_adjustment is not None
        assert sampled.additivity_gap <= 1e-9  # residual redistributed

    def test_deterministic_per_seed(self, linear_setup):
        ds, model, bg = linear_setup
        a = shapley_sampling(model, ds.values[1], bg, n_permutations=40, seed=5)
        b = shapley_sampling(model, ds.values[1], bg, n_permutations=40, seed=5)
        assert np.array_equal(a.phi, b.phi)

    def test_constant_model_zero_phi_zero_se(self):
        model = constant_tree_model(0.4)
        bg = BackgroundSet.from_rows(np.zeros((4, 2)))
        exp = shapley_sampling(model, np.array([9.0, 9.0]), bg, n_permutations=20, seed=1)
        assert np.allclose(exp.phi, 0.0)
        assert np.allclose(exp.std_errors, 0.0)
        assert exp.residual_before_adjustment == 0.0


class TestGainImportance:
    def test_stump_all_importance_on_split_feature(self):
        gi = gain_importance(stump_model())
        assert gi.importances[0] == 1.0
        assert gi.importances[1] == 0.0
        assert gi.ranking[0] == "a"

    def test_unused_feature_zero(self):
        rng = np.random.default_rng(5)
        mat = random_training_matrix(rng, n=60, k=3)
        values = np.column_stack([mat.values, np.full(mat.n_rows, 3.3)])
        from riskforge.encoding import EncodedMatrix

        mat4 = EncodedMatrix(
            values=values, labels=mat.labels, column_names=mat.column_names + ("unused",), encoder=None
        )
        model = train_decision_tree(mat4, TrainConfig(max_depth=3))
        gi = gain_importance(model)
        assert gi.importances[3] == 0.0

    def test_two_split_hand_tree_proportions(self):
        # root split gain 8, child split gain 2 on another feature -> 0.8/0.2
        tree = FlatTree(
            feature_index=np.array([0, 1, -1, -1, -1]),
            threshold=np.array([0.5, 0.5, np.nan, np.nan, np.nan]),
            left=np.array([1, 3, -1, -1, -1]),
            right=np.array([2, 4, -1, -1, -1]),
            value=np.array([0.5, 0.5, 1.0, 0.0, 1.0]),
            cover=np.array([8, 4, 4, 2, 2]),
            gain=np.array([8.0, 2.0, 0.0, 0.0, 0.0]),
        )
        model = TreeModel(tree=tree, leaf_semantics=CLASS_PROBABILITY, feature_names=("a", "b"))
        gi = gain_importance(model)
        assert gi.importances[0] == pytest.approx(0.8)
        assert gi.importances[1] == pytest.approx(0.2)

    def test_linear_unsupported(self, linear_setup):
        _, model, _ = linear_setup
        with pytest.raises(UnsupportedModelError):
            gain_importance(model)


class TestGlobalAndExports:
    @pytest.fixture(scope="class")
    def tree_setup(self):
        schema = FeatureSchema(
            features=(
                FeatureSpec("x", "numeric"),
                FeatureSpec("b", "categorical", categories=((0, "n"), (1, "y"))),
            ),
            label_name="y",
        )
        rng = np.random.default_rng(11)
        n = 80
        values = np.column_stack([rng.normal(0, 1, n), rng.integers(0, 2, n).astype(float)])
        labels = (values[:, 0] > 0).astype(np.int64)
        ds = Dataset(schema=schema, values=values, labels=labels)
        model = train_decision_tree(encode_for_trees(ds), TrainConfig(max_depth=3, min_samples_leaf=5))
        bg = BackgroundSet.from_dataset(ds, size=16, seed=2)
        return ds, model, bg

    def test_constant_model_zero_importance(self, tree_setup):
        ds, _, bg = tree_setup
        gi = global_mean_abs_shap(constant_tree_model(0.5, names=("x", "b")), ds, bg)
        assert np.allclose(gi.importances, 0.0)

    def test_stump_only_split_feature_nonzero(self, tree_setup):
        ds, _, bg = tree_setup
        gi = global_mean_abs_shap(stump_model(names=("x", "b")), ds, bg)
        assert gi.importances[0] > 0
        assert gi.importances[1] == 0.0
        assert gi.ranking == ("x", "b")

    def test_beeswarm_shapes_and_additivity(self, tree_setup):
        ds, model, bg = tree_setup
        export = beeswarm_export(model, ds, bg)
        phi = np.asarray(export["phi"])
        preds = np.asarray(export["predictions"])
        assert phi.shape == (ds.n_rows, 2)
        gaps = np.abs(export["base_value"] + phi.sum(axis=1) - preds)
        assert gaps.max() <= 1e-9

    def test_beeswarm_matches_individual_explanations(self, tree_setup):
        ds, model, bg = tree_setup
        two = ds.take(np.array([0, 1]))
        export = beeswarm_export(model, two, bg)
        for i in range(2):
            exp = explain_row(model, two.values[i], bg)
            assert np.allclose(export["phi"][i], exp.phi, atol=1e-12)

    def test_dependence_sign_flip_across_stump_threshold(self, tree_setup):
        ds, _, bg = tree_setup
        model = stump_model(names=("x", "b"))
        dep = dependence_values(model, ds, bg, "x")
        below = dep.phi[ds.values[:, 0] < 0]
        above = dep.phi[ds.values[:, 0] >= 0]
        assert (below <= 0).all() and (above >= 0).all()
        assert below.mean() < 0 < above.mean()

    def test_dependence_unused_feature_all_zero(self, tree_setup):
        ds, _, bg = tree_setup
        dep = dependence_values(stump_model(names=("x", "b")), ds, bg, "b")
        assert np.allclose(dep.phi, 0.0)
        for summary in dep.summaries:
            assert summary["mean_phi"] == 0.0

    def test_dependence_unknown_feature(self, tree_setup):
        ds, model, bg = tree_setup
        with pytest.raises(UnknownFeatureError):
            dependence_values(model, ds, bg, "zzz")

    def test_forest_phi_is_mean_of_tree_phi(self):
        rng = np.random.default_rng(21)
        mat = random_training_matrix(rng, n=60, k=4)
        forest = train_random_forest(mat, TrainConfig(n_trees=3, max_depth=3, seed=2))
        bg = BackgroundSet.from_rows(mat.values[:8])
        x = mat.values[0]
        from riskforge.explain.tree_exact import tree_phi_matrix

        per_tree = [tree_phi_matrix(t, x[None, :], bg.rows, 4)[0] for t in forest.trees]
        combined = shapley_tree_exact(forest, x, bg)
        assert np.allclose(combined.phi, np.mean(per_tree, axis=0), atol=1e-12)

    def test_boosted_phi_is_lr_weighted_sum(self):
        rng = np.random.default_rng(22)
        mat = random_training_matrix(rng, n=60, k=4)
        cfg = TrainConfig(n_rounds=4, boost_max_depth=2, learning_rate=0.3)
        model = train_gradient_boosted(mat, cfg)
        bg = BackgroundSet.from_rows(mat.values[:8])
        x = mat.values[0]
        from riskforge.explain.tree_exact import tree_phi_matrix

        per_tree = [tree_phi_matrix(t, x[None, :], bg.rows, 4)[0] for t in model.trees]
        combined = shapley_tree_exact(model, x, bg)
        assert np.allclose(combined.phi, 0.3 * np.sum(per_tree, axis=0), atol=1e-12)


def test_symmetry_exchangeable_features():
    # AND-of-two-features model is symmetric by construction, so both features
    # must receive equal phi for any background where they are exchangeable
    tree = FlatTree(
        feature_index=np.array([0, -1, 1, -1, -1]),
        threshold=np.array([0.5, np.nan, 0.5, np.nan, np.nan]),
        left=np.array([1, -1, 3, -1, -1]),
        right=np.array([2, -1, 4, -1, -1]),
        value=np.array([0.25, 0.0, 0.5, 0.0, 1.0]),
        cover=np.array([4, 2, 2, 1, 1]),
        gain=np.zeros(5),
    )
    model = TreeModel(tree=tree, leaf_semantics=CLASS_PROBABILITY, feature_names=("a", "b"))
    bg = BackgroundSet.from_rows(np.array([[0.0, 0.0], [1.0, 1.0]]))
    exp = shapley_brute_force(model, np.array([1.0, 1.0]), bg)
    assert exp.phi[0] == pytest.approx(exp.phi[1], abs=1e-12)
    exp_zero = shapley_brute_force(model, np.array([0.0, 0.0]), bg)
    assert exp_zero.phi[0] == pytest.approx(exp_zero.phi[1], abs=1e-12)


def test_explanation_records_table_shape(linear_setup):
    ds, model, bg = linear_setup
    exp = explain_row(model, ds.values[0], bg, feature_names=ds.schema.feature_names)
    records = exp.to_records()
    assert [r["feature_id"] for r in records] == [0, 1, 2]
    assert {"feature_id", "feature", "feature_value", "phi"} == set(records[0])
