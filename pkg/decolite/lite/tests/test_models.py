from dataclasses import replace

import numpy as np
import pytest

from decolite.autodiff import functional as F
from decolite.autodiff.gradcheck import gradient_check
from decolite.autodiff.graph import Graph
from decolite.autodiff.optim import Adam
from decolite.autodiff.tensor import Tensor
from decolite.lite.config import LiteArchitectureConfig
from decolite.lite.models import (
    INCEPTION_TIME_REFERENCE_PARAMS,
    expected_param_count,
    extract_final_filters,
    init_model,
    param_count,
    ratio_vs_reference,
    trainable_kernel_names,
)
from decolite.utils.exceptions import DimensionError, NumericError, UsageError

DEFAULT_PARAMS = 10200


@pytest.fixture(scope="module")
def default_model():
    return init_model(LiteArchitectureConfig(), seed=0, n_classes=2)


class TestInit:
    def test_same_seed_same_checksum(self, tiny_architecture):
        first = init_model(tiny_architecture, seed=3, n_classes=2)
        second = init_model(tiny_architecture, seed=3, n_classes=2)
        assert first.checksum() == second.checksum()

    def test_different_seed_differs(self, tiny_architecture):
        assert (
            init_model(tiny_architecture, seed=0, n_classes=2).checksum()
            != init_model(tiny_architecture, seed=1, n_classes=2).checksum()
        )

    def test_batch_norm_and_bias_start_neutral(self, tiny_model):
        assert np.all(tiny_model.parameters["block1.bn.gamma"].data == 1.0)
        assert np.all(tiny_model.parameters["block2.bn.beta"].data == 0.0)
        assert np.all(tiny_model.parameters["head.bias"].data == 0.0)
        assert np.all(tiny_model.buffers["block3.bn.running_var"].data == 1.0)

    def test_single_class(self, tiny_architecture):
        with pytest.raises(UsageError):
            init_model(tiny_architecture, seed=0, n_classes=1)


class TestParamCount:
    def test_default_count(self, default_model):
        assert param_count(default_model) == DEFAULT_PARAMS
        assert expected_param_count(LiteArchitectureConfig(), 2) == DEFAULT_PARAMS

    def test_ratio_against_reference(self):
        assert ratio_vs_reference(DEFAULT_PARAMS) == pytest.approx(
            DEFAULT_PARAMS / INCEPTION_TIME_REFERENCE_PARAMS
        )
        assert ratio_vs_reference(DEFAULT_PARAMS) < 0.03

    def test_head_contribution(self):
        config = LiteArchitectureConfig()
        assert expected_param_count(config, 2) - expected_param_count(config, 1) == 33

    def test_custom_filters_are_not_parameters(self, default_model):
        assert not any("custom" in name for name in default_model.parameters)
        relengthened = LiteArchitectureConfig(increasing_lengths=(4, 6, 8, 10, 12, 14))
        assert param_count(init_model(relengthened, 0, 2)) == DEFAULT_PARAMS

    def test_fewer_custom_filters_shrink_pointwise_input(self):
        config = LiteArchitectureConfig(peak_lengths=(4,))
        assert expected_param_count(config, 2) < DEFAULT_PARAMS
        assert param_count(init_model(config, 0, 2)) == expected_param_count(config, 2)

    def test_trainable_kernels(self, tiny_model):
        assert trainable_kernel_names(tiny_model) == [
            "block1.conv0.kernel",
            "block1.conv1.kernel",
            "block2.depthwise.kernel",
            "block2.pointwise.kernel",
            "block3.depthwise.kernel",
            "block3.pointwise.kernel",
            "head.weight",
        ]


class TestForward:
    def test_shapes(self, default_model):
        logits, features = default_model(np.random.default_rng(0).normal(size=(3, 1, 100)), F.EVAL)
        assert logits.shape == (3, 2)
        assert features.shape == (3, 32, 100)

    def test_zero_input_gives_dense_bias(self, tiny_architecture):
        model = init_model(tiny_architecture, seed=0, n_classes=2)
        model.parameters["head.bias"].data = np.array([0.3, -0.2])
        logits, _ = model(np.zeros((2, 1, 9)), F.EVAL)
        np.testing.assert_allclose(logits.data, [[0.3, -0.2], [0.3, -0.2]])

    def test_identical_series_identical_rows(self, tiny_model):
        series = np.random.default_rng(1).normal(size=(1, 1, 10))
        logits, _ = tiny_model(np.concatenate([series, series]), F.TRAIN)
        np.testing.assert_allclose(logits.data[0], logits.data[1], rtol=0, atol=1e-12)

    def test_multivariate_input_rejected(self, tiny_model):
        with pytest.raises(DimensionError):
            tiny_model(np.zeros((2, 2, 10)))

    def test_unknown_mode(self, tiny_model):
        with pytest.raises(UsageError):
            tiny_model(np.zeros((2, 1, 10)), "inference")

    def test_non_finite_activation_names_layer(self, tiny_model):
        tiny_model.parameters["block2.pointwise.kernel"].data[:] = 1e308
        with pytest.raises(NumericError) as error:
            tiny_model(np.random.default_rng(0).normal(size=(2, 1, 8)) * 1e10, F.EVAL)
        assert error.value.layer is not None

    def test_predict_proba_rows_sum_to_one(self, tiny_model):
        probabilities = tiny_model.predict_proba(np.random.default_rng(2).normal(size=(5, 1, 10)))
        np.testing.assert_allclose(probabilities.sum(axis=1), np.ones(5))

    def test_gradients_match_finite_differences(self, tiny_model):
        x = Tensor(np.random.default_rng(0).normal(size=(3, 1, 12)))
        targets = np.eye(2)[[0, 1, 1]]

        def build_loss():
            logits, _ = tiny_model(x, F.TRAIN)
            return F.softmax_cross_entropy(logits, targets)

        assert gradient_check(build_loss, list(tiny_model.parameters.values())) < 1e-3


class TestFinalFilters:
    def test_default_shape(self, default_model):
        filters = extract_final_filters(default_model)
        assert filters.shape == (32, 20)
        assert filters.is_default_shape
        assert filters.metadata()["dilation"] == 4

    def test_same_seed_same_bank(self, tiny_architecture):
        first = extract_final_filters(init_model(tiny_architecture, 5, 2))
        second = extract_final_filters(init_model(tiny_architecture, 5, 2))
        np.testing.assert_array_equal(first.values, second.values)

    def test_training_step_moves_bank(self, tiny_model):
        before = extract_final_filters(tiny_model).values
        optimizer = Adam(tiny_model.parameters, lr=0.01)
        x = Tensor(np.random.default_rng(3).normal(size=(4, 1, 10)))
        with Graph() as graph:
            logits, _ = tiny_model(x, F.TRAIN)
            loss = F.softmax_cross_entropy(logits, np.eye(2)[[0, 1, 0, 1]])
        graph.backward(loss)
        optimizer.step()
        assert not np.array_equal(before, extract_final_filters(tiny_model).values)


class TestState:
    def test_snapshot_restore(self, tiny_model):
        state = tiny_model.snapshot()
        checksum = tiny_model.checksum()
        tiny_model.parameters["head.weight"].data = np.zeros((2, 2))
        assert tiny_model.checksum() != checksum
        tiny_model.restore(state)
        assert tiny_model.checksum() == checksum

    def test_frozen_copy(self, tiny_model):
        frozen = tiny_model.frozen_copy()
        assert frozen.checksum() == tiny_model.checksum()
        assert not any(t.requires_grad for t in frozen.parameters.values())
        frozen.parameters["head.bias"].data += 1.0
        assert frozen.checksum() != tiny_model.checksum()

    def test_custom_filters_survive_config_replace(self, tiny_architecture):
        wider = replace(tiny_architecture, n_filters=3)
        assert init_model(wider, 0, 2).parameters["block3.pointwise.kernel"].shape == (3, 2, 1)
