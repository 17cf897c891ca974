import numpy as np
import pytest

from decolite.autodiff.gradcheck import gradient_check
from decolite.autodiff.tensor import Tensor
from decolite.training.config import MEAN_OFFDIAG, RAW_SUM
from decolite.training.losses import orthogonality_loss, sequential_orth_loss, total_loss
from decolite.utils.exceptions import ConfigError, DimensionError, UsageError

SQRT_HALF = 1.0 / np.sqrt(2.0)


@pytest.fixture
def hand_case():
    deco = Tensor([[[1.0, 0.0], [SQRT_HALF, SQRT_HALF]]])
    base = Tensor([[[1.0, 0.0], [0.0, 1.0]]])
    return deco, base


def random_features(seed, shape=(3, 4, 6)):
    return Tensor(np.random.default_rng(seed).normal(size=shape), requires_grad=True)


class TestOrthogonalityLoss:
    def test_raw_sum_hand_case(self, hand_case):
        assert orthogonality_loss(*hand_case, mode=RAW_SUM).item() == pytest.approx(0.7071, abs=1e-4)

    def test_mean_offdiag_hand_case(self, hand_case):
        assert orthogonality_loss(*hand_case, mode=MEAN_OFFDIAG).item() == pytest.approx(0.3536, abs=1e-4)

    def test_single_channel_is_zero(self):
        features = Tensor(np.random.default_rng(0).normal(size=(2, 1, 5)))
        assert orthogonality_loss(features, features).item() == 0.0

    def test_identical_orthonormal_channels(self):
        features = Tensor(np.eye(3)[np.newaxis].repeat(2, axis=0))
        assert orthogonality_loss(features, features, mode=RAW_SUM).item() == pytest.approx(0.0, abs=1e-12)

    def test_diagonal_included(self, hand_case):
        # adds |cos(e1, e1)| + |cos(d2, e2)| = 1 + 0.7071 over 4 pairs
        loss = orthogonality_loss(*hand_case, include_diagonal=True)
        assert loss.item() == pytest.approx((2 * 0.70710678 + 1.0) / 4, abs=1e-6)

    def test_symmetric_in_its_arguments(self):
        a, b = random_features(1), random_features(2)
        assert orthogonality_loss(a, b).item() == pytest.approx(orthogonality_loss(b, a).item(), rel=1e-12)

    def test_invariant_to_positive_channel_scaling(self):
        a, b = random_features(3), random_features(4)
        scales = np.array([1.0, 2.0, 0.5, 7.0])[None, :, None]
        scaled = Tensor(a.data * scales)
        assert orthogonality_loss(scaled, b).item() == pytest.approx(orthogonality_loss(a, b).item(), rel=1e-9)

    def test_bounded_by_pair_count(self):
        loss = orthogonality_loss(random_features(5), random_features(6), mode=RAW_SUM)
        assert 0.0 <= loss.item() <= 4 * 3

    def test_gradient(self):
        a, b = random_features(7), Tensor(np.random.default_rng(8).normal(size=(3, 4, 6)))
        assert gradient_check(lambda: orthogonality_loss(a, b), [a]) < 1e-5

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            orthogonality_loss(random_features(0), random_features(1, shape=(3, 5, 6)))

    def test_unknown_mode(self, hand_case):
        with pytest.raises(ConfigError):
            orthogonality_loss(*hand_case, mode="cosine")


class TestSequentialLoss:
    def test_single_predecessor(self, hand_case):
        deco, base = hand_case
        assert sequential_orth_loss(deco, [base]).item() == orthogonality_loss(deco, base).item()

    def test_equal_losses(self, hand_case):
        deco, base = hand_case
        expected = orthogonality_loss(deco, base).item()
        assert sequential_orth_loss(deco, [base, base]).item() == pytest.approx(expected, rel=1e-15)

    def test_mean_of_two(self):
        new = Tensor([[[1.0, 0.0], [0.0, 1.0]]])
        aligned = Tensor([[[1.0, 0.0], [0.0, 1.0]]])
        swapped = Tensor([[[0.0, 1.0], [1.0, 0.0]]])
        # raw sums 0 and 2 over the two off-diagonal pairs
        assert sequential_orth_loss(new, [aligned, swapped], mode=RAW_SUM).item() == pytest.approx(1.0)

    def test_no_predecessors(self, hand_case):
        with pytest.raises(UsageError):
            sequential_orth_loss(hand_case[0], [])

    def test_mismatched_predecessor(self, hand_case):
        with pytest.raises(ConfigError):
            sequential_orth_loss(hand_case[0], [Tensor(np.ones((1, 3, 2)))])


class TestTotalLoss:
    def test_even_mix(self):
        assert total_loss(1.0, 0.5, 0.5).item() == 0.75

    def test_alpha_one_is_cross_entropy(self):
        assert total_loss(0.3133, 0.9, 1.0).item() == 0.3133

    def test_alpha_zero_is_orthogonality(self):
        assert total_loss(0.3133, 0.9, 0.0).item() == 0.9

    @pytest.mark.parametrize("alpha", [-0.1, 1.5])
    def test_alpha_out_of_range(self, alpha):
        with pytest.raises(ConfigError):
            total_loss(1.0, 0.5, alpha)
