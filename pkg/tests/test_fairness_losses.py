import numpy as np
import pytest

from conftest import make_field, random_field
from fairst.fairness.groups import discretize_groups
from fairst.fairness.losses import composite_loss, em_loss, if_loss, pairwise_loss, rf_loss
from fairst.fairness.metrics import rfg
from fairst.models.FairnessConfig import AttributeSpec, FairnessConfig
from fairst.tensor.engine import backward, parameter
from fairst.utils import DegenerateGroupError, InvalidInputError


class TestRegionLoss:

    def test_two_cell_fixture(self, two_cell_field, two_cell_labels):
        truth = np.array([[15.0, 5.0]])
        loss = rf_loss(np.array([[12.0, 4.0]]), truth, two_cell_labels, two_cell_field)
        assert loss.item() == pytest.approx(0.5, abs=1e-12)

    def test_normalizer_floors_at_y_min(self, two_cell_field, two_cell_labels):
        loss = rf_loss(np.array([[12.0, 4.0]]), np.zeros((1, 2)), two_cell_labels, two_cell_field)
        assert loss.item() == pytest.approx(10.0, abs=1e-12)

    def test_matches_gap_times_total(self, rng):
        field = random_field(rng)
        labels = discretize_groups(field, "race", 0.5)
        pred = rng.uniform(0, 10, (4, 4))
        truth = rng.poisson(4.0, (4, 4)).astype(float)
        loss = rf_loss(pred, truth, labels, field).item()
        assert loss * truth.sum() == pytest.approx(abs(rfg(pred[None], labels, field)), rel=1e-12)

    def test_zero_at_fair_prediction(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            field = random_field(rng)
            labels = discretize_groups(field, "race", 0.5)
            pred = rng.uniform(1.0, 100.0) * field.population_share
            truth = rng.poisson(4.0, (4, 4)).astype(float)
            assert rf_loss(pred, truth, labels, field).item() < 1e-12
            assert if_loss(pred, truth, field, "race").item() < 1e-12

    def test_batched_frames(self, two_cell_field, two_cell_labels):
        pred = np.array([[[12.0, 4.0]], [[6.0, 2.0]]])
        truth = np.array([[[15.0, 5.0]], [[5.0, 5.0]]])
        loss = rf_loss(pred, truth, two_cell_labels, two_cell_field)
        np.testing.assert_allclose(loss.data, [0.5, 0.5], atol=1e-12)

    def test_gradient_is_signed_coefficient(self, two_cell_field, two_cell_labels):
        pred = parameter(np.array([[12.0, 4.0]]))
        loss = rf_loss(pred, np.array([[15.0, 5.0]]), two_cell_labels, two_cell_field)
        (grad,) = backward(loss, [pred])
        np.testing.assert_allclose(grad, [[1 / 0.6 / 20, -1 / 0.4 / 20]], rtol=1e-12)


class TestIndividualLoss:

    def test_two_cell_fixture(self):
        field = make_field([[0.5, 0.5]], race=[[1.0, 0.0]])
        loss = if_loss(np.array([[10.0, 5.0]]), np.array([[12.0, 8.0]]), field, "race")
        assert loss.item() == pytest.approx(0.5, abs=1e-12)


class TestEqualMeansLoss:

    def test_two_cell_fixture(self, two_cell_field, two_cell_labels):
        loss = em_loss(np.array([[12.0, 4.0]]), np.array([[10.0, 10.0]]), two_cell_labels, two_cell_field)
        assert loss.item() == pytest.approx(0.5, abs=1e-12)

    def test_equal_per_capita_prediction(self, rng):
        field = random_field(rng)
        labels = discretize_groups(field, "race", 0.5)
        pred = 7.0 * field.population_share
        assert em_loss(pred, np.ones((4, 4)), labels, field).item() < 1e-12

    def test_empty_group(self):
        field = make_field([[1.0, 1.0]], race=[[0.9, 0.8]])
        labels = discretize_groups(field, "race", 0.5)
        with pytest.raises(DegenerateGroupError):
            em_loss(np.ones((1, 2)), np.ones((1, 2)), labels, field)


class TestPairwiseLoss:

    def test_single_pair_fixture(self):
        field = make_field([[0.5, 0.5]], race=[[0.9, 0.1]])
        labels = discretize_groups(field, "race", 0.5)
        loss = pairwise_loss(np.array([[4.0, 2.5]]), np.array([[5.0, 5.0]]), labels, field)
        assert loss.item() == pytest.approx(0.09, abs=1e-12)

    def test_identical_per_capita_prediction(self, rng):
        field = random_field(rng)
        labels = discretize_groups(field, "race", 0.5)
        truth = rng.poisson(3.0, (4, 4)).astype(float)
        assert pairwise_loss(3.0 * field.population_share, truth, labels, field).item() < 1e-24

    def test_distant_truth_shrinks_loss(self):
        field = make_field([[0.5, 0.5]], race=[[0.9, 0.1]])
        labels = discretize_groups(field, "race", 0.5)
        pred = np.array([[4.0, 2.5]])
        near = pairwise_loss(pred, np.array([[5.0, 5.0]]), labels, field).item()
        far = pairwise_loss(pred, np.array([[5.0, 6.0]]), labels, field).item()
        assert far < near


class TestCompositeLoss:

    def _setup(self, rng):
        field = random_field(rng, attributes=("race", "age", "edu"))
        labelings = {name: discretize_groups(field, name, 0.5) for name in field.attributes}
        pred = rng.uniform(0, 10, (4, 4))
        truth = rng.poisson(4.0, (4, 4)).astype(float)
        return field, labelings, pred, truth

    def test_single_attribute_equals_base_loss(self, rng):
        field, labelings, pred, truth = self._setup(rng)
        config = FairnessConfig("RF", 1.0, {"race": AttributeSpec(1.0)})
        total = composite_loss(pred, truth, config, field, labelings).item()
        assert total == rf_loss(pred, truth, labelings["race"], field).item()

    def test_sum_over_attributes(self, rng):
        field, labelings, pred, truth = self._setup(rng)
        config = FairnessConfig("IF", 1.0, {name: AttributeSpec(1.0) for name in ("race", "age", "edu")})
        expected = sum(if_loss(pred, truth, field, name).item() for name in ("race", "age", "edu"))
        assert composite_loss(pred, truth, config, field, labelings).item() == pytest.approx(expected, rel=1e-12)

    def test_weighted_attributes(self, rng):
        field, labelings, pred, truth = self._setup(rng)
        config = FairnessConfig("EM", 1.0, {"race": AttributeSpec(2.0), "age": AttributeSpec(0.0)})
        expected = 2 * em_loss(pred, truth, labelings["race"], field).item()
        assert composite_loss(pred, truth, config, field, labelings).item() == pytest.approx(expected, rel=1e-12)

    def test_unknown_attribute(self, rng):
        field, labelings, pred, truth = self._setup(rng)
        config = FairnessConfig("IF", 1.0, {"income": AttributeSpec()})
        with pytest.raises(InvalidInputError):
            composite_loss(pred, truth, config, field, labelings)

    def test_never_negative(self, rng):
        field, labelings, pred, truth = self._setup(rng)
        for kind in ("RF", "IF", "EM", "PW"):
            config = FairnessConfig(kind, 1.0, {"race": AttributeSpec(), "age": AttributeSpec()})
            assert composite_loss(pred, truth, config, field, labelings).item() >= 0.0


class TestLossGradients:

    LOSSES = {
        "IF": lambda pred, truth, labels, field: if_loss(pred, truth, field, "race"),
        "EM": lambda pred, truth, labels, field: em_loss(pred, truth, labels, field),
        "PW": lambda pred, truth, labels, field: pairwise_loss(pred, truth, labels, field),
    }

    @pytest.mark.parametrize("kind", sorted(LOSSES))
    def test_matches_central_differences(self, kind):
        rng = np.random.default_rng(len(kind))
        field = random_field(rng)
        labels = discretize_groups(field, "race", 0.5)
        truth = rng.poisson(4.0, (4, 4)).astype(float)
        pred0 = rng.uniform(0.0, 10.0, (4, 4))
        loss_of = self.LOSSES[kind]

        pred = parameter(pred0)
        (grad,) = backward(loss_of(pred, truth, labels, field), [pred])

        h = 1e-5
        for i in range(pred0.size):
            up, down = pred0.copy(), pred0.copy()
            up.flat[i] += h
            down.flat[i] -= h
            numeric = (loss_of(up, truth, labels, field).item() - loss_of(down, truth, labels, field).item()) / (2 * h)
            assert grad.flat[i] == pytest.approx(numeric, rel=1e-6, abs=1e-10), i
