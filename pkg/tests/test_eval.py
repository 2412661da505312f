from itertools import permutations

import numpy as np
import pytest
from scipy import stats

from conftest import START, make_field, random_field
from fairst.database.store import read_report, write_report
from fairst.eval.heatmap import export_heatmap, heatmap_pixels, read_heatmap_csv, read_pgm
from fairst.eval.metrics import evaluate, ground_truth_report, mae, per_capita, spearman
from fairst.fairness.groups import discretize_groups
from fairst.models.DemandTensor import DemandTensor
from fairst.utils import InvalidInputError, UndefinedCorrelationError


class TestMae:

    def test_value(self):
        assert mae(np.array([[1.0, -2.0], [3.0, 4.0]]), np.zeros((2, 2))) == 2.5

    def test_accepts_demand_tensors(self):
        truth = DemandTensor(np.ones((3, 2, 2)), START)
        assert mae(DemandTensor(np.full((3, 2, 2), 1.5), START), truth) == 0.5

    def test_shape_mismatch(self):
        with pytest.raises(InvalidInputError):
            mae(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            mae(np.zeros((0, 2, 2)), np.zeros((0, 2, 2)))


def brute_force_p(x, y):
    rx, ry = stats.rankdata(x), stats.rankdata(y)
    observed = abs(np.corrcoef(rx, ry)[0, 1])
    values = [abs(np.corrcoef(rx, perm)[0, 1]) for perm in permutations(ry)]
    return sum(v >= observed - 1e-12 for v in values) / len(values)


class TestSpearman:

    def test_perfect_small(self):
        x = np.arange(1.0, 6.0)
        assert spearman(x, 2 * x) == (1.0, pytest.approx(2 / 120))
        rho, p_value = spearman(x, -x)
        assert rho == -1.0 and p_value == pytest.approx(2 / 120)

    def test_perfect_large(self):
        x = np.arange(20.0)
        assert spearman(x, x ** 3) == (1.0, 0.0)

    def test_ties_against_brute_force(self):
        x = np.array([1.0, 2.0, 2.0, 3.0, 4.0, 5.0])
        y = np.array([2.0, 1.0, 4.0, 3.0, 6.0, 5.0])
        rho, p_value = spearman(x, y)
        assert rho == pytest.approx(stats.spearmanr(x, y)[0], rel=1e-12)
        assert p_value == pytest.approx(brute_force_p(x, y), rel=1e-12)

    def test_symmetric(self, rng):
        x, y = rng.normal(size=7), rng.normal(size=7)
        rho_xy, p_xy = spearman(x, y)
        rho_yx, p_yx = spearman(y, x)
        assert rho_xy == pytest.approx(rho_yx, rel=1e-12)
        assert p_xy == pytest.approx(p_yx, rel=1e-12)

    @pytest.mark.parametrize("n", [6, 25])
    def test_increasing_transform_keeps_rho(self, rng, n):
        x = rng.normal(size=n)
        y = x + rng.normal(size=n)
        rho, p_value = spearman(x, y)
        for tx, ty in ((np.exp(x), y), (x, y ** 3 + 2 * y), (np.exp(x), np.arctan(y))):
            assert spearman(tx, ty) == (pytest.approx(rho, abs=1e-12), pytest.approx(p_value, abs=1e-12))

    def test_matches_scipy_above_exact_range(self, rng):
        x = rng.normal(size=30)
        y = x + rng.normal(scale=2.0, size=30)
        rho, p_value = spearman(x, y)
        expected = stats.spearmanr(x, y)
        assert rho == pytest.approx(expected[0], rel=1e-10)
        assert p_value == pytest.approx(expected[1], rel=1e-8)

    def test_constant_input(self):
        with pytest.raises(UndefinedCorrelationError):
            spearman(np.ones(5), np.arange(5.0))

    @pytest.mark.parametrize("x,y", [
        (np.arange(2.0), np.arange(2.0)),
        (np.arange(4.0), np.arange(5.0)),
        (np.array([1.0, np.nan, 3.0]), np.arange(3.0)),
    ])
    def test_invalid(self, x, y):
        with pytest.raises(InvalidInputError):
            spearman(x, y)


class TestEvaluate:

    def test_prediction_equal_to_truth(self, rng):
        field = random_field(rng)
        labelings = {"race": discretize_groups(field, "race", 0.5)}
        truth = DemandTensor(rng.poisson(4.0, (10, 4, 4)).astype(float), START)
        report = evaluate(truth.values.copy(), truth, field, labelings)
        baseline = ground_truth_report(truth, field, labelings)
        assert report.mae == 0.0 and report.source == "prediction"
        assert baseline.source == "ground_truth"
        assert report.attributes["race"] == baseline.attributes["race"]

    def test_proportional_demand_closes_gaps(self, rng):
        field = random_field(rng)
        labelings = {"race": discretize_groups(field, "race", 0.5)}
        pred = np.stack([field.population_share * 64.0] * 2)
        report = evaluate(pred, pred, field, labelings)
        item = report.attributes["race"]
        assert item.rfg == pytest.approx(0.0, abs=1e-9)
        assert item.ifg == pytest.approx(0.0, abs=1e-9)
        assert (item.rho, item.p_value) == (0.0, 1.0)

    def test_per_capita_skips_empty_cells(self):
        field = make_field([[0.0, 1.0, 3.0]], race=[[0.5, 0.5, 0.5]])
        np.testing.assert_allclose(per_capita(np.array([[9.0, 2.0, 6.0]]), field), [8.0, 8.0])

    def test_biased_demand_correlates(self):
        fractions = np.linspace(0.05, 0.95, 16).reshape(4, 4)
        field = make_field(np.ones((4, 4)), race=fractions)
        labelings = {"race": discretize_groups(field, "race", 0.5)}
        pred = np.stack([1.0 + 10.0 * fractions] * 2)
        item = evaluate(pred, pred, field, labelings).attributes["race"]
        assert item.rho == 1.0 and item.p_value == 0.0
        assert item.rfg > 0 and item.ifg > 0
        assert item.significant

    def test_report_csv_round_trip(self, rng, tmp_path):
        field = random_field(rng)
        labelings = {"race": discretize_groups(field, "race", 0.5)}
        truth = rng.poisson(4.0, (6, 4, 4)).astype(float)
        report = evaluate(truth + rng.normal(size=truth.shape), truth, field, labelings)
        write_report(tmp_path / "report.csv", report)
        parsed = read_report(tmp_path / "report.csv")
        item = report.attributes["race"]
        assert parsed[("MAE", "")] == (report.mae, None)
        assert parsed[("RFG", "race")] == (item.rfg, None)
        assert parsed[("spearman_rho", "race")] == (item.rho, item.p_value)


class TestHeatmap:

    def test_all_zero(self):
        assert not heatmap_pixels(np.zeros((3, 2))).any()

    def test_single_maximum(self):
        frame = np.zeros((2, 3))
        frame[0, 2] = 4.0
        pixels = heatmap_pixels(frame)
        assert pixels[1, 2] == 255 and pixels.sum() == 255

    def test_levels_and_orientation(self):
        pixels = heatmap_pixels(np.array([[0.0, 5.0], [10.0, -3.0]]))
        np.testing.assert_array_equal(pixels, [[255, 0], [0, 128]])

    def test_export(self, tmp_path):
        frame = np.array([[0.1, 2.0 / 3.0], [-1.0, 4.0]])
        csv_path, pgm_path = export_heatmap(frame, tmp_path / "hour.pgm")
        assert csv_path.endswith("hour.csv") and pgm_path.endswith("hour.pgm")
        np.testing.assert_array_equal(read_heatmap_csv(csv_path), frame)
        np.testing.assert_array_equal(read_pgm(pgm_path), heatmap_pixels(frame))
        assert (tmp_path / "hour.pgm").read_bytes().startswith(b"P5\n2 2\n255\n")

    def test_export_clamped(self, tmp_path):
        csv_path, _ = export_heatmap(np.array([[-1.0, 2.0]]), tmp_path / "hour", clamp=True)
        np.testing.assert_array_equal(read_heatmap_csv(csv_path), [[0.0, 2.0]])

    def test_rejects_non_finite(self, tmp_path):
        with pytest.raises(InvalidInputError):
            export_heatmap(np.array([[np.inf]]), tmp_path / "hour")
