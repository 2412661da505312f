import json

import numpy as np
import pytest

from conftest import bbox_meters, ring_meters
from fairst.ingest.demographics import DemographicUnit, allocate_demographics, allocate_population, read_units
from fairst.ingest.geometry import clip_polygon_area, polygon_cell_fractions
from fairst.ingest.grid import build_grid
from fairst.utils import DataError, InvalidInputError


@pytest.fixture
def grid():
    return build_grid(bbox_meters(3000, 3000), 1000)


class TestClipPolygonArea:

    def test_polygon_inside_one_cell(self, grid):
        ring = ring_meters(grid, [(1200, 1200), (1800, 1200), (1800, 1700), (1200, 1700)])
        assert clip_polygon_area(ring, grid, (1, 1)) == pytest.approx(1.0, abs=1e-12)
        assert clip_polygon_area(ring, grid, (0, 1)) == 0.0

    def test_square_straddling_two_cells(self, grid):
        ring = ring_meters(grid, [(500, 200), (1500, 200), (1500, 800), (500, 800)])
        assert clip_polygon_area(ring, grid, (0, 0)) == pytest.approx(0.5, abs=1e-9)
        assert clip_polygon_area(ring, grid, (0, 1)) == pytest.approx(0.5, abs=1e-9)

    def test_triangle_matches_monte_carlo(self, grid):
        a, b, c = np.array([100.0, 100.0]), np.array([2700.0, 400.0]), np.array([900.0, 2500.0])
        fractions = polygon_cell_fractions(grid, [tuple(a), tuple(b), tuple(c)])

        rng = np.random.default_rng(2024)
        u, v = rng.uniform(size=(2, 4_000_000))
        flip = u + v > 1
        u[flip], v[flip] = 1 - u[flip], 1 - v[flip]
        samples = a + np.outer(u, b - a) + np.outer(v, c - a)
        rows = np.floor(samples[:, 1] / 1000).astype(int)
        cols = np.floor(samples[:, 0] / 1000).astype(int)
        oracle = np.zeros((3, 3))
        np.add.at(oracle, (rows, cols), 1.0)
        oracle /= len(samples)

        np.testing.assert_allclose(fractions, oracle, atol=1e-3)
        assert np.count_nonzero(fractions > 0) >= 3
        assert fractions.sum() == pytest.approx(1.0, abs=1e-12)

    def test_self_intersecting_polygon(self, grid):
        bowtie = ring_meters(grid, [(100, 100), (900, 900), (900, 100), (100, 900)])
        with pytest.raises(InvalidInputError):
            clip_polygon_area(bowtie, grid, (0, 0))


class TestAllocate:

    def test_unit_inside_one_cell(self, grid):
        ring = ring_meters(grid, [(1100, 100), (1900, 100), (1900, 900), (1100, 900)])
        field = allocate_demographics([DemographicUnit([ring], 100.0, {"race": 0.7})], grid)
        assert field.population_share[0, 1] == pytest.approx(1.0)
        assert field.advantaged("race")[0, 1] == pytest.approx(0.7)
        assert field.population_share.sum() == pytest.approx(1.0, abs=1e-12)

    def test_unit_split_evenly(self, grid):
        ring = ring_meters(grid, [(500, 200), (1500, 200), (1500, 800), (500, 800)])
        field = allocate_demographics([DemographicUnit([ring], 80.0, {"race": 0.3})], grid)
        np.testing.assert_allclose(field.population_share[0, :2], [0.5, 0.5], atol=1e-9)
        np.testing.assert_allclose(field.advantaged("race")[0, :2], [0.3, 0.3], atol=1e-12)

    def test_overlapping_units_match_direct_sum(self):
        grid = build_grid(bbox_meters(2000, 2000), 1000)
        unit_a = DemographicUnit([ring_meters(grid, [(0, 0), (2000, 0), (2000, 1000), (0, 1000)])], 100.0, {"race": 0.2})
        unit_b = DemographicUnit([ring_meters(grid, [(1000, 0), (2000, 0), (2000, 2000), (1000, 2000)])], 300.0, {"race": 0.8})
        field = allocate_demographics([unit_a, unit_b], grid)
        np.testing.assert_allclose(field.population_share, [[0.125, 0.5], [0.0, 0.375]], atol=1e-9)
        np.testing.assert_allclose(field.advantaged("race"), [[0.2, 0.65], [0.0, 0.8]], atol=1e-9)

    def test_population_conserved(self, grid, rng):
        units = []
        for _ in range(6):
            x, y = rng.uniform(0, 2000, 2)
            w, h = rng.uniform(100, 900, 2)
            ring = ring_meters(grid, [(x, y), (x + w, y), (x + w, y + h), (x, y + h)])
            units.append(DemographicUnit([ring], float(rng.uniform(10, 1000)), {"race": 0.5}))
        population, _ = allocate_population(units, grid)
        total = sum(u.population for u in units)
        assert population.sum() == pytest.approx(total, rel=1e-6)

    def test_zero_population(self, grid):
        ring = ring_meters(grid, [(100, 100), (900, 100), (900, 900), (100, 900)])
        with pytest.raises(InvalidInputError):
            allocate_demographics([DemographicUnit([ring], 0.0, {"race": 0.5})], grid)


class TestReadUnits:

    def _write(self, path, features):
        path.write_text(json.dumps({"type": "FeatureCollection", "features": features}))
        return path

    def test_reads_polygons_and_fractions(self, tmp_path, grid):
        ring = ring_meters(grid, [(100, 100), (900, 100), (900, 900), (100, 900)])
        feature = {"type": "Feature", "properties": {"population": 50, "race_adv_frac": 0.4, "age_adv_frac": 0.1},
                   "geometry": {"type": "Polygon", "coordinates": [[[lon, lat] for lat, lon in ring]]}}
        units = read_units(self._write(tmp_path / "d.geojson", [feature]))
        assert units[0].population == 50.0
        assert units[0].fractions == {"race": 0.4, "age": 0.1}
        assert units[0].rings[0][0] == pytest.approx(ring[0])

    def test_fraction_out_of_range(self, tmp_path):
        feature = {"type": "Feature", "properties": {"population": 5, "race_adv_frac": 1.5},
                   "geometry": {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 0]]]}}
        with pytest.raises(DataError):
            read_units(self._write(tmp_path / "d.geojson", [feature]))

    def test_missing_population(self, tmp_path):
        feature = {"type": "Feature", "properties": {"race_adv_frac": 0.5},
                   "geometry": {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 0]]]}}
        with pytest.raises(DataError) as error:
            read_units(self._write(tmp_path / "d.geojson", [feature]))
        assert error.value.payload["feature"] == 0

    def test_malformed_feature_reported_by_line(self, tmp_path):
        good = {"type": "Feature", "properties": {"population": 5, "race_adv_frac": 0.5},
                "geometry": {"type": "Polygon", "coordinates": [[[0, 0], [1, 0], [1, 1], [0, 0]]]}}
        bad = {"type": "Feature", "properties": {"population": 5, "race_adv_frac": 0.5},
               "geometry": {"type": "Polygon"}}
        path = tmp_path / "d.geojson"
        path.write_text('{"type": "FeatureCollection", "features": [\n'
                        + json.dumps(good) + ",\n" + json.dumps(bad) + "\n]}\n")
        with pytest.raises(DataError) as error:
            read_units(path)
        assert error.value.payload["line"] == 3
        assert error.value.payload["feature"] == 1
        assert "línea 3" in error.value.message


class TestBboxNotMultipleOfCell:
    """4500 m x 4000 m at 1000 m: the northern row is only half inside the bbox."""

    @pytest.fixture
    def padded(self):
        grid = build_grid(bbox_meters(4500, 4000), 1000)
        assert grid.shape == (5, 4)
        return grid

    def test_polygon_north_of_bbox_is_not_allocated(self, padded):
        ring = ring_meters(padded, [(200, 4600), (800, 4600), (800, 4900), (200, 4900)])
        assert clip_polygon_area(ring, padded, (4, 0)) == 0.0

    def test_polygon_straddling_the_edge_keeps_only_the_inside(self, padded):
        ring = ring_meters(padded, [(200, 4300), (800, 4300), (800, 4700), (200, 4700)])
        assert clip_polygon_area(ring, padded, (4, 0)) == pytest.approx(0.5, abs=1e-9)

        fractions = polygon_cell_fractions(padded, [(200, 4300), (800, 4300), (800, 4700), (200, 4700)])
        assert fractions.sum() == pytest.approx(0.5, abs=1e-9)

    def test_population_outside_bbox_is_dropped(self, padded):
        outside = ring_meters(padded, [(200, 4600), (800, 4600), (800, 4900), (200, 4900)])
        inside = ring_meters(padded, [(200, 200), (800, 200), (800, 800), (200, 800)])
        field = allocate_demographics([DemographicUnit([outside], 100.0, {"race": 0.9}),
                                       DemographicUnit([inside], 100.0, {"race": 0.1})], padded)
        assert field.population_share[4, 0] == 0.0
        assert field.population_share[0, 0] == pytest.approx(1.0, abs=1e-12)
