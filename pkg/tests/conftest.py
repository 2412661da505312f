import numpy as np
import pytest

from fairst.fairness.groups import discretize_groups
from fairst.models.ArchConfig import ArchConfig
from fairst.models.DemandTensor import DemandTensor
from fairst.models.DemographicField import DemographicField
from fairst.models.SeriesStack1D import SeriesStack1D
from fairst.ingest.slices import make_slices

START = 1609718400.0  # 2021-01-04T00:00:00Z, lunes


def make_field(population, **attributes):
    """DemographicField from raw (unnormalized) population and w+ arrays."""
    population = np.asarray(population, dtype=np.float64)
    return DemographicField(population / population.sum(),
                            {name: np.asarray(values, dtype=np.float64) for name, values in attributes.items()})


def random_field(rng, shape=(4, 4), attributes=("race",)):
    population = rng.uniform(0.5, 2.0, shape)
    fractions = {name: rng.uniform(0.0, 1.0, shape) for name in attributes}
    for values in fractions.values():
        # ambos grupos no vacíos con umbral 0.5
        values.flat[0], values.flat[1] = 0.9, 0.1
    return make_field(population, **fractions)


def tiny_arch(window=6, rows=4, cols=4, n_series=2, n_features=2, **overrides):
    settings = dict(window=window, rows=rows, cols=cols, n_series=n_series, n_features=n_features,
                    filters_3d=(2, 1), channels_3d_out=2, channels_1d=(2,), channels_1d_out=2,
                    channels_2d=(2,), fusion_channels=(3,))
    settings.update(overrides)
    return ArchConfig(**settings)


def tiny_dataset(seed=0, frames=20, shape=(4, 4), n_series=2, window=6):
    rng = np.random.default_rng(seed)
    demand = DemandTensor(rng.poisson(3.0, (frames,) + shape).astype(np.float64), START)
    names = [f"s{i}" for i in range(n_series)]
    series = SeriesStack1D(names, rng.normal(size=(n_series, frames))) if n_series else None
    return demand, make_slices(demand, series, window)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_cell_field():
    """p = (0.6, 0.4); cell a advantaged, cell b disadvantaged at threshold 0.5."""
    return make_field([[0.6, 0.4]], race=[[0.9, 0.2]])


@pytest.fixture
def two_cell_labels(two_cell_field):
    return discretize_groups(two_cell_field, "race", 0.5)


def bbox_meters(height_m, width_m, lat_min=47.6, lon_min=-122.35):
    """Bounding box measuring height_m x width_m under the grid projection."""
    from fairst.models.GridSpec import BoundingBox, meters_per_degree
    per_lat, _ = meters_per_degree(lat_min)
    lat_max = lat_min + height_m / per_lat
    _, per_lon = meters_per_degree((lat_min + lat_max) / 2.0)
    return BoundingBox(lat_min, lon_min, lat_max, lon_min + width_m / per_lon)


def ring_meters(grid, points):
    """Closed lat/lon ring from projected (x, y) vertices."""
    ring = [grid.to_latlon(x, y) for x, y in points]
    return ring + [ring[0]]
