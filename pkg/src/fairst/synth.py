"""Seeded synthetic city: hourly Poisson demand with a daily and weekly cycle,
inflated by `bias` in cells whose advantaged share is above the city mean."""
import json
import logging
import math
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
import yaml

from fairst.fairness.groups import city_threshold
from fairst.ingest.demographics import DemographicUnit, allocate_demographics
from fairst.ingest.grid import build_grid
from fairst.models.DemandTensor import DemandTensor
from fairst.models.GridSpec import BoundingBox, meters_per_degree
from fairst.utils import InvalidInputError, atomic_write, to_utc_seconds

logger = logging.getLogger(__name__)

DAY_S = 86400
WEATHER_NAMES = ("temperature", "precipitation")


@dataclass
class SyntheticCity:
    grid: object
    units: list
    field: object
    demand: DemandTensor
    trips: pd.DataFrame
    weather: pd.DataFrame
    features: dict
    start: float
    boundary: float
    end: float
    attributes: tuple = ()
    bias: float = 1.0
    advantaged: np.ndarray = field(default=None, repr=False)

    def serialize(self):
        return {
            "shape": list(self.demand.values.shape),
            "trips": int(len(self.trips)),
            "bias": self.bias,
            "attributes": list(self.attributes),
            "advantaged_cells": int(np.count_nonzero(self.advantaged)),
        }


def _bbox(lat_min, lon_min, rows, cols, cell_size_m):
    per_lat, _ = meters_per_degree(lat_min)
    lat_max = lat_min + rows * cell_size_m / per_lat
    _, per_lon = meters_per_degree((lat_min + lat_max) / 2.0)
    return BoundingBox(lat_min, lon_min, lat_max, lon_min + cols * cell_size_m / per_lon)


def _cell_ring(grid, row, col):
    x0, y0, x1, y1 = grid.cell_rect(row, col)
    return [grid.to_latlon(x, y) for x, y in ((x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0))]


def _fractions(rng, rows, cols, index):
    # cada atributo crece en una dirección distinta
    axis = np.arange(cols)[None, :] if index % 2 == 0 else np.arange(rows)[:, None]
    span = max(axis.max(), 1)
    base = np.broadcast_to(0.1 + 0.8 * axis / span, (rows, cols))
    return np.clip(base + rng.normal(0.0, 0.05, (rows, cols)), 0.01, 0.99)


def _profile(seconds):
    hours = (seconds % DAY_S) / 3600.0
    days = ((seconds + 3 * DAY_S) % (7 * DAY_S)) / DAY_S
    return (1.0 + 0.8 * np.sin(2 * math.pi * (hours - 8.0) / 24.0)) * (1.0 + 0.3 * np.cos(2 * math.pi * days / 7.0))


def generate_city(rows=8, cols=8, days=21, bias=3.0, seed=0, base_rate=2.0, cell_size_m=1000.0,
                  lat_min=30.2, lon_min=-97.8, start="2021-01-04T00:00:00Z", attributes=("race",)):
    if days < 2 or bias <= 0 or base_rate <= 0 or not attributes:
        raise InvalidInputError("synth necesita days >= 2, bias > 0, base_rate > 0 y al menos un atributo")
    rng = np.random.default_rng(seed)
    grid = build_grid(_bbox(lat_min, lon_min, rows, cols, cell_size_m), cell_size_m)
    start = to_utc_seconds(start)
    if start % 3600:
        raise InvalidInputError("synth.start debe estar alineado a la hora")
    end = start + days * DAY_S
    boundary = start + int(round(days * 0.75)) * DAY_S

    population = rng.uniform(200.0, 2000.0, grid.shape)
    fractions = {name: _fractions(rng, grid.rows, grid.cols, i) for i, name in enumerate(attributes)}
    units = [
        DemographicUnit([_cell_ring(grid, r, c)], float(population[r, c]),
                        {name: float(values[r, c]) for name, values in fractions.items()})
        for r in range(grid.rows) for c in range(grid.cols)
    ]
    demographics = allocate_demographics(units, grid)

    lead = attributes[0]
    advantaged = demographics.advantaged(lead) > city_threshold(demographics, lead)
    intensity = base_rate * demographics.population_share * grid.n_cells * np.where(advantaged, bias, 1.0)
    frame_start = start + 3600.0 * np.arange(days * 24)
    rates = _profile(frame_start)[:, None, None] * intensity[None]
    counts = rng.poisson(rates).astype(np.float64)
    demand = DemandTensor(counts, start)

    trips = _trips(rng, grid, counts, start)
    weather = _weather(rng, frame_start)
    features = _features(rng, grid, advantaged)
    logger.info(f"Ciudad sintética {grid.rows}x{grid.cols}, {days} días, {len(trips)} viajes, sesgo {bias}")
    return SyntheticCity(grid, units, demographics, demand, trips, weather, features, start, boundary, end,
                         tuple(attributes), float(bias), advantaged)


def _trips(rng, grid, counts, start):
    t, r, c = np.nonzero(counts)
    k = counts[t, r, c].astype(np.int64)
    t, r, c = np.repeat(t, k), np.repeat(r, k), np.repeat(c, k)
    # lejos de los bordes de celda
    x = (c + rng.uniform(0.05, 0.95, t.size)) * grid.cell_size_m
    y = (r + rng.uniform(0.05, 0.95, t.size)) * grid.cell_size_m
    lat, lon = grid.to_latlon(x, y)
    seconds = start + t * 3600 + np.floor(rng.uniform(0.0, 3600.0, t.size))
    stamps = pd.to_datetime(seconds, unit="s", utc=True).strftime("%Y-%m-%dT%H:%M:%SZ")
    return pd.DataFrame({"timestamp": stamps, "lat": lat, "lon": lon})


def _weather(rng, frame_start):
    hours = (frame_start % DAY_S) / 3600.0
    temperature = 12.0 + 6.0 * np.sin(2 * math.pi * (hours - 9.0) / 24.0) + rng.normal(0.0, 1.0, hours.size)
    precipitation = np.where(rng.uniform(size=hours.size) < 0.1, rng.gamma(2.0, 1.5, hours.size), 0.0)
    stamps = pd.to_datetime(frame_start, unit="s", utc=True).strftime("%Y-%m-%dT%H:%M:%SZ")
    return pd.DataFrame({"timestamp": stamps, "temperature": temperature, "precipitation": precipitation})


def _features(rng, grid, advantaged):
    """GeoJSON collections: points of interest (denser where advantaged) and east-west roads."""
    points = []
    for r in range(grid.rows):
        for c in range(grid.cols):
            for _ in range(rng.poisson(3.0 if advantaged[r, c] else 1.0)):
                lat, lon = grid.to_latlon((c + rng.uniform(0.1, 0.9)) * grid.cell_size_m,
                                          (r + rng.uniform(0.1, 0.9)) * grid.cell_size_m)
                points.append({"type": "Feature", "properties": {},
                               "geometry": {"type": "Point", "coordinates": [lon, lat]}})
    roads = []
    for r in range(0, grid.rows, 2):
        y = (r + 0.5) * grid.cell_size_m
        west, east = grid.to_latlon(0.0, y), grid.to_latlon(grid.width_m, y)
        roads.append({"type": "Feature", "properties": {},
                      "geometry": {"type": "LineString", "coordinates": [[west[1], west[0]], [east[1], east[0]]]}})
    return {
        "poi": ({"type": "FeatureCollection", "features": points}, "count"),
        "roads": ({"type": "FeatureCollection", "features": roads}, "total_length"),
    }


def _stamp(seconds):
    return pd.Timestamp(seconds, unit="s", tz="UTC").strftime("%Y-%m-%dT%H:%M:%SZ")


def _write_json(path, payload):
    with atomic_write(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)


def _write_frame(path, frame):
    with atomic_write(path, "w", newline="", encoding="utf-8") as handle:
        frame.to_csv(handle, index=False, float_format="%.17g")


def write_city(city, directory, window=24, fairness_kind="IF", lam=0.0):
    """Write inputs plus a ready-to-run config.yaml; returns the config path."""
    os.makedirs(directory, exist_ok=True)
    _write_frame(os.path.join(directory, "trips.csv"), city.trips)
    _write_frame(os.path.join(directory, "weather.csv"), city.weather)

    units = [
        {
            "type": "Feature",
            "properties": dict({"population": unit.population},
                               **{f"{name}_adv_frac": value for name, value in unit.fractions.items()}),
            "geometry": {"type": "Polygon", "coordinates": [[[lon, lat] for lat, lon in ring] for ring in unit.rings]},
        }
        for unit in city.units
    ]
    _write_json(os.path.join(directory, "demographics.geojson"), {"type": "FeatureCollection", "features": units})
    sources = []
    for name, (collection, mode) in city.features.items():
        _write_json(os.path.join(directory, f"{name}.geojson"), collection)
        sources.append({"name": name, "path": f"{name}.geojson", "mode": mode})

    bbox = city.grid.bbox
    config = {
        "paths": {"trips": "trips.csv", "demographics": "demographics.geojson", "weather": "weather.csv",
                  "features": sources, "output_dir": "run"},
        "grid": {"lat_min": bbox.lat_min, "lon_min": bbox.lon_min, "lat_max": bbox.lat_max,
                 "lon_max": bbox.lon_max, "cell_size_m": city.grid.cell_size_m},
        "split": {"start": _stamp(city.start), "boundary": _stamp(city.boundary), "end": _stamp(city.end)},
        "window": window,
        "weather": {"names": list(WEATHER_NAMES)},
        "fairness": {"kind": fairness_kind, "lambda": lam,
                     "attributes": {name: {"weight": 1.0, "threshold": "auto"} for name in city.attributes}},
    }
    path = os.path.join(directory, "config.yaml")
    with atomic_write(path, "w", encoding="utf-8") as handle:
        yaml.safe_dump(config, handle, sort_keys=False)
    logger.info(f"Ciudad sintética escrita en {directory}")
    return path
