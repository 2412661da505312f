from fairst.ingest.demographics import allocate_demographics, read_units
from fairst.ingest.features import rasterize_features, read_features
from fairst.ingest.geometry import clip_polygon_area
from fairst.ingest.grid import build_grid, locate
from fairst.ingest.series import load_series
from fairst.ingest.slices import make_slices
from fairst.ingest.trips import aggregate_trips, read_trips

__all__ = [
    "allocate_demographics", "read_units", "rasterize_features", "read_features",
    "clip_polygon_area", "build_grid", "locate", "load_series", "make_slices",
    "aggregate_trips", "read_trips",
]
