import logging
from dataclasses import dataclass

import numpy as np

from fairst.ingest.geojson import feature_error, read_feature_collection
from fairst.ingest.geometry import candidate_cells, clip_segment, segment_length
from fairst.ingest.grid import locate_many
from fairst.models.FeatureStack2D import FeatureStack2D
from fairst.utils import InvalidInputError

logger = logging.getLogger(__name__)

MODES = ("count", "total_length")


@dataclass(frozen=True)
class UrbanFeature:
    """A point (one vertex) or polyline (two or more vertices) in lat/lon."""

    kind: str
    coords: tuple


def _geometry(geometry):
    kind = geometry.get("type")
    coords = geometry["coordinates"]
    if kind == "Point":
        return [UrbanFeature("Point", ((float(coords[1]), float(coords[0])),))]
    if kind == "MultiPoint":
        return [UrbanFeature("Point", ((float(lat), float(lon)),)) for lon, lat in coords]
    if kind == "LineString":
        return [UrbanFeature("LineString", tuple((float(lat), float(lon)) for lon, lat in coords))]
    if kind == "MultiLineString":
        return [UrbanFeature("LineString", tuple((float(lat), float(lon)) for lon, lat in line)) for line in coords]
    raise ValueError(f"geometría no soportada {kind}")


def read_features(path):
    features = []
    for index, (item, line) in enumerate(read_feature_collection(path, "features")):
        geometry = item.get("geometry") if isinstance(item, dict) else None
        if not isinstance(geometry, dict):
            raise feature_error(path, index, line, "feature sin geometría")
        try:
            features.extend(_geometry(geometry))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise feature_error(path, index, line, f"geometría mal formada ({exc})")
    return features


def _clipped_lengths(grid, line):
    """Per-cell length of a projected polyline; shared edges go to the larger index."""
    lengths = {}
    size = grid.cell_size_m
    for a, b in zip(line, line[1:]):
        box = (min(a[0], b[0]), min(a[1], b[1]), max(a[0], b[0]), max(a[1], b[1]))
        for row, col in candidate_cells(grid, box):
            piece = clip_segment(a, b, grid.cell_rect(row, col))
            if piece is None:
                continue
            length = segment_length(*piece)
            if length <= 0:
                continue
            mid_x = (piece[0][0] + piece[1][0]) / 2.0
            mid_y = (piece[0][1] + piece[1][1]) / 2.0
            # un tramo sobre un borde compartido pertenece a una sola celda
            owner = (min(int(np.floor(mid_y / size)), grid.rows - 1), min(int(np.floor(mid_x / size)), grid.cols - 1))
            if owner != (row, col):
                continue
            lengths[(row, col)] = lengths.get((row, col), 0.0) + length
    return lengths


def rasterize_features(geoms, grid, mode):
    """One 2D layer: feature count or total clipped length (meters) per cell."""
    if mode not in MODES:
        raise InvalidInputError(f"Modo desconocido: {mode} (opciones: {', '.join(MODES)})")
    layer = np.zeros(grid.shape)

    points = [g.coords[0] for g in geoms if g.kind == "Point"]
    if points and mode == "count":
        rows, cols = locate_many(grid, [p[0] for p in points], [p[1] for p in points])
        keep = rows >= 0
        np.add.at(layer, (rows[keep], cols[keep]), 1.0)

    for geom in geoms:
        if geom.kind == "Point":
            continue
        if len(geom.coords) < 2:
            raise InvalidInputError("Polilínea con menos de 2 vértices")
        line = [grid.to_xy(lat, lon) for lat, lon in geom.coords]
        lengths = _clipped_lengths(grid, line)
        for (row, col), length in lengths.items():
            layer[row, col] += 1.0 if mode == "count" else length
    return layer


def build_feature_stack(layers, grid):
    """layers: iterable of (name, geometries, mode)."""
    built = []
    for name, geoms, mode in layers:
        built.append((name, rasterize_features(geoms, grid, mode)))
        logger.info(f"Feature 2D '{name}' ({mode}): {len(geoms)} geometrías")
    return FeatureStack2D.stack(built, grid.shape)
