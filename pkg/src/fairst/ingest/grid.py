import logging
import math

import numpy as np

from fairst.models.GridSpec import BoundingBox, GridSpec, meters_per_degree
from fairst.utils import InvalidInputError

logger = logging.getLogger(__name__)

# tolerancia relativa (en anchos de celda) para puntos construidos sobre un borde
EDGE_EPS = 1e-9


def build_grid(bbox, cell_size_m):
    """Partition `bbox` into square cells of `cell_size_m`, ceiling on each axis."""
    bbox = BoundingBox(*bbox)
    if not cell_size_m or cell_size_m <= 0 or not math.isfinite(cell_size_m):
        raise InvalidInputError(f"cell_size_m debe ser > 0, recibió {cell_size_m}")
    if not (bbox.lat_max > bbox.lat_min and bbox.lon_max > bbox.lon_min):
        raise InvalidInputError(f"Bounding box degenerada: {tuple(bbox)}")
    if not (-90 <= bbox.lat_min and bbox.lat_max <= 90 and -180 <= bbox.lon_min and bbox.lon_max <= 180):
        raise InvalidInputError(f"Bounding box fuera de rango: {tuple(bbox)}")

    per_lat, per_lon = meters_per_degree((bbox.lat_min + bbox.lat_max) / 2.0)
    height_m = (bbox.lat_max - bbox.lat_min) * per_lat
    width_m = (bbox.lon_max - bbox.lon_min) * per_lon
    rows = max(1, math.ceil(height_m / cell_size_m - EDGE_EPS))
    cols = max(1, math.ceil(width_m / cell_size_m - EDGE_EPS))

    grid = GridSpec(
        origin_lat=bbox.lat_min,
        origin_lon=bbox.lon_min,
        cell_size_m=float(cell_size_m),
        rows=rows,
        cols=cols,
        meters_per_deg_lat=per_lat,
        meters_per_deg_lon=per_lon,
        height_m=height_m,
        width_m=width_m,
    )
    logger.info(f"Grid {rows}x{cols} de {cell_size_m} m ({height_m:.0f} m x {width_m:.0f} m)")
    return grid


def locate(grid, lat, lon):
    """Cell (row, col) holding the point, or None outside the bbox.

    Shared edges belong to the cell with the larger index; the bbox's own
    northern/eastern edge stays in the last cell.
    """
    rows, cols = locate_many(grid, np.asarray([lat], dtype=np.float64), np.asarray([lon], dtype=np.float64))
    if rows[0] < 0:
        return None
    return int(rows[0]), int(cols[0])


def locate_many(grid, lats, lons):
    """Vectorized locate: (rows, cols) arrays with -1 for points outside the bbox."""
    x, y = grid.to_xy(np.asarray(lats, dtype=np.float64), np.asarray(lons, dtype=np.float64))
    tol_x = EDGE_EPS * max(grid.width_m, grid.cell_size_m)
    tol_y = EDGE_EPS * max(grid.height_m, grid.cell_size_m)
    inside = (x >= -tol_x) & (x <= grid.width_m + tol_x) & (y >= -tol_y) & (y <= grid.height_m + tol_y)

    col = np.floor(x / grid.cell_size_m + EDGE_EPS).astype(np.int64)
    row = np.floor(y / grid.cell_size_m + EDGE_EPS).astype(np.int64)
    col = np.clip(col, 0, grid.cols - 1)
    row = np.clip(row, 0, grid.rows - 1)
    return np.where(inside, row, -1), np.where(inside, col, -1)
