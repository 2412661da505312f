import math
from dataclasses import dataclass
from typing import NamedTuple

# Radio medio de la Tierra (IUGG), en metros
EARTH_RADIUS_M = 6371008.8


class BoundingBox(NamedTuple):
    lat_min: float
    lon_min: float
    lat_max: float
    lon_max: float


@dataclass(frozen=True)
class GridSpec:
    """A bounding box cut into equal square cells.

    Row 0 is the southern edge and column 0 the western edge. Coordinates are
    projected with an equirectangular approximation whose factors are fixed at
    the bbox center latitude.
    """

    origin_lat: float
    origin_lon: float
    cell_size_m: float
    rows: int
    cols: int
    meters_per_deg_lat: float
    meters_per_deg_lon: float
    height_m: float
    width_m: float

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def n_cells(self):
        return self.rows * self.cols

    @property
    def bbox(self):
        return BoundingBox(
            self.origin_lat,
            self.origin_lon,
            self.origin_lat + self.height_m / self.meters_per_deg_lat,
            self.origin_lon + self.width_m / self.meters_per_deg_lon,
        )

    def to_xy(self, lat, lon):
        """Projected meters east (x) and north (y) of the origin."""
        return ((lon - self.origin_lon) * self.meters_per_deg_lon,
                (lat - self.origin_lat) * self.meters_per_deg_lat)

    def to_latlon(self, x, y):
        return (self.origin_lat + y / self.meters_per_deg_lat,
                self.origin_lon + x / self.meters_per_deg_lon)

    def cell_rect(self, row, col):
        """(x_min, y_min, x_max, y_max) of a cell in projected meters.

        The last row and column are cut at the bbox edge, so geometry beyond
        the bbox never lands in a cell.
        """
        size = self.cell_size_m
        return (col * size, row * size,
                min((col + 1) * size, self.width_m), min((row + 1) * size, self.height_m))

    def serialize(self):
        return {
            "origin_lat": self.origin_lat,
            "origin_lon": self.origin_lon,
            "cell_size_m": self.cell_size_m,
            "rows": self.rows,
            "cols": self.cols,
            "meters_per_deg_lat": self.meters_per_deg_lat,
            "meters_per_deg_lon": self.meters_per_deg_lon,
            "height_m": self.height_m,
            "width_m": self.width_m,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            origin_lat=float(data["origin_lat"]),
            origin_lon=float(data["origin_lon"]),
            cell_size_m=float(data["cell_size_m"]),
            rows=int(data["rows"]),
            cols=int(data["cols"]),
            meters_per_deg_lat=float(data["meters_per_deg_lat"]),
            meters_per_deg_lon=float(data["meters_per_deg_lon"]),
            height_m=float(data["height_m"]),
            width_m=float(data["width_m"]),
        )


def meters_per_degree(center_lat):
    per_lat = math.pi * EARTH_RADIUS_M / 180.0
    return per_lat, per_lat * math.cos(math.radians(center_lat))
