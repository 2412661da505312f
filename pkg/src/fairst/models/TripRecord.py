import math
from dataclasses import dataclass

from fairst.utils import InvalidInputError


@dataclass(frozen=True)
class TripRecord:
    timestamp: float
    lat: float
    lon: float

    def __post_init__(self):
        if not math.isfinite(self.timestamp):
            raise InvalidInputError("Timestamp de viaje no finito")
        if not -90.0 <= self.lat <= 90.0 or not -180.0 <= self.lon <= 180.0:
            raise InvalidInputError(f"Coordenadas fuera de rango: ({self.lat}, {self.lon})")
