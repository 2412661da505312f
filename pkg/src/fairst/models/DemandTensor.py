from dataclasses import dataclass

import numpy as np

from fairst.utils import InvalidInputError, utc_datetime


@dataclass
class DemandTensor:
    """Demand indexed (time, row, col). Ground truth and predictions share this type."""

    values: np.ndarray
    start_time: float
    interval_s: int = 3600

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 3:
            raise InvalidInputError(f"DemandTensor necesita 3 ejes, recibió {self.values.ndim}")

    @property
    def n_frames(self):
        return self.values.shape[0]

    def frame_time(self, index):
        return self.start_time + index * self.interval_s

    def serialize(self):
        return {
            "shape": list(self.values.shape),
            "start_time": utc_datetime(self.start_time).isoformat(),
            "interval_s": self.interval_s,
            "total": float(self.values.sum()),
        }
