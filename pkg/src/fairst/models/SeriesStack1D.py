from dataclasses import dataclass, field

import numpy as np


@dataclass
class SeriesStack1D:
    """City-level hourly series, standardized with training-period statistics."""

    names: list = field(default_factory=list)
    series: np.ndarray = None
    mean: np.ndarray = None
    std: np.ndarray = None

    def __post_init__(self):
        m = len(self.names)
        self.series = np.zeros((m, 0)) if self.series is None else np.asarray(self.series, dtype=np.float64)
        self.mean = np.zeros(m) if self.mean is None else np.asarray(self.mean, dtype=np.float64)
        self.std = np.ones(m) if self.std is None else np.asarray(self.std, dtype=np.float64)

    @classmethod
    def empty(cls, length):
        return cls([], np.zeros((0, length)))

    @property
    def n_series(self):
        return len(self.names)

    def serialize(self):
        return {
            "names": list(self.names),
            "length": int(self.series.shape[1]),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
        }
