from dataclasses import dataclass, field

import numpy as np


@dataclass
class FeatureStack2D:
    names: list = field(default_factory=list)
    maps: np.ndarray = None

    def __post_init__(self):
        if self.maps is None:
            self.maps = np.zeros((0, 0, 0))
        self.maps = np.asarray(self.maps, dtype=np.float64)

    @classmethod
    def stack(cls, layers, shape):
        """Build from (name, (rows, cols) array) pairs."""
        names = [name for name, _ in layers]
        if not layers:
            return cls(names, np.zeros((0,) + tuple(shape)))
        return cls(names, np.stack([np.asarray(layer, dtype=np.float64) for _, layer in layers]))

    def normalized(self):
        # cada mapa escalado por su máximo; los mapas vacíos quedan en cero
        peaks = self.maps.reshape(len(self.names), -1).max(axis=1) if self.names else np.zeros(0)
        peaks = np.where(peaks > 0, peaks, 1.0)
        return self.maps / peaks[:, None, None]

    def serialize(self):
        return {"names": list(self.names), "shape": list(self.maps.shape)}
