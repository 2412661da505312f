from dataclasses import dataclass, field

from fairst.models.ArchConfig import ArchConfig
from fairst.models.FairnessConfig import FairnessConfig
from fairst.models.GridSpec import BoundingBox
from fairst.models.TrainConfig import TrainConfig


@dataclass(frozen=True)
class FeatureSource:
    name: str
    path: str
    mode: str = "count"


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs; times are UTC epoch seconds."""

    output_dir: str
    bbox: BoundingBox
    cell_size_m: float
    start: float
    boundary: float
    end: float
    trips: str = None
    demographics: str = None
    weather: str = None
    weather_names: tuple = ()
    features: tuple = ()
    window: int = 168
    arch: dict = field(default_factory=dict)
    train: TrainConfig = field(default_factory=TrainConfig)
    fairness: FairnessConfig = field(default_factory=FairnessConfig)
    sweep_lambdas: tuple = (0.0, 1.0)
    predict_hours: tuple = ()
    predict_clamp: bool = False

    def arch_for(self, rows, cols, n_series, n_features):
        """ArchConfig for the prepared data shapes plus the configured widths."""
        return ArchConfig(window=self.window, rows=rows, cols=cols, n_series=n_series,
                          n_features=n_features, **self.arch)

    def serialize(self):
        return {
            "output_dir": self.output_dir,
            "bbox": list(self.bbox),
            "cell_size_m": self.cell_size_m,
            "split": {"start": self.start, "boundary": self.boundary, "end": self.end},
            "window": self.window,
            "arch": dict(self.arch),
            "train": self.train.serialize(),
            "fairness": self.fairness.serialize(),
        }
