from dataclasses import asdict, dataclass

from fairst.utils import InvalidInputError


@dataclass(frozen=True)
class ArchConfig:
    """Shape-determining hyperparameters of the three-stream network."""

    window: int = 168
    rows: int = 8
    cols: int = 8
    n_series: int = 0
    n_features: int = 0
    filters_3d: tuple = (16, 32, 1)
    kernel_size: int = 3
    channels_3d_out: int = 8
    channels_1d: tuple = (4,)
    channels_1d_out: int = 4
    channels_2d: tuple = (4,)
    fusion_channels: tuple = (8,)
    use_1d: bool = True
    use_2d: bool = True
    leaky_slope: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "filters_3d", tuple(int(f) for f in self.filters_3d))
        object.__setattr__(self, "channels_1d", tuple(int(c) for c in self.channels_1d))
        object.__setattr__(self, "channels_2d", tuple(int(c) for c in self.channels_2d))
        object.__setattr__(self, "fusion_channels", tuple(int(c) for c in self.fusion_channels))
        if self.window < 1 or self.rows < 1 or self.cols < 1:
            raise InvalidInputError("window, rows y cols deben ser >= 1")
        if not self.filters_3d or self.filters_3d[-1] != 1:
            raise InvalidInputError("filters_3d debe terminar en 1 (capa de reducción)")
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise InvalidInputError(f"kernel_size debe ser impar, recibió {self.kernel_size}")
        if self.n_series < 0 or self.n_features < 0:
            raise InvalidInputError("n_series y n_features no pueden ser negativos")
        if self.has_2d and not self.channels_2d:
            raise InvalidInputError("channels_2d vacío con el flujo 2D activo")

    @property
    def has_1d(self):
        return self.use_1d and self.n_series > 0

    @property
    def has_2d(self):
        return self.use_2d and self.n_features > 0

    @property
    def fused_channels(self):
        total = self.channels_3d_out
        if self.has_1d:
            total += self.channels_1d_out
        if self.has_2d:
            total += self.channels_2d[-1]
        return total

    def serialize(self):
        data = asdict(self)
        for key in ("filters_3d", "channels_1d", "channels_2d", "fusion_channels"):
            data[key] = list(data[key])
        return data

    @classmethod
    def from_dict(cls, data):
        return cls(**data)
