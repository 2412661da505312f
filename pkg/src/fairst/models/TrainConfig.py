from dataclasses import dataclass

from fairst.utils import InvalidInputError


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    batch_size: int = 32
    seed: int = 0
    lr_base: float = 0.005
    lr_decay: float = 0.96
    lr_every: int = 5000
    checkpoint_every: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise InvalidInputError("epochs debe ser >= 1")
        if self.batch_size < 1:
            raise InvalidInputError("batch_size debe ser >= 1")
        if self.lr_every < 1:
            raise InvalidInputError("lr_every debe ser >= 1")

    def serialize(self):
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "seed": self.seed,
            "lr_base": self.lr_base,
            "lr_decay": self.lr_decay,
            "lr_every": self.lr_every,
            "checkpoint_every": self.checkpoint_every,
        }
