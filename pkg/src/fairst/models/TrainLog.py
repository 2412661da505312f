from dataclasses import dataclass, field

HEADER = ("epoch", "acc_loss", "fair_loss", "lr", "seconds")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    acc_loss: float
    fair_loss: float
    lr: float
    seconds: float


@dataclass(frozen=True)
class StepRecord:
    step: int
    epoch: int
    batch: int
    lr: float
    acc_loss: float
    fair_loss: float
    loss: float


@dataclass
class TrainLog:
    epochs: list = field(default_factory=list)
    steps: list = field(default_factory=list)

    def rows(self):
        for record in self.epochs:
            yield record.epoch, record.acc_loss, record.fair_loss, record.lr, record.seconds

    def losses(self):
        """Everything except wall time, for determinism comparisons."""
        return [(r.epoch, r.acc_loss, r.fair_loss, r.lr) for r in self.epochs]

    def serialize(self):
        return {
            "epochs": [dict(zip(HEADER, row)) for row in self.rows()],
            "steps": len(self.steps),
        }
