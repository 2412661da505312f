from dataclasses import dataclass

import numpy as np

ADVANTAGED = 1
DISADVANTAGED = 0
EXCLUDED = -1


@dataclass
class GroupLabeling:
    attribute: str
    labels: np.ndarray
    threshold: float

    @property
    def advantaged(self):
        return self.labels == ADVANTAGED

    @property
    def disadvantaged(self):
        return self.labels == DISADVANTAGED

    @property
    def n_advantaged(self):
        return int(np.count_nonzero(self.advantaged))

    @property
    def n_disadvantaged(self):
        return int(np.count_nonzero(self.disadvantaged))

    def swapped(self):
        labels = self.labels.copy()
        labels[self.advantaged] = DISADVANTAGED
        labels[self.disadvantaged] = ADVANTAGED
        return GroupLabeling(self.attribute, labels, self.threshold)

    def serialize(self):
        return {
            "attribute": self.attribute,
            "threshold": self.threshold,
            "n_advantaged": self.n_advantaged,
            "n_disadvantaged": self.n_disadvantaged,
            "n_excluded": int(np.count_nonzero(self.labels == EXCLUDED)),
        }
