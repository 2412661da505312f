from dataclasses import dataclass, field

import numpy as np

from fairst.models.ArchConfig import ArchConfig


@dataclass
class ModelParams:
    arch: ArchConfig
    tensors: dict = field(default_factory=dict)

    def names(self):
        return list(self.tensors)

    def count(self):
        return int(sum(t.size for t in self.tensors.values()))

    def copy(self):
        return ModelParams(self.arch, {k: v.copy() for k, v in self.tensors.items()})

    def stream(self, prefix):
        return {k: v for k, v in self.tensors.items() if k.startswith(prefix + ".")}

    def __getitem__(self, name):
        return self.tensors[name]

    def serialize(self):
        return {
            "arch": self.arch.serialize(),
            "tensors": {name: list(t.shape) for name, t in self.tensors.items()},
            "count": self.count(),
        }

    def equals(self, other):
        if self.names() != other.names():
            return False
        return all(np.array_equal(self.tensors[k], other.tensors[k]) for k in self.tensors)
