from dataclasses import dataclass, field

import numpy as np

from fairst.utils import InvalidInputError


@dataclass
class DemographicField:
    """Per-cell population share p_i and advantaged fractions w_i^+ per attribute.

    w_i^- is always 1 - w_i^+ and is never stored.
    """

    population_share: np.ndarray
    attributes: dict = field(default_factory=dict)

    def __post_init__(self):
        self.population_share = np.asarray(self.population_share, dtype=np.float64)
        if np.any(self.population_share < 0):
            raise InvalidInputError("population_share negativa")
        if abs(self.population_share.sum() - 1.0) > 1e-9:
            raise InvalidInputError(f"population_share suma {self.population_share.sum()!r}, se esperaba 1")
        checked = {}
        for name, fractions in self.attributes.items():
            fractions = np.asarray(fractions, dtype=np.float64)
            if fractions.shape != self.population_share.shape:
                raise InvalidInputError(f"Atributo {name} con forma {fractions.shape}")
            if np.any(fractions < 0) or np.any(fractions > 1):
                raise InvalidInputError(f"Atributo {name} fuera de [0, 1]")
            checked[name] = fractions
        self.attributes = checked

    @property
    def shape(self):
        return self.population_share.shape

    def advantaged(self, attribute):
        if attribute not in self.attributes:
            raise InvalidInputError(f"Atributo desconocido: {attribute}")
        return self.attributes[attribute]

    def disadvantaged(self, attribute):
        return 1.0 - self.advantaged(attribute)

    def included(self, p_min):
        return self.population_share >= p_min

    def serialize(self):
        return {
            "shape": list(self.shape),
            "attributes": sorted(self.attributes),
            "populated_cells": int(np.count_nonzero(self.population_share)),
        }
