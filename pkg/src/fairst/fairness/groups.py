import logging

import numpy as np

from fairst.models.GroupLabeling import ADVANTAGED, DISADVANTAGED, EXCLUDED, GroupLabeling
from fairst.utils import InvalidInputError

logger = logging.getLogger(__name__)

P_MIN = 1e-9


def city_threshold(field, attribute):
    """City-wide advantaged share: population-weighted mean of w^+."""
    return float(np.sum(field.population_share * field.advantaged(attribute)))


def discretize_groups(field, attribute, threshold, p_min=P_MIN):
    """Label cells advantaged iff w^+ > threshold; cells under p_min are excluded."""
    if not 0.0 <= threshold <= 1.0:
        raise InvalidInputError(f"Umbral {threshold} fuera de [0, 1]")
    fractions = field.advantaged(attribute)
    labels = np.where(fractions > threshold, ADVANTAGED, DISADVANTAGED).astype(np.int8)
    labels[field.population_share < p_min] = EXCLUDED
    labeling = GroupLabeling(attribute, labels, float(threshold))
    logger.debug(f"Grupos {attribute}: {labeling.serialize()}")
    return labeling


def build_labelings(field, config):
    """One GroupLabeling per configured attribute; a None threshold uses the city statistic."""
    labelings = {}
    for name, spec in config.attributes.items():
        threshold = spec.threshold if spec.threshold is not None else city_threshold(field, name)
        labelings[name] = discretize_groups(field, name, threshold, config.p_min)
    return labelings
