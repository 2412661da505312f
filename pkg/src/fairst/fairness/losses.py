"""Differentiable per-frame fairness penalties.

All losses take a prediction Tensor (or array) shaped (..., H, W) and the
matching ground truth, and return one value per leading index. The
normalizer is max(Σ_i y_i, y_min).
"""
import numpy as np

from fairst.fairness.groups import P_MIN
from fairst.fairness.metrics import if_coefficients, rf_coefficients
from fairst.tensor.engine import Tensor, absolute, as_tensor, square
from fairst.utils import DegenerateGroupError, InvalidInputError

Y_MIN = 1.0


def _normalizer(truth, y_min):
    return np.maximum(np.asarray(truth, dtype=np.float64).sum(axis=(-2, -1)), y_min)


def _signed(pred, coefficients):
    return (as_tensor(pred) * coefficients).sum(axis=(-2, -1))


def _groups(labels):
    plus, minus = labels.advantaged, labels.disadvantaged
    if not plus.any() or not minus.any():
        raise DegenerateGroupError(f"Grupo vacío para {labels.attribute}", payload={"attribute": labels.attribute})
    return plus, minus


def rf_loss(pred_t, truth_t, labels, field, y_min=Y_MIN):
    return absolute(_signed(pred_t, rf_coefficients(labels, field))) / _normalizer(truth_t, y_min)


def if_loss(pred_t, truth_t, field, attribute, y_min=Y_MIN, p_min=P_MIN):
    return absolute(_signed(pred_t, if_coefficients(field, attribute, p_min))) / _normalizer(truth_t, y_min)


def em_coefficients(labels, field):
    """Weights turning ŷ into mean_{G+} ẑ - mean_{G-} ẑ with ẑ = ŷ / p."""
    plus, minus = _groups(labels)
    p = field.population_share
    inv_p = np.where(plus | minus, 1.0 / np.where(plus | minus, p, 1.0), 0.0)
    return inv_p * (plus / plus.sum() - minus / minus.sum())


def em_loss(pred_t, truth_t, labels, field, y_min=Y_MIN):
    return absolute(_signed(pred_t, em_coefficients(labels, field))) / _normalizer(truth_t, y_min)


def pairwise_coefficients(truth_t, labels, field):
    """Per-frame weights for (1 / n+n-) Σ_{i∈G+, j∈G-} d(z_i, z_j)(ẑ_i - ẑ_j).

    d = exp(-(z_i - z_j)^2) on ground-truth per-capita demand z = y / p.
    Costs O(n+ · n-) per frame.
    """
    plus, minus = _groups(labels)
    p = field.population_share
    truth = np.asarray(truth_t, dtype=np.float64)
    z_plus = truth[..., plus] / p[plus]
    z_minus = truth[..., minus] / p[minus]
    similarity = np.exp(-(z_plus[..., :, None] - z_minus[..., None, :]) ** 2)
    scale = 1.0 / (plus.sum() * minus.sum())
    coefficients = np.zeros(truth.shape)
    coefficients[..., plus] = similarity.sum(axis=-1) / p[plus] * scale
    coefficients[..., minus] = -similarity.sum(axis=-2) / p[minus] * scale
    return coefficients


def pairwise_loss(pred_t, truth_t, labels, field, y_min=Y_MIN):
    gap = _signed(pred_t, pairwise_coefficients(truth_t, labels, field))
    return square(gap / _normalizer(truth_t, y_min))


def attribute_loss(kind, pred_t, truth_t, attribute, field, labelings, y_min=Y_MIN, p_min=P_MIN):
    if kind == "IF":
        return if_loss(pred_t, truth_t, field, attribute, y_min, p_min)
    if attribute not in labelings:
        raise InvalidInputError(f"Sin etiquetado de grupos para {attribute}")
    labels = labelings[attribute]
    if kind == "RF":
        return rf_loss(pred_t, truth_t, labels, field, y_min)
    if kind == "EM":
        return em_loss(pred_t, truth_t, labels, field, y_min)
    if kind == "PW":
        return pairwise_loss(pred_t, truth_t, labels, field, y_min)
    raise InvalidInputError(f"Regularizador desconocido: {kind}")


def composite_loss(pred_t, truth_t, config, field, labelings):
    """Σ_a λ_a · loss_a for the configured regularizer kind."""
    if not config.attributes:
        raise InvalidInputError("No hay atributos sensibles configurados")
    batch_shape = np.shape(truth_t)[:-2]
    if config.kind == "none":
        return Tensor(np.zeros(batch_shape))
    total = None
    for name, spec in config.attributes.items():
        if name not in field.attributes:
            raise InvalidInputError(f"Atributo desconocido: {name}", payload={"attribute": name})
        term = attribute_loss(config.kind, pred_t, truth_t, name, field, labelings, config.y_min, config.p_min)
        term = term * spec.weight
        total = term if total is None else total + term
    return total
