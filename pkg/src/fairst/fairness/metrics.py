"""Region- and individual-based fairness gaps (per-capita demand difference).

Both gaps are linear in the prediction, so each is a weighted sum of the
per-cell mean prediction with weights built here; the losses reuse them.
"""
import numpy as np

from fairst.fairness.groups import P_MIN
from fairst.models.DemandTensor import DemandTensor
from fairst.utils import DegenerateGroupError, InvalidInputError


def rf_coefficients(labels, field):
    """Weights c with RFG = Σ_i c_i · mean_T ŷ_i."""
    p = field.population_share
    plus, minus = labels.advantaged, labels.disadvantaged
    if not plus.any() or not minus.any():
        raise DegenerateGroupError(f"Grupo vacío para {labels.attribute}",
                                   payload={"attribute": labels.attribute})
    mass_plus, mass_minus = p[plus].sum(), p[minus].sum()
    if mass_plus <= 0 or mass_minus <= 0:
        raise DegenerateGroupError(f"Grupo sin población para {labels.attribute}",
                                   payload={"attribute": labels.attribute})
    return plus / mass_plus - minus / mass_minus


def if_coefficients(field, attribute, p_min=P_MIN):
    """Weights c with IFG = Σ_i c_i · mean_T ŷ_i; cells under p_min are left out."""
    p = field.population_share
    included = p >= p_min
    w_plus = np.where(included, field.advantaged(attribute), 0.0)
    w_minus = np.where(included, field.disadvantaged(attribute), 0.0)
    mass_plus, mass_minus = np.sum(p * w_plus), np.sum(p * w_minus)
    if mass_plus <= 0 or mass_minus <= 0:
        raise DegenerateGroupError(f"Atributo degenerado: {attribute}", payload={"attribute": attribute})
    return w_plus / mass_plus - w_minus / mass_minus


def period_mean(pred):
    values = pred.values if isinstance(pred, DemandTensor) else np.asarray(pred, dtype=np.float64)
    if values.ndim == 2:
        return values
    if values.ndim != 3 or values.shape[0] == 0:
        raise InvalidInputError(f"Predicción de forma {values.shape}: se esperaba (T, H, W) con T >= 1")
    return values.mean(axis=0)


def rfg(pred, labels, field):
    """Signed region-based gap over the period (demand per capita units)."""
    return float(np.sum(rf_coefficients(labels, field) * period_mean(pred)))


def ifg(pred, field, attribute, p_min=P_MIN):
    """Signed individual-based gap over the period."""
    return float(np.sum(if_coefficients(field, attribute, p_min) * period_mean(pred)))
