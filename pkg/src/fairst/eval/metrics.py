import logging
import math
from itertools import permutations

import numpy as np
from scipy import stats

from fairst.fairness.groups import P_MIN
from fairst.fairness.metrics import ifg, period_mean, rfg
from fairst.models.DemandTensor import DemandTensor
from fairst.models.EvalReport import AttributeReport, EvalReport
from fairst.utils import InvalidInputError, UndefinedCorrelationError

logger = logging.getLogger(__name__)

EXACT_MAX_N = 8
# holgura al comparar estadísticos de permutaciones empatados
PERMUTATION_TOL = 1e-12


def _values(demand):
    return demand.values if isinstance(demand, DemandTensor) else np.asarray(demand, dtype=np.float64)


def mae(pred, truth):
    pred, truth = _values(pred), _values(truth)
    if pred.shape != truth.shape:
        raise InvalidInputError(f"Formas distintas: predicción {pred.shape}, real {truth.shape}")
    if pred.size == 0:
        raise InvalidInputError("Periodo vacío")
    return float(np.mean(np.abs(pred - truth)))


def _exact_p_value(rx, ry, rho):
    """Share of the n! rank permutations whose |rho| reaches the observed one."""
    xc = rx - rx.mean()
    perms = np.array(list(permutations(ry)))
    yc = perms - ry.mean()
    denom = math.sqrt(np.sum(xc * xc) * np.sum((ry - ry.mean()) ** 2))
    rhos = yc @ xc / denom
    return float(np.count_nonzero(np.abs(rhos) >= abs(rho) - PERMUTATION_TOL) / len(perms))


def spearman(x, y):
    """Spearman's rho on average ranks and its two-sided p-value.

    Exact permutation p-value for n <= 8, Student-t approximation above.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidInputError(f"Vectores de forma {x.shape} y {y.shape}")
    n = x.size
    if n < 3:
        raise InvalidInputError(f"Spearman necesita n >= 3, recibió {n}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InvalidInputError("Valores no finitos en Spearman")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("Correlación indefinida: vector constante")

    rx = stats.rankdata(x, method="average")
    ry = stats.rankdata(y, method="average")
    xc, yc = rx - rx.mean(), ry - ry.mean()
    rho = float(np.sum(xc * yc) / math.sqrt(np.sum(xc * xc) * np.sum(yc * yc)))
    rho = min(1.0, max(-1.0, rho))

    if n <= EXACT_MAX_N:
        return rho, _exact_p_value(rx, ry, rho)
    if abs(rho) == 1.0:
        return rho, 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return rho, float(min(1.0, 2.0 * stats.t.sf(abs(t), n - 2)))


def per_capita(pred, field, p_min=P_MIN):
    """Period-mean prediction divided by p_i on cells with p_i >= p_min (flattened)."""
    included = field.included(p_min)
    return period_mean(pred)[included] / field.population_share[included]


def evaluate(pred, truth, field, labelings, p_min=P_MIN, source="prediction"):
    """MAE against truth plus RFG, IFG and Spearman's rho per labeled attribute."""
    report = EvalReport(mae(pred, truth), source=source)
    included = field.included(p_min)
    capita = per_capita(pred, field, p_min)
    for name, labels in labelings.items():
        try:
            rho, p_value = spearman(capita, field.advantaged(name)[included])
        except UndefinedCorrelationError:
            logger.warning(f"Rho indefinido para {name} (demanda per cápita constante); se reporta 0")
            rho, p_value = 0.0, 1.0
        report.attributes[name] = AttributeReport(
            rfg=rfg(pred, labels, field),
            ifg=ifg(pred, field, name, p_min),
            rho=rho,
            p_value=p_value,
        )
    logger.info(f"Evaluación ({source}): MAE={report.mae:.6f}")
    return report


def ground_truth_report(truth, field, labelings, p_min=P_MIN):
    """The gaps already present in the observed demand."""
    return evaluate(truth, truth, field, labelings, p_min, source="ground_truth")
