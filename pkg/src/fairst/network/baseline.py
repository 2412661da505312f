import numpy as np

from fairst.utils import InvalidInputError

DAY_S = 86400
WEEK_S = 7 * DAY_S


def _slot(demand, indices):
    """Hour-of-week slot (UTC) of each frame index."""
    seconds = demand.start_time + np.asarray(indices, dtype=np.float64) * demand.interval_s
    # 1970-01-01 fue jueves: desplaza para que el slot 0 sea lunes 00:00
    return np.floor(((seconds + 3 * DAY_S) % WEEK_S) / 3600).astype(np.int64)


def ha_predict(demand, t):
    """Historical average: per-cell mean of all frames before `t` sharing its
    hour of day and day of week.

    `t` is a frame index on the demand's time axis and may lie past its end.
    """
    prior = np.arange(min(t, demand.n_frames))
    matching = prior[_slot(demand, prior) == _slot(demand, [t])[0]]
    if matching.size == 0:
        raise InvalidInputError(f"No hay observaciones previas con la misma hora y día para t={t}")
    return demand.values[matching].mean(axis=0)


def ha_forecast(demand, indices):
    """ha_predict stacked over several target indices -> (len(indices), H, W)."""
    if len(indices) == 0:
        return np.zeros((0,) + demand.values.shape[1:])
    return np.stack([ha_predict(demand, int(t)) for t in indices])
