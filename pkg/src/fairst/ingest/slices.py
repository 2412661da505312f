import numpy as np

from fairst.models.SeriesStack1D import SeriesStack1D
from fairst.models.TemporalSlice import TemporalSlice
from fairst.utils import InvalidInputError


def make_slices(demand, series, window):
    """Sliding windows: slice k has history frames [k, k+window) and target k+window."""
    values = demand.values
    n_frames = values.shape[0]
    if window < 1 or n_frames < window + 1:
        raise InvalidInputError(f"Se necesitan al menos {window + 1} horas, hay {n_frames}")
    if series is None:
        series = SeriesStack1D.empty(n_frames)
    if series.series.shape[1] != n_frames:
        raise InvalidInputError(f"Series de {series.series.shape[1]} horas para {n_frames} de demanda")

    return [
        TemporalSlice(
            history=values[k:k + window],
            target=values[k + window],
            history_1d=series.series[:, k:k + window],
            target_index=k + window,
        )
        for k in range(n_frames - window)
    ]


def stack_slices(slices):
    """(histories, targets, histories_1d) batched along a new leading axis."""
    return (np.stack([s.history for s in slices]),
            np.stack([s.target for s in slices]),
            np.stack([s.history_1d for s in slices]))
