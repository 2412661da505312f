import logging

import numpy as np
import pandas as pd

from fairst.models.SeriesStack1D import SeriesStack1D
from fairst.utils import DataError, InvalidInputError, to_utc_seconds

logger = logging.getLogger(__name__)


def read_series_frame(path):
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError:
        raise DataError(f"No existe el archivo de series: {path}", payload={"path": str(path)})
    if "timestamp" not in frame.columns:
        raise InvalidInputError(f"{path} no tiene columna 'timestamp'", payload={"path": str(path)})

    stamps = pd.to_datetime(frame["timestamp"], utc=True, errors="coerce", format="ISO8601")
    bad = stamps.isna() | (stamps != stamps.dt.floor("h"))
    if bad.any():
        line = int(np.flatnonzero(bad.to_numpy())[0]) + 2
        raise DataError(f"Timestamp inválido o no horario en {path}, línea {line}",
                        payload={"path": str(path), "line": line})

    values = frame.drop(columns=["timestamp"]).apply(
        lambda column: pd.to_numeric(column.replace("", np.nan), errors="coerce"))
    # celdas no vacías que no son números
    malformed = values.isna() & frame.drop(columns=["timestamp"]).ne("")
    if malformed.any(axis=None):
        line = int(np.flatnonzero(malformed.any(axis=1).to_numpy())[0]) + 2
        raise DataError(f"Valor no numérico en {path}, línea {line}", payload={"path": str(path), "line": line})
    values.index = stamps
    return values[~values.index.duplicated(keep="last")].sort_index()


def load_series(path, names, start, end, train_end=None):
    """Hourly matrix of the requested series over [start, end).

    Gaps are forward-filled, leading gaps back-filled from the first
    observation, and each row standardized with mean/std (population) of the
    [start, train_end) window.
    """
    frame = read_series_frame(path)
    missing = [name for name in names if name not in frame.columns]
    if missing:
        raise InvalidInputError(f"Series ausentes en la cabecera de {path}: {', '.join(missing)}",
                                payload={"path": str(path), "missing": missing})

    start_ts = pd.Timestamp(to_utc_seconds(start), unit="s", tz="UTC")
    end_ts = pd.Timestamp(to_utc_seconds(end), unit="s", tz="UTC")
    hours = pd.date_range(start_ts, end_ts, freq="h", inclusive="left")
    aligned = frame[list(names)].reindex(frame.index.union(hours)).ffill().bfill().reindex(hours)
    if aligned.isna().any(axis=None):
        raise InvalidInputError(f"Series sin observaciones en {path}", payload={"path": str(path)})

    matrix = aligned.to_numpy(dtype=np.float64).T
    n_train = len(hours) if train_end is None else int(np.count_nonzero(hours < pd.Timestamp(to_utc_seconds(train_end), unit="s", tz="UTC")))
    if n_train < 1:
        raise InvalidInputError("El periodo de entrenamiento de las series está vacío")
    mean = matrix[:, :n_train].mean(axis=1)
    std = matrix[:, :n_train].std(axis=1)
    std = np.where(std > 0, std, 1.0)
    standardized = (matrix - mean[:, None]) / std[:, None]
    logger.info(f"Series {', '.join(names)}: {len(hours)} horas ({n_train} de entrenamiento)")
    return SeriesStack1D(list(names), standardized, mean, std)
