import logging

import numpy as np
import pandas as pd

from fairst.ingest.grid import locate_many
from fairst.models.DemandTensor import DemandTensor
from fairst.models.TripRecord import TripRecord
from fairst.utils import DataError, InvalidInputError, to_utc_seconds

logger = logging.getLogger(__name__)

HOUR_S = 3600
TRIP_COLUMNS = ("timestamp", "lat", "lon")


def read_trips(path):
    """Read a `timestamp,lat,lon` CSV with RFC3339 timestamps into TripRecords."""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError:
        raise DataError(f"No existe el archivo de viajes: {path}", payload={"path": str(path)})
    except pd.errors.ParserError as exc:
        raise DataError(f"CSV de viajes ilegible ({path}): {exc}", payload={"path": str(path)})

    missing = [c for c in TRIP_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError(f"Faltan columnas en {path}: {', '.join(missing)}", payload={"path": str(path)})

    stamps = pd.to_datetime(frame["timestamp"], utc=True, errors="coerce", format="ISO8601")
    lats = pd.to_numeric(frame["lat"], errors="coerce")
    lons = pd.to_numeric(frame["lon"], errors="coerce")
    bad = stamps.isna() | lats.isna() | lons.isna() | ~lats.between(-90, 90) | ~lons.between(-180, 180)
    if bad.any():
        # +2: cabecera y numeración desde 1
        line = int(np.flatnonzero(bad.to_numpy())[0]) + 2
        raise DataError(f"Fila inválida en {path}, línea {line}", payload={"path": str(path), "line": line})

    seconds = (stamps - pd.Timestamp(0, tz="UTC")) / pd.Timedelta(seconds=1)
    trips = [TripRecord(float(t), float(a), float(o)) for t, a, o in zip(seconds, lats, lons)]
    logger.info(f"{len(trips)} viajes leídos de {path}")
    return trips


def aggregate_trips(trips, grid, start, end, interval_s=HOUR_S):
    """Count pickups per (hour, row, col).

    Returns the DemandTensor and the number of trips dropped for falling
    outside the bbox or outside [start, end).
    """
    start = to_utc_seconds(start)
    end = to_utc_seconds(end)
    if not start < end:
        raise InvalidInputError("Se requiere start < end")
    if start % interval_s or end % interval_s:
        raise InvalidInputError("start y end deben estar alineados a la hora")
    n_frames = int((end - start) // interval_s)

    values = np.zeros((n_frames, grid.rows, grid.cols))
    if not trips:
        return DemandTensor(values, start, interval_s), 0

    stamps = np.array([t.timestamp for t in trips], dtype=np.float64)
    rows, cols = locate_many(grid, [t.lat for t in trips], [t.lon for t in trips])
    frames = np.floor((stamps - start) / interval_s).astype(np.int64)

    keep = (rows >= 0) & (stamps >= start) & (stamps < end)
    np.add.at(values, (frames[keep], rows[keep], cols[keep]), 1.0)
    dropped = int(len(trips) - np.count_nonzero(keep))
    if dropped:
        logger.warning(f"{dropped} viajes descartados (fuera de la bbox o del periodo)")
    logger.info(f"{int(values.sum())} viajes agregados en {n_frames} horas")
    return DemandTensor(values, start, interval_s), dropped
