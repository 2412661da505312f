"""On-disk artifacts of a run directory.

    prepared.npz      demand, demographics, 2D maps and 1D series (+ grid in the header)
    model.npz         parameters, arch and demand scale
    predictions.npz   test-period predictions in original units
    *.csv             train log, reports, gaps, sweep
    run.json          summary of the last run of each command

Every file is written through `atomic_write`.
"""
import csv
import json
import logging
import os
from typing import NamedTuple

import numpy as np

from fairst.models.ArchConfig import ArchConfig
from fairst.models.DemandTensor import DemandTensor
from fairst.models.DemographicField import DemographicField
from fairst.models.EvalReport import HEADER as REPORT_HEADER
from fairst.models.FeatureStack2D import FeatureStack2D
from fairst.models.GapReport import HEADER as GAPS_HEADER
from fairst.models.GridSpec import GridSpec
from fairst.models.ModelParams import ModelParams
from fairst.models.SeriesStack1D import SeriesStack1D
from fairst.models.TrainLog import HEADER as TRAIN_LOG_HEADER
from fairst.network.fairst import check_params
from fairst.tensor.checkpoint import load_tensors, save_tensors
from fairst.utils import DataError, atomic_write, format_float

logger = logging.getLogger(__name__)

PREPARED = "prepared.npz"
MODEL = "model.npz"
PREDICTIONS = "predictions.npz"
TRAIN_LOG = "train_log.csv"
REPORT = "report.csv"
REPORT_TRUTH = "report_ground_truth.csv"
REPORT_BASELINE = "report_ha.csv"
GAPS = "gaps.csv"
SWEEP = "sweep.csv"
SWEEP_HEADER = ("lambda", "attribute", "mae", "rfg", "ifg", "rho", "p_value")
MANIFEST = "run.json"


class Prepared(NamedTuple):
    grid: GridSpec
    demand: DemandTensor
    field: DemographicField
    features: FeatureStack2D
    series: SeriesStack1D


def save_prepared(directory, prepared):
    tensors = {
        "demand": prepared.demand.values,
        "population_share": prepared.field.population_share,
        "features": prepared.features.maps,
        "series": prepared.series.series,
        "series_mean": prepared.series.mean,
        "series_std": prepared.series.std,
    }
    for name, fractions in prepared.field.attributes.items():
        tensors["attr/" + name] = fractions
    header = {
        "grid": prepared.grid.serialize(),
        "start_time": prepared.demand.start_time,
        "interval_s": prepared.demand.interval_s,
        "attributes": sorted(prepared.field.attributes),
        "features": list(prepared.features.names),
        "series": list(prepared.series.names),
    }
    path = os.path.join(directory, PREPARED)
    save_tensors(path, tensors, header)
    logger.info(f"Datos preparados guardados en {path}")
    return path


def load_prepared(directory):
    path = os.path.join(directory, PREPARED)
    if not os.path.exists(path):
        raise DataError(f"No hay datos preparados en {directory}; ejecute 'prepare' primero",
                        payload={"path": path})
    tensors, header = load_tensors(path)
    grid = GridSpec.from_dict(header["grid"])
    demand = DemandTensor(tensors["demand"], header["start_time"], header["interval_s"])
    field = DemographicField(tensors["population_share"],
                             {name: tensors["attr/" + name] for name in header["attributes"]})
    features = FeatureStack2D(header["features"], tensors["features"])
    series = SeriesStack1D(header["series"], tensors["series"], tensors["series_mean"], tensors["series_std"])
    return Prepared(grid, demand, field, features, series)


def save_model(path, params, demand_scale, extra=None):
    header = dict(extra or {})
    header["arch"] = params.arch.serialize()
    header["demand_scale"] = float(demand_scale)
    save_tensors(path, params.tensors, header)
    logger.info(f"Modelo guardado en {path} ({params.count()} parámetros)")


def load_model(path):
    """(ModelParams, demand_scale, header); shapes are checked against the stored arch."""
    if not os.path.exists(path):
        raise DataError(f"No existe el modelo {path}; ejecute 'train' primero", payload={"path": str(path)})
    tensors, header = load_tensors(path)
    if "arch" not in header or "demand_scale" not in header:
        raise DataError(f"{path} no contiene arquitectura ni escala", payload={"path": str(path)})
    params = ModelParams(ArchConfig.from_dict(header["arch"]), tensors)
    check_params(params)
    return params, float(header["demand_scale"]), header


def save_predictions(path, predictions, indices):
    tensors = {"values": predictions.values, "indices": np.asarray(indices, dtype=np.float64)}
    header = {"start_time": predictions.start_time, "interval_s": predictions.interval_s}
    save_tensors(path, tensors, header)


def load_predictions(path):
    """(DemandTensor, target indices)."""
    if not os.path.exists(path):
        raise DataError(f"No existe el archivo de predicciones {path}", payload={"path": str(path)})
    tensors, header = load_tensors(path)
    if "values" not in tensors or "indices" not in tensors:
        raise DataError(f"{path} no contiene predicciones", payload={"path": str(path)})
    demand = DemandTensor(tensors["values"], header["start_time"], header["interval_s"])
    return demand, tensors["indices"].astype(np.int64)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_csv(path, header, rows):
    with atomic_write(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    logger.info(f"Escrito {path}")


def read_csv(path):
    """Rows as dicts of strings."""
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            return list(csv.DictReader(handle))
    except FileNotFoundError:
        raise DataError(f"No existe {path}", payload={"path": str(path)})


def write_train_log(path, log):
    write_csv(path, TRAIN_LOG_HEADER, log.rows())


def write_report(path, report):
    write_csv(path, REPORT_HEADER, report.rows())


def read_report(path):
    """{(metric, attribute): (value, p_value or None)} with floats parsed back exactly."""
    parsed = {}
    for row in read_csv(path):
        p_value = float(row["p_value"]) if row["p_value"] else None
        parsed[(row["metric"], row["attribute"])] = (float(row["value"]), p_value)
    return parsed


def write_gaps(path, gap_report):
    write_csv(path, GAPS_HEADER, gap_report.rows())


def write_sweep(path, rows):
    write_csv(path, SWEEP_HEADER, rows)


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "isoformat"):
        return value.isoformat()
    raise TypeError(f"No serializable en JSON: {type(value).__name__}")


def update_manifest(directory, section, summary):
    """Replace one command's section of run.json, keeping the others."""
    path = os.path.join(directory, MANIFEST)
    manifest = {}
    if os.path.exists(path):
        try:
            with open(path, encoding="utf-8") as handle:
                manifest = json.load(handle)
        except json.JSONDecodeError:
            logger.warning(f"{path} ilegible; se reescribe")
    manifest[section] = summary
    with atomic_write(path) as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True, default=_plain)
    return path
