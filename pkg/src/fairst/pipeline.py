"""Command-level steps shared by the CLI: prepare, train, predict, evaluate, sweep."""
import logging
import os

import numpy as np

from fairst.config import require_paths
from fairst.database import store
from fairst.eval.metrics import evaluate, ground_truth_report
from fairst.fairness.groups import build_labelings
from fairst.ingest.demographics import allocate_demographics, read_units
from fairst.ingest.features import build_feature_stack, read_features
from fairst.ingest.grid import build_grid
from fairst.ingest.series import load_series
from fairst.ingest.slices import make_slices, stack_slices
from fairst.ingest.trips import aggregate_trips, read_trips
from fairst.models.DemandTensor import DemandTensor
from fairst.models.FairnessConfig import AttributeSpec, FairnessConfig
from fairst.models.SeriesStack1D import SeriesStack1D
from fairst.network.baseline import ha_forecast
from fairst.network.fairst import predict
from fairst.train.trainer import demand_scale_of, train_model
from fairst.utils import InvalidInputError

logger = logging.getLogger(__name__)


def prepare(config):
    """Read every input, build the grid tensors and write prepared.npz."""
    require_paths(config, "trips", "demographics")
    if config.weather_names:
        require_paths(config, "weather")
    grid = build_grid(config.bbox, config.cell_size_m)
    demand, dropped = aggregate_trips(read_trips(config.trips), grid, config.start, config.end)
    field = allocate_demographics(read_units(config.demographics), grid)
    features = build_feature_stack(
        [(source.name, read_features(source.path), source.mode) for source in config.features], grid)
    if config.weather_names:
        series = load_series(config.weather, list(config.weather_names), config.start, config.end,
                             train_end=config.boundary)
    else:
        series = SeriesStack1D.empty(demand.n_frames)
    prepared = store.Prepared(grid, demand, field, features, series)
    store.save_prepared(config.output_dir, prepared)
    return prepared, dropped


def split_slices(prepared, config):
    """(train, test) slices; a slice trains iff its target hour starts before the boundary."""
    series = prepared.series if prepared.series.n_series else None
    slices = make_slices(prepared.demand, series, config.window)
    train = [s for s in slices if prepared.demand.frame_time(s.target_index) < config.boundary]
    test = [s for s in slices if prepared.demand.frame_time(s.target_index) >= config.boundary]
    if not train or not test:
        raise InvalidInputError(f"Split vacío: {len(train)} slices de entrenamiento, {len(test)} de prueba",
                                payload={"train": len(train), "test": len(test)})
    return train, test


def evaluation_fairness(fairness, field):
    """The configured attributes, or every field attribute at its city threshold when none are set."""
    if fairness.attributes:
        return fairness
    attributes = {name: AttributeSpec() for name in sorted(field.attributes)}
    return FairnessConfig(fairness.kind, fairness.lam, attributes, fairness.p_min, fairness.y_min)


def labelings_for(prepared, fairness):
    return build_labelings(prepared.field, evaluation_fairness(fairness, prepared.field))


def fit(prepared, config, fairness=None, checkpoint_dir=None):
    """Train on the training slices; returns (params, log, demand_scale)."""
    fairness = fairness or config.fairness
    train, _ = split_slices(prepared, config)
    arch = config.arch_for(prepared.grid.rows, prepared.grid.cols,
                           prepared.series.n_series, len(prepared.features.names))
    labelings = build_labelings(prepared.field, fairness) if fairness.monitored else {}
    scale = demand_scale_of(train)
    params, log = train_model(train, config.train, prepared.field, labelings, arch, fairness,
                              features=prepared.features.normalized(), demand_scale=scale,
                              checkpoint_dir=checkpoint_dir)
    return params, log, scale


def forecast(params, scale, prepared, config):
    """Predictions for every test slice as a DemandTensor, plus the target indices."""
    _, test = split_slices(prepared, config)
    histories, _, series = stack_slices(test)
    values = predict(params, histories, series if params.arch.has_1d else None,
                     prepared.features.normalized(), scale)
    indices = np.array([s.target_index for s in test])
    return DemandTensor(values, prepared.demand.frame_time(indices[0])), indices


def baseline_forecast(prepared, config):
    _, test = split_slices(prepared, config)
    indices = np.array([s.target_index for s in test])
    values = ha_forecast(prepared.demand, indices)
    return DemandTensor(values, prepared.demand.frame_time(indices[0])), indices


def truth_for(prepared, indices):
    return DemandTensor(prepared.demand.values[indices], prepared.demand.frame_time(indices[0]))


def score(predictions, indices, prepared, fairness, source="prediction"):
    """(prediction report, ground-truth report) on the test targets."""
    truth = truth_for(prepared, indices)
    labelings = labelings_for(prepared, fairness)
    p_min = fairness.p_min
    report = evaluate(predictions, truth, prepared.field, labelings, p_min, source=source)
    return report, ground_truth_report(truth, prepared.field, labelings, p_min)


def write_reports(output_dir, report, truth_report, report_name=store.REPORT):
    store.write_report(os.path.join(output_dir, report_name), report)
    store.write_report(os.path.join(output_dir, store.REPORT_TRUTH), truth_report)
    store.write_gaps(os.path.join(output_dir, store.GAPS), report.gap_report())


def sweep(prepared, config, lambdas):
    """Train once per λ and score each run; yields sweep CSV rows."""
    if not config.fairness.attributes or config.fairness.kind == "none":
        raise InvalidInputError("sweep necesita fairness.kind y fairness.attributes")
    for lam in lambdas:
        fairness = config.fairness.with_lambda(lam)
        params, _, scale = fit(prepared, config, fairness)
        predictions, indices = forecast(params, scale, prepared, config)
        report, _ = score(predictions, indices, prepared, fairness)
        for name in sorted(report.attributes):
            item = report.attributes[name]
            yield float(lam), name, report.mae, item.rfg, item.ifg, item.rho, item.p_value
        logger.info(f"λ={lam}: MAE={report.mae:.6f}")
