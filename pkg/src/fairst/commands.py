import logging
import os

import click
import numpy as np

from fairst import pipeline
from fairst.config import load_config, load_raw, synth_settings
from fairst.database import store
from fairst.eval.heatmap import export_heatmap
from fairst.synth import generate_city, write_city
from fairst.utils import InvalidInputError, to_utc_seconds, utc_datetime

logger = logging.getLogger(__name__)

"""
Every command reads the YAML run config (-c) and accepts repeatable
--set key=value overrides. Artifacts go to paths.output_dir:

    prepare   -> prepared.npz
    train     -> model.npz, train_log.csv, checkpoint_epoch<N>.npz
    evaluate  -> report.csv, report_ground_truth.csv, gaps.csv (report_ha.csv with --baseline ha)
    predict   -> predictions.npz, heatmaps/heatmap_<hour>.{csv,pgm}
    sweep     -> sweep.csv
    synth     -> a synthetic city plus its config.yaml
"""

config_option = click.option("--config", "-c", "config_path", required=True, help="YAML run config.")
set_option = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE",
                          help="Override a config key, e.g. --set fairness.lambda=2.0")


def _prepared(config):
    return store.load_prepared(config.output_dir)


def setup_commands(cli):

    @cli.command("prepare")
    @config_option
    @set_option
    def prepare(config_path, overrides):
        """Aggregate trips, allocate demographics and build the 1D/2D inputs."""
        config = load_config(config_path, overrides)
        prepared, dropped = pipeline.prepare(config)
        store.update_manifest(config.output_dir, "prepare", {
            "config": config.serialize(),
            "grid": prepared.grid.serialize(),
            "demand": prepared.demand.serialize(),
            "demographics": prepared.field.serialize(),
            "features": prepared.features.serialize(),
            "series": prepared.series.serialize(),
            "dropped_trips": int(dropped),
        })
        click.echo(f"Preparado: demanda {prepared.demand.values.shape}, {dropped} viajes descartados")

    @cli.command("train")
    @config_option
    @set_option
    def train(config_path, overrides):
        """Train FairST on the slices before split.boundary."""
        config = load_config(config_path, overrides)
        prepared = _prepared(config)
        params, log, scale = pipeline.fit(prepared, config, checkpoint_dir=config.output_dir)
        store.save_model(os.path.join(config.output_dir, store.MODEL), params, scale,
                         {"fairness": config.fairness.serialize(), "train": config.train.serialize()})
        store.write_train_log(os.path.join(config.output_dir, store.TRAIN_LOG), log)
        store.update_manifest(config.output_dir, "train",
                              {"model": params.serialize(), "log": log.serialize(), "demand_scale": scale})
        last = log.epochs[-1]
        click.echo(f"Entrenado: {len(log.epochs)} épocas, acc={last.acc_loss:.6f}, fair={last.fair_loss:.6f}")

    @cli.command("evaluate")
    @config_option
    @set_option
    @click.option("--baseline", type=click.Choice(["ha"]), default=None,
                  help="Score the historical-average baseline instead of the model.")
    @click.option("--predictions", "predictions_path", default=None,
                  help="Score a predictions.npz written by 'predict'.")
    def evaluate(config_path, overrides, baseline, predictions_path):
        """MAE, RFG, IFG and Spearman's rho on the test period."""
        config = load_config(config_path, overrides)
        prepared = _prepared(config)
        report_name = store.REPORT
        if baseline == "ha":
            predictions, indices = pipeline.baseline_forecast(prepared, config)
            report_name = store.REPORT_BASELINE
        elif predictions_path:
            predictions, indices = store.load_predictions(predictions_path)
        else:
            params, scale, _ = store.load_model(os.path.join(config.output_dir, store.MODEL))
            predictions, indices = pipeline.forecast(params, scale, prepared, config)
        source = "ha" if baseline else "prediction"
        report, truth_report = pipeline.score(predictions, indices, prepared, config.fairness, source)
        pipeline.write_reports(config.output_dir, report, truth_report, report_name)
        store.update_manifest(config.output_dir, "evaluate_ha" if baseline else "evaluate", {
            "report": report.serialize(),
            "ground_truth": truth_report.serialize(),
            "gaps": report.gap_report().serialize(),
        })
        click.echo(f"MAE={report.mae!r}")
        for attribute, metric, value in report.gap_report().rows():
            click.echo(f"{metric}[{attribute}]={value!r}")

    @cli.command("predict")
    @config_option
    @set_option
    @click.option("--hour", "hours", multiple=True, help="Test hour to export as a heatmap (RFC3339).")
    @click.option("--clamp", is_flag=True, default=None, help="Clamp negative predictions to 0 in the exports.")
    def predict(config_path, overrides, hours, clamp):
        """Write test-period predictions and heatmaps for the requested hours."""
        config = load_config(config_path, overrides)
        prepared = _prepared(config)
        params, scale, _ = store.load_model(os.path.join(config.output_dir, store.MODEL))
        predictions, indices = pipeline.forecast(params, scale, prepared, config)
        store.save_predictions(os.path.join(config.output_dir, store.PREDICTIONS), predictions, indices)
        store.update_manifest(config.output_dir, "predict", {"predictions": predictions.serialize()})

        clamp = config.predict_clamp if clamp is None else clamp
        heatmaps = os.path.join(config.output_dir, "heatmaps")
        requested = hours or config.predict_hours
        if not requested:
            path = export_heatmap(predictions.values.mean(axis=0), os.path.join(heatmaps, "heatmap_mean"), clamp)
            click.echo(f"Heatmap medio: {path[1]}")
        for hour in requested:
            offset = (to_utc_seconds(hour) - predictions.start_time) / predictions.interval_s
            if offset != int(offset) or not 0 <= offset < predictions.n_frames:
                raise InvalidInputError(f"La hora {hour} no pertenece al periodo de prueba", payload={"hour": str(hour)})
            stamp = utc_datetime(predictions.frame_time(int(offset))).strftime("%Y%m%dT%H")
            path = export_heatmap(predictions.values[int(offset)], os.path.join(heatmaps, f"heatmap_{stamp}"), clamp)
            click.echo(f"Heatmap {hour}: {path[1]}")

    @cli.command("sweep")
    @config_option
    @set_option
    @click.option("--lambda", "lambdas", multiple=True, type=float, help="λ value (repeatable); defaults to sweep.lambdas.")
    def sweep(config_path, overrides, lambdas):
        """Train and score once per λ; one CSV row per λ and attribute."""
        config = load_config(config_path, overrides)
        prepared = _prepared(config)
        rows = list(pipeline.sweep(prepared, config, lambdas or config.sweep_lambdas))
        path = os.path.join(config.output_dir, store.SWEEP)
        store.write_sweep(path, rows)
        click.echo(f"Sweep de {len(rows)} filas en {path}")

    @cli.command("synth")
    @click.argument("directory")
    @click.option("--config", "-c", "config_path", default=None, help="Optional YAML with synth.* keys.")
    @set_option
    @click.option("--window", default=24, show_default=True, help="Window written to the generated config.")
    def synth(directory, config_path, overrides, window):
        """Generate a seeded synthetic biased city in DIRECTORY."""
        settings = synth_settings(load_raw(config_path, overrides))
        settings["attributes"] = tuple(settings["attributes"])
        city = generate_city(**settings)
        logger.info(f"Ciudad sintética: {city.serialize()}")
        path = write_city(city, directory, window=window)
        total = int(np.sum(city.demand.values))
        click.echo(f"Ciudad sintética: {total} viajes, configuración en {path}")
