"""YAML run configuration: nested sections or flat dotted keys, plus `--set` overrides."""
import json
import logging
import os
from datetime import date, datetime, timezone

import yaml

from fairst.models.ArchConfig import ArchConfig
from fairst.models.FairnessConfig import AttributeSpec, FairnessConfig
from fairst.models.GridSpec import BoundingBox
from fairst.models.RunConfig import FeatureSource, RunConfig
from fairst.models.TrainConfig import TrainConfig
from fairst.utils import ConfigError, FairSTException, to_utc_seconds

logger = logging.getLogger(__name__)

REQUIRED = (
    "grid.lat_min", "grid.lon_min", "grid.lat_max", "grid.lon_max", "grid.cell_size_m",
    "split.start", "split.boundary", "split.end",
)

DEFAULTS = {
    "paths.trips": None,
    "paths.demographics": None,
    "paths.weather": None,
    "paths.features": [],
    "paths.output_dir": None,
    "grid.lat_min": None,
    "grid.lon_min": None,
    "grid.lat_max": None,
    "grid.lon_max": None,
    "grid.cell_size_m": None,
    "split.start": None,
    "split.boundary": None,
    "split.end": None,
    "window": 168,
    "arch.filters_3d": [16, 32, 1],
    "arch.kernel_size": 3,
    "arch.channels_3d_out": 8,
    "arch.channels_1d": [4],
    "arch.channels_1d_out": 4,
    "arch.channels_2d": [4],
    "arch.fusion_channels": [8],
    "arch.use_1d": True,
    "arch.use_2d": True,
    "arch.leaky_slope": 0.01,
    "train.epochs": 10,
    "train.batch_size": 32,
    "train.seed": 0,
    "train.lr_base": 0.005,
    "train.lr_decay": 0.96,
    "train.lr_every": 5000,
    "train.checkpoint_every": 0,
    "fairness.kind": "none",
    "fairness.lambda": 0.0,
    "fairness.attributes": {},
    "fairness.p_min": 1e-9,
    "fairness.y_min": 1.0,
    "sweep.lambdas": [0.0, 1.0],
    "weather.names": [],
    "predict.hours": [],
    "predict.clamp": False,
    "synth.rows": 8,
    "synth.cols": 8,
    "synth.days": 21,
    "synth.bias": 3.0,
    "synth.seed": 0,
    "synth.base_rate": 2.0,
    "synth.cell_size_m": 1000.0,
    "synth.lat_min": 30.2,
    "synth.lon_min": -97.8,
    "synth.start": "2021-01-04T00:00:00Z",
    "synth.attributes": ["race"],
}


def keys_help():
    """Every config key with its default, as a --help epilog click will not rewrap."""
    lines = ["\b", "Claves de configuración (YAML o --set clave=valor):"]
    for key, value in DEFAULTS.items():
        if key in REQUIRED:
            shown = "requerida"
        elif value is None:
            shown = "-"
        else:
            shown = json.dumps(value)
        lines.append(f"  {key:<26} {shown}")
    return "\n".join(lines)


def flatten(node, prefix=""):
    """Nested mapping -> {dotted key: value}; stops at keys that take mapping values."""
    flat = {}
    for key, value in node.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict) and dotted not in DEFAULTS:
            flat.update(flatten(value, dotted + "."))
        else:
            flat[dotted] = value
    return flat


def parse_override(text):
    if "=" not in text:
        raise ConfigError(f"Override sin '=': {text}", payload={"override": text})
    key, raw = text.split("=", 1)
    return key.strip(), yaml.safe_load(raw)


def load_raw(path=None, overrides=()):
    """Merged flat settings: defaults < config file < overrides. Relative paths follow the file."""
    data = {}
    base = os.getcwd()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as handle:
                loaded = yaml.safe_load(handle) or {}
        except FileNotFoundError:
            raise ConfigError(f"No existe el archivo de configuración: {path}", payload={"path": str(path)})
        except yaml.YAMLError as exc:
            raise ConfigError(f"YAML inválido en {path}: {exc}", payload={"path": str(path)})
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path} debe contener un mapeo de claves", payload={"path": str(path)})
        data = flatten(loaded)
        base = os.path.dirname(os.path.abspath(path))

    for key, value in (parse_override(item) for item in overrides):
        data[key] = value

    unknown = sorted(set(data) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"Clave de configuración desconocida: {unknown[0]}", payload={"key": unknown[0]})

    merged = dict(DEFAULTS)
    merged.update(data)
    for key in ("paths.trips", "paths.demographics", "paths.weather", "paths.output_dir"):
        if merged[key] is not None:
            merged[key] = os.path.join(base, str(merged[key]))
    merged["paths.features"] = [
        dict(item, path=os.path.join(base, str(item["path"]))) if isinstance(item, dict) and "path" in item else item
        for item in merged["paths.features"] or []
    ]
    if merged["paths.output_dir"] is None:
        merged["paths.output_dir"] = os.path.abspath(os.getenv("FAIRST_OUTPUT_DIR", "output"))
    return merged


def _timestamp(raw, key):
    if isinstance(raw, date) and not isinstance(raw, datetime):
        raw = datetime(raw.year, raw.month, raw.day, tzinfo=timezone.utc)
    try:
        return to_utc_seconds(raw)
    except FairSTException:
        raise ConfigError(f"Fecha inválida en {key}: {raw}", payload={"key": key})


def _attributes(raw):
    if isinstance(raw, (list, tuple)):
        raw = {name: {} for name in raw}
    if not isinstance(raw, dict):
        raise ConfigError("fairness.attributes debe ser una lista o un mapeo", payload={"key": "fairness.attributes"})
    specs = {}
    for name, item in raw.items():
        item = item or {}
        threshold = item.get("threshold")
        if threshold == "auto":
            threshold = None
        specs[str(name)] = AttributeSpec(float(item.get("weight", 1.0)),
                                         None if threshold is None else float(threshold))
    return specs


def _features(raw):
    sources = []
    for index, item in enumerate(raw):
        if not isinstance(item, dict) or "name" not in item or "path" not in item:
            raise ConfigError(f"paths.features[{index}] necesita name y path", payload={"key": "paths.features"})
        sources.append(FeatureSource(str(item["name"]), str(item["path"]), str(item.get("mode", "count"))))
    return tuple(sources)


def build_run_config(merged):
    """Typed RunConfig from merged flat settings; names the offending key on failure."""
    for key in REQUIRED:
        if merged.get(key) is None:
            raise ConfigError(f"Falta la clave de configuración requerida: {key}", payload={"key": key})

    start = _timestamp(merged["split.start"], "split.start")
    boundary = _timestamp(merged["split.boundary"], "split.boundary")
    end = _timestamp(merged["split.end"], "split.end")
    if not start < boundary < end:
        raise ConfigError("split.boundary debe quedar dentro de (split.start, split.end)", payload={"key": "split.boundary"})

    section = None
    try:
        section = "arch"
        arch = {key[len("arch."):]: merged[key] for key in DEFAULTS if key.startswith("arch.")}
        arch = {k: tuple(v) if isinstance(v, list) else v for k, v in arch.items()}
        section = "train"
        train = TrainConfig(**{key[len("train."):]: merged[key] for key in DEFAULTS if key.startswith("train.")})
        section = "fairness"
        fairness = FairnessConfig(
            kind=str(merged["fairness.kind"]),
            lam=float(merged["fairness.lambda"]),
            attributes=_attributes(merged["fairness.attributes"]),
            p_min=float(merged["fairness.p_min"]),
            y_min=float(merged["fairness.y_min"]),
        )
        section = "grid"
        bbox = BoundingBox(*(float(merged[f"grid.{k}"]) for k in BoundingBox._fields))
        section = "window"
        window = int(merged["window"])
        section = "arch"
        ArchConfig(window=window, **arch)
    except (TypeError, ValueError, FairSTException) as exc:
        message = exc.message if isinstance(exc, FairSTException) else str(exc)
        raise ConfigError(f"Configuración inválida en '{section}': {message}", payload={"key": section})

    return RunConfig(
        output_dir=merged["paths.output_dir"],
        bbox=bbox,
        cell_size_m=float(merged["grid.cell_size_m"]),
        start=start,
        boundary=boundary,
        end=end,
        trips=merged["paths.trips"],
        demographics=merged["paths.demographics"],
        weather=merged["paths.weather"],
        weather_names=tuple(merged["weather.names"] or ()),
        features=_features(merged["paths.features"]),
        window=window,
        arch=arch,
        train=train,
        fairness=fairness,
        sweep_lambdas=tuple(float(v) for v in merged["sweep.lambdas"]),
        predict_hours=tuple(merged["predict.hours"] or ()),
        predict_clamp=bool(merged["predict.clamp"]),
    )


def load_config(path, overrides=()):
    config = build_run_config(load_raw(path, overrides))
    logger.info(f"Configuración cargada de {path}")
    return config


def require_paths(config, *keys):
    """ConfigError naming the first configured input path that is unset or missing."""
    for key in keys:
        value = getattr(config, key)
        if value is None:
            raise ConfigError(f"Falta la clave de configuración requerida: paths.{key}", payload={"key": f"paths.{key}"})
        if not os.path.exists(value):
            raise ConfigError(f"No existe paths.{key}: {value}", payload={"key": f"paths.{key}", "path": value})
    for source in config.features:
        if not os.path.exists(source.path):
            raise ConfigError(f"No existe el archivo de features {source.path}",
                              payload={"key": "paths.features", "path": source.path})


def synth_settings(merged):
    return {key[len("synth."):]: merged[key] for key in DEFAULTS if key.startswith("synth.")}
