"""GeoJSON FeatureCollection reader that remembers the source line of each feature."""
import json
import re

from fairst.utils import DataError

FEATURES_KEY = re.compile(r'"features"\s*:\s*\[')
WHITESPACE = re.compile(r"[\s,]*")


def _feature_lines(text, count):
    match = FEATURES_KEY.search(text)
    if match is None:
        return [None] * count
    decoder = json.JSONDecoder()
    lines = []
    pos = WHITESPACE.match(text, match.end()).end()
    for _ in range(count):
        try:
            _, end = decoder.raw_decode(text, pos)
        except json.JSONDecodeError:
            return [None] * count
        lines.append(text.count("\n", 0, pos) + 1)
        pos = WHITESPACE.match(text, end).end()
    return lines


def read_feature_collection(path, label):
    """[(feature, line)] for every feature in the collection at `path`."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except FileNotFoundError:
        raise DataError(f"No existe el archivo de {label}: {path}", payload={"path": str(path)})
    try:
        collection = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"GeoJSON inválido en {path}, línea {exc.lineno}", payload={"path": str(path), "line": exc.lineno})

    if not isinstance(collection, dict) or collection.get("type") != "FeatureCollection":
        raise DataError(f"{path} no es un FeatureCollection", payload={"path": str(path)})
    features = collection.get("features", [])
    if not isinstance(features, list):
        raise DataError(f"{path}: 'features' debe ser una lista", payload={"path": str(path)})
    return list(zip(features, _feature_lines(text, len(features))))


def feature_error(path, index, line, message):
    """DataError locating a malformed feature by file line (and index)."""
    where = f"línea {line}" if line is not None else f"feature {index}"
    return DataError(f"{path}, {where}: {message}", payload={"path": str(path), "line": line, "feature": index})
