import csv

import numpy as np

from fairst.utils import InvalidInputError, atomic_write, format_float


def heatmap_pixels(frame):
    """uint8 image of a frame, 0..max(frame) -> 0..255, negatives at 0, north row first."""
    frame = np.asarray(frame, dtype=np.float64)
    peak = float(frame.max()) if frame.size else 0.0
    if peak <= 0:
        pixels = np.zeros(frame.shape, dtype=np.uint8)
    else:
        scaled = np.clip(frame, 0.0, None) / peak * 255.0
        pixels = np.floor(scaled + 0.5).astype(np.uint8)
    return pixels[::-1]


def export_heatmap(frame, path, clamp=False):
    """Write `<path>.csv` (raw values, grid row order) and `<path>.pgm` (binary graymap).

    Returns both paths. With `clamp`, negative values are written as 0 in the CSV too.
    """
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 2:
        raise InvalidInputError(f"Se esperaba un frame (H, W), recibió {frame.shape}")
    if not np.all(np.isfinite(frame)):
        raise InvalidInputError("Valores no finitos en el heatmap")
    if clamp:
        frame = np.clip(frame, 0.0, None)

    stem = str(path)
    for suffix in (".csv", ".pgm"):
        if stem.endswith(suffix):
            stem = stem[:-len(suffix)]
    csv_path, pgm_path = stem + ".csv", stem + ".pgm"

    with atomic_write(csv_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for row in frame:
            writer.writerow([format_float(v) for v in row])

    pixels = heatmap_pixels(frame)
    height, width = pixels.shape
    with atomic_write(pgm_path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(pixels.tobytes())
    return csv_path, pgm_path


def read_heatmap_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return np.array([[float(v) for v in row] for row in csv.reader(handle)], dtype=np.float64)


def read_pgm(path):
    """Pixels of a binary graymap as written by export_heatmap (north row first)."""
    with open(path, "rb") as handle:
        data = handle.read()
    magic, size, maxval, body = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise InvalidInputError(f"{path} no es un PGM P5 de 8 bits")
    width, height = (int(v) for v in size.split())
    if len(body) != width * height:
        raise InvalidInputError(f"{path}: tamaño de imagen inconsistente")
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width)
