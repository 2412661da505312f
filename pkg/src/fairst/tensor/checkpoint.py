"""Named-tensor container on top of numpy's .npz archive.

Layout (format version 1):

- `__format__`: unicode scalar "fairst-tensors"
- `__version__`: int64 scalar, 1
- `__header__`: unicode scalar holding a JSON object (free metadata)
- `t/<name>`: one float64 array per tensor, shape preserved, C order

Arrays are stored bit-exact, so a save/load round trip is lossless.
"""
import json

import numpy as np

from fairst.utils import DataError, atomic_write

FORMAT = "fairst-tensors"
VERSION = 1
PREFIX = "t/"


def save_tensors(path, tensors, header=None):
    arrays = {
        "__format__": np.array(FORMAT),
        "__version__": np.array(VERSION, dtype=np.int64),
        "__header__": np.array(json.dumps(header or {}, sort_keys=True)),
    }
    for name, value in tensors.items():
        arrays[PREFIX + name] = np.ascontiguousarray(value, dtype=np.float64)
    with atomic_write(path, "wb") as handle:
        np.savez(handle, **arrays)


def load_tensors(path):
    try:
        archive = np.load(path, allow_pickle=False)
    except FileNotFoundError:
        raise DataError(f"No existe el checkpoint: {path}", payload={"path": str(path)})
    except (ValueError, OSError) as exc:
        raise DataError(f"Checkpoint ilegible {path}: {exc}", payload={"path": str(path)})
    with archive:
        if "__format__" not in archive.files or str(archive["__format__"]) != FORMAT:
            raise DataError(f"{path} no es un contenedor {FORMAT}", payload={"path": str(path)})
        version = int(archive["__version__"])
        if version != VERSION:
            raise DataError(f"Versión de checkpoint no soportada: {version}", payload={"path": str(path)})
        header = json.loads(str(archive["__header__"]))
        # el orden de inserción del zip se conserva
        tensors = {key[len(PREFIX):]: archive[key] for key in archive.files if key.startswith(PREFIX)}
    return tensors, header
