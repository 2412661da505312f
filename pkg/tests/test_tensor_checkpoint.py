import numpy as np
import pytest

from fairst.tensor.checkpoint import load_tensors, save_tensors
from fairst.utils import DataError


def test_round_trip_is_bit_exact(tmp_path, rng):
    tensors = {"b.w": rng.normal(size=(3, 2, 3)), "a.b": np.array([np.pi, -0.0, 1e-300])}
    path = tmp_path / "model.npz"
    save_tensors(path, tensors, {"epoch": 3})
    loaded, header = load_tensors(path)
    assert list(loaded) == ["b.w", "a.b"]
    for name, value in tensors.items():
        assert loaded[name].tobytes() == value.tobytes()
    assert header == {"epoch": 3}


def test_rejects_foreign_archive(tmp_path):
    path = tmp_path / "other.npz"
    np.savez(path, x=np.zeros(2))
    with pytest.raises(DataError):
        load_tensors(path)


def test_missing_file(tmp_path):
    with pytest.raises(DataError):
        load_tensors(tmp_path / "nope.npz")
