import numpy as np
import pytest

from conftest import START
from fairst.ingest.series import load_series
from fairst.utils import DataError, InvalidInputError

END = START + 3 * 3600


def write(tmp_path, text):
    path = tmp_path / "weather.csv"
    path.write_text(text)
    return path


def test_standardized_with_population_std(tmp_path):
    path = write(tmp_path, "timestamp,temp\n2021-01-04T00:00:00Z,1\n2021-01-04T01:00:00Z,2\n2021-01-04T02:00:00Z,3\n")
    stack = load_series(path, ["temp"], START, END)
    assert stack.series.mean() == pytest.approx(0.0, abs=1e-15)
    assert stack.series.std() == pytest.approx(1.0, rel=1e-12)
    np.testing.assert_allclose(stack.series[0] * stack.std[0] + stack.mean[0], [1.0, 2.0, 3.0])


def test_missing_hour_forward_filled(tmp_path):
    path = write(tmp_path, "timestamp,temp\n2021-01-04T00:00:00Z,5\n2021-01-04T02:00:00Z,7\n")
    stack = load_series(path, ["temp"], START, END)
    np.testing.assert_allclose(stack.series[0] * stack.std[0] + stack.mean[0], [5.0, 5.0, 7.0])


def test_leading_gap_back_filled(tmp_path):
    path = write(tmp_path, "timestamp,temp\n2021-01-04T01:00:00Z,4\n2021-01-04T02:00:00Z,6\n")
    stack = load_series(path, ["temp"], START, END)
    np.testing.assert_allclose(stack.series[0] * stack.std[0] + stack.mean[0], [4.0, 4.0, 6.0])


def test_statistics_from_training_window(tmp_path):
    path = write(tmp_path, "timestamp,temp\n2021-01-04T00:00:00Z,1\n2021-01-04T01:00:00Z,3\n2021-01-04T02:00:00Z,100\n")
    stack = load_series(path, ["temp"], START, END, train_end=START + 2 * 3600)
    assert stack.mean[0] == 2.0 and stack.std[0] == 1.0
    np.testing.assert_allclose(stack.series[0], [-1.0, 1.0, 98.0])


def test_constant_series_keeps_unit_std(tmp_path):
    path = write(tmp_path, "timestamp,temp\n2021-01-04T00:00:00Z,2\n")
    stack = load_series(path, ["temp"], START, END)
    np.testing.assert_array_equal(stack.series, np.zeros((1, 3)))


def test_missing_name(tmp_path):
    path = write(tmp_path, "timestamp,temp\n2021-01-04T00:00:00Z,2\n")
    with pytest.raises(InvalidInputError):
        load_series(path, ["rain"], START, END)


def test_non_numeric_value_names_line(tmp_path):
    path = write(tmp_path, "timestamp,temp\n2021-01-04T00:00:00Z,2\n2021-01-04T01:00:00Z,warm\n")
    with pytest.raises(DataError) as error:
        load_series(path, ["temp"], START, END)
    assert error.value.payload["line"] == 3
