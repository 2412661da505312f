import os
import tempfile
from contextlib import contextmanager
from datetime import datetime, timezone


class FairSTException(Exception):
    exit_code = 1
    code = "INTERNAL_ERROR"

    def __init__(self, message, exit_code=None, payload=None):
        Exception.__init__(self, message)
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code
        self.payload = payload

    def to_dict(self):
        rv = dict(self.payload or ())
        rv['code'] = self.code
        rv['message'] = self.message
        return rv


class ConfigError(FairSTException):
    exit_code = 2
    code = "CONFIG_ERROR"


class DataError(FairSTException):
    exit_code = 3
    code = "DATA_ERROR"


class InvalidInputError(DataError):
    code = "INVALID_INPUT"


class DegenerateGroupError(InvalidInputError):
    code = "DEGENERATE_GROUP"


class UndefinedCorrelationError(InvalidInputError):
    code = "UNDEFINED_CORRELATION"


class NumericError(FairSTException):
    exit_code = 4
    code = "NUMERIC_ERROR"


@contextmanager
def atomic_write(path, mode="w", **kwargs):
    """Write to a temp file next to `path` and rename it into place on success."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode, **kwargs) as handle:
            yield handle
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def to_utc_seconds(value):
    """Accept epoch seconds, an aware datetime or an RFC3339 string."""
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, datetime):
        if value.tzinfo is None:
            value = value.replace(tzinfo=timezone.utc)
        return value.timestamp()
    if isinstance(value, str):
        text = value.strip().replace("Z", "+00:00")
        try:
            parsed = datetime.fromisoformat(text)
        except ValueError:
            raise InvalidInputError(f"Fecha inválida: {value}")
        if parsed.tzinfo is None:
            parsed = parsed.replace(tzinfo=timezone.utc)
        return parsed.timestamp()
    raise InvalidInputError(f"Tipo de fecha no soportado: {type(value).__name__}")


def utc_datetime(seconds):
    return datetime.fromtimestamp(float(seconds), tz=timezone.utc)


def format_float(value):
    # repr es el formato más corto que vuelve al mismo double
    return repr(float(value))
