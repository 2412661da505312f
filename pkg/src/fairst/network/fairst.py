"""The three-stream demand network: 3D history, 1D city series, 2D urban maps."""
import logging
import math

import numpy as np

from fairst.models.ModelParams import ModelParams
from fairst.tensor.conv import conv_same
from fairst.tensor.engine import Tensor, as_tensor, broadcast_to, concat, leaky_relu, matmul, parameter, reshape
from fairst.utils import InvalidInputError

logger = logging.getLogger(__name__)


def param_shapes(arch):
    """Ordered name -> shape for every tensor of the network."""
    k = arch.kernel_size
    shapes = {}
    c_in = 1
    for i, filters in enumerate(arch.filters_3d):
        shapes[f"s3d.conv{i}.w"] = (filters, c_in, k, k, k)
        shapes[f"s3d.conv{i}.b"] = (filters,)
        c_in = filters
    shapes["s3d.merge.w"] = (arch.channels_3d_out, arch.window, k, k)
    shapes["s3d.merge.b"] = (arch.channels_3d_out,)

    if arch.has_1d:
        c_in = arch.n_series
        for i, channels in enumerate(arch.channels_1d):
            shapes[f"s1d.conv{i}.w"] = (channels, c_in, k)
            shapes[f"s1d.conv{i}.b"] = (channels,)
            c_in = channels
        shapes["s1d.collapse.w"] = (c_in * arch.window, arch.channels_1d_out)
        shapes["s1d.collapse.b"] = (arch.channels_1d_out,)

    if arch.has_2d:
        c_in = arch.n_features
        for i, channels in enumerate(arch.channels_2d):
            shapes[f"s2d.conv{i}.w"] = (channels, c_in, k, k)
            shapes[f"s2d.conv{i}.b"] = (channels,)
            c_in = channels

    c_in = arch.fused_channels
    for i, channels in enumerate(arch.fusion_channels):
        shapes[f"head.conv{i}.w"] = (channels, c_in, k, k)
        shapes[f"head.conv{i}.b"] = (channels,)
        c_in = channels
    shapes["head.out.w"] = (1, c_in, k, k)
    shapes["head.out.b"] = (1,)
    return shapes


def _fan_in(name, shape):
    if name.endswith("collapse.w"):
        return shape[0]
    return int(np.prod(shape[1:]))


def init_params(arch, seed):
    """He-uniform weights (bound sqrt(6 / fan_in)), zero biases."""
    rng = np.random.default_rng(seed)
    tensors = {}
    for name, shape in param_shapes(arch).items():
        if name.endswith(".b"):
            tensors[name] = np.zeros(shape)
        else:
            bound = math.sqrt(6.0 / _fan_in(name, shape))
            tensors[name] = rng.uniform(-bound, bound, size=shape)
    params = ModelParams(arch, tensors)
    logger.info(f"Modelo inicializado con {params.count()} parámetros (semilla {seed})")
    return params


def check_params(params):
    expected = param_shapes(params.arch)
    if list(expected) != params.names():
        raise InvalidInputError("Los nombres de parámetros no coinciden con la arquitectura")
    for name, shape in expected.items():
        if tuple(params.tensors[name].shape) != shape:
            raise InvalidInputError(f"Parámetro {name} con forma {params.tensors[name].shape}, se esperaba {shape}")


def bind(params, trainable=False):
    """ModelParams -> dict of Tensors (leaf parameters when `trainable`)."""
    if trainable:
        return {name: parameter(value, name=name) for name, value in params.tensors.items()}
    return {name: Tensor(value, name=name) for name, value in params.tensors.items()}


def _weights(params):
    if isinstance(params, ModelParams):
        return params.arch, bind(params)
    weights, arch = params
    return arch, weights


def _batched(x, unbatched_ndim):
    x = as_tensor(x)
    if x.ndim == unbatched_ndim:
        return reshape(x, (1,) + x.shape), True
    if x.ndim != unbatched_ndim + 1:
        raise InvalidInputError(f"Entrada de forma {x.shape} con ejes inesperados")
    return x, False


def _unbatch(out, squeeze):
    return reshape(out, out.shape[1:]) if squeeze else out


def _conv_layer(x, weights, prefix, rank, slope):
    return leaky_relu(conv_same(x, weights[prefix + ".w"], rank, weights[prefix + ".b"]), slope)


def stream3d(history, params):
    """(1, W_in, H, W) history -> (C3, H, W) feature maps; a leading batch axis is kept."""
    arch, weights = _weights(params)
    x, squeeze = _batched(history, 4)
    if x.shape[1:] != (1, arch.window, arch.rows, arch.cols):
        raise InvalidInputError(f"Historia de forma {x.shape[1:]}, se esperaba {(1, arch.window, arch.rows, arch.cols)}")
    for i in range(len(arch.filters_3d)):
        x = _conv_layer(x, weights, f"s3d.conv{i}", 3, arch.leaky_slope)
    # el eje temporal pasa a ser el eje de canales
    x = reshape(x, (x.shape[0], arch.window, arch.rows, arch.cols))
    x = _conv_layer(x, weights, "s3d.merge", 2, arch.leaky_slope)
    return _unbatch(x, squeeze)


def stream1d(series, params):
    """(M, W_in) city series -> (C1, H, W), constant over space."""
    arch, weights = _weights(params)
    x, squeeze = _batched(series, 2)
    if x.shape[1:] != (arch.n_series, arch.window):
        raise InvalidInputError(f"Series de forma {x.shape[1:]}, se esperaba {(arch.n_series, arch.window)}")
    for i in range(len(arch.channels_1d)):
        x = _conv_layer(x, weights, f"s1d.conv{i}", 1, arch.leaky_slope)
    batch = x.shape[0]
    x = reshape(x, (batch, x.shape[1] * x.shape[2]))
    x = leaky_relu(matmul(x, weights["s1d.collapse.w"]) + weights["s1d.collapse.b"], arch.leaky_slope)
    x = broadcast_to(reshape(x, (batch, arch.channels_1d_out, 1, 1)),
                     (batch, arch.channels_1d_out, arch.rows, arch.cols))
    return _unbatch(x, squeeze)


def stream2d(features, params):
    """(N, H, W) urban maps -> (C2, H, W)."""
    arch, weights = _weights(params)
    x, squeeze = _batched(features, 3)
    if x.shape[1:] != (arch.n_features, arch.rows, arch.cols):
        raise InvalidInputError(f"Features de forma {x.shape[1:]}, se esperaba {(arch.n_features, arch.rows, arch.cols)}")
    for i in range(len(arch.channels_2d)):
        x = _conv_layer(x, weights, f"s2d.conv{i}", 2, arch.leaky_slope)
    return _unbatch(x, squeeze)


def fairst_forward(history, series, features, params):
    """Fused prediction of the next frame.

    history: (W_in, H, W) or (B, W_in, H, W); series: (M, W_in) or
    (B, M, W_in), ignored when the 1D stream is off; features: (N, H, W),
    shared by the batch, ignored when the 2D stream is off.
    Returns a Tensor (H, W) or (B, H, W), unconstrained in sign.
    """
    arch, weights = _weights(params)
    bound = (weights, arch)
    history, squeeze = _batched(history, 3)
    batch = history.shape[0]

    streams = [stream3d(reshape(history, (batch, 1) + history.shape[1:]), bound)]
    if arch.has_1d:
        series, _ = _batched(series, 2)
        if series.shape[0] != batch:
            raise InvalidInputError(f"Batch de series {series.shape[0]} distinto del de historia {batch}")
        streams.append(stream1d(series, bound))
    if arch.has_2d:
        maps = np.asarray(features.data if isinstance(features, Tensor) else features, dtype=np.float64)
        streams.append(stream2d(np.broadcast_to(maps, (batch,) + maps.shape).copy(), bound))

    x = concat(streams, axis=1)
    for i in range(len(arch.fusion_channels)):
        x = _conv_layer(x, weights, f"head.conv{i}", 2, arch.leaky_slope)
    x = conv_same(x, weights["head.out.w"], 2, weights["head.out.b"])
    x = reshape(x, (batch, arch.rows, arch.cols))
    return _unbatch(x, squeeze)


def forward_demand(weights, arch, histories, series, features, demand_scale):
    """Network on scaled demand, output back in original demand units."""
    scaled = np.asarray(histories, dtype=np.float64) / demand_scale
    return fairst_forward(scaled, series, features, (weights, arch)) * demand_scale


def predict(params, histories, series, features, demand_scale, batch_size=64):
    """Numpy predictions (B, H, W) in original units, evaluated in chunks."""
    weights = bind(params)
    out = []
    for lo in range(0, len(histories), batch_size):
        hi = lo + batch_size
        chunk_series = series[lo:hi] if series is not None else None
        out.append(forward_demand(weights, params.arch, histories[lo:hi], chunk_series, features, demand_scale).data)
    if not out:
        return np.zeros((0, params.arch.rows, params.arch.cols))
    return np.concatenate(out, axis=0)
