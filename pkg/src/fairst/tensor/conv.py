import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from fairst.tensor.engine import Tensor, as_tensor
from fairst.utils import InvalidInputError


def _check(x, w, b, rank):
    if rank not in (1, 2, 3):
        raise InvalidInputError(f"rank debe ser 1, 2 o 3, recibió {rank}")
    if x.ndim != rank + 2:
        raise InvalidInputError(f"Entrada de forma {x.shape}: se esperaban {rank + 2} ejes (batch, canal, ...)")
    if w.ndim != rank + 2:
        raise InvalidInputError(f"Kernels de forma {w.shape}: se esperaban {rank + 2} ejes")
    if w.shape[1] != x.shape[1]:
        raise InvalidInputError(f"Canales inconsistentes: entrada {x.shape[1]}, kernel {w.shape[1]}")
    if any(k % 2 == 0 for k in w.shape[2:]):
        raise InvalidInputError(f"Los kernels deben tener tamaño impar, recibió {w.shape[2:]}")
    if b is not None and b.shape != (w.shape[0],):
        raise InvalidInputError(f"Bias de forma {b.shape}, se esperaba ({w.shape[0]},)")


def _correlate(x, w, rank):
    """Same-padded cross-correlation on arrays; also returns the window view of the padded input."""
    kernel = w.shape[2:]
    spatial_axes = tuple(range(2, 2 + rank))
    pads = [(0, 0), (0, 0)] + [(k // 2, k // 2) for k in kernel]
    windows = sliding_window_view(np.pad(x, pads), kernel, axis=spatial_axes)
    window_axes = [1] + list(range(2 + rank, 2 + 2 * rank))
    out = np.tensordot(windows, w, axes=(window_axes, [1] + list(spatial_axes)))
    return np.moveaxis(out, -1, 1), windows


def conv_same(x, w, rank, b=None):
    """Zero-padded cross-correlation keeping the spatial shape.

    x: (batch, in_channels, *spatial), w: (out_channels, in_channels, *kernel),
    b: (out_channels,) or None. Returns (batch, out_channels, *spatial).
    """
    x, w = as_tensor(x), as_tensor(w)
    b = as_tensor(b) if b is not None else None
    _check(x, w, b, rank)

    out, windows = _correlate(x.data, w.data, rank)
    if b is not None:
        out = out + b.data.reshape((1, w.shape[0]) + (1,) * rank)

    spatial_axes = tuple(range(2, 2 + rank))

    def grad_fn(g):
        g_w = np.tensordot(g, windows, axes=((0,) + spatial_axes, (0,) + spatial_axes))
        # el gradiente de la entrada es la correlación con el kernel rotado y los canales traspuestos
        rotated = np.flip(w.data, axis=spatial_axes).swapaxes(0, 1)
        g_x, _ = _correlate(g, rotated, rank)
        grads = (g_x, g_w)
        if b is not None:
            grads = grads + (g.sum(axis=(0,) + spatial_axes),)
        return grads

    parents = (x, w) if b is None else (x, w, b)
    return Tensor(out, parents, f"conv{rank}d", grad_fn)
