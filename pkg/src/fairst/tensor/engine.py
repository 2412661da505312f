"""Dense float64 tensors with reverse-mode automatic differentiation.

Every operation returns a new Tensor that remembers its parents and a
function mapping the output gradient to one gradient per parent. Graphs are
traced from a scalar loss and never modified afterwards.
"""
from dataclasses import dataclass

import numpy as np

from fairst.utils import InvalidInputError


class Tensor:
    def __init__(self, data, parents=(), op="leaf", grad_fn=None, requires_grad=False, name=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.parents = tuple(parents)
        self.op = op
        self.grad_fn = grad_fn
        self.requires_grad = requires_grad or any(p.requires_grad for p in self.parents)
        self.grad = None
        self.name = name

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def item(self):
        return float(self.data)

    def numpy(self):
        return self.data

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"Tensor({self.op}{label}, shape={self.shape})"

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return mul(self, -1.0)

    def sum(self, axis=None):
        return tensor_sum(self, axis)

    def mean(self, axis=None):
        return mean(self, axis)

    def reshape(self, *shape):
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return reshape(self, shape)


def parameter(data, name=None):
    return Tensor(np.array(data, dtype=np.float64), requires_grad=True, name=name)


def as_tensor(value):
    return value if isinstance(value, Tensor) else Tensor(value)


def _unbroadcast(grad, shape):
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    return Tensor(a.data + b.data, (a, b), "add",
                  lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)))


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    return Tensor(a.data - b.data, (a, b), "sub",
                  lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)))


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    return Tensor(a.data * b.data, (a, b), "mul",
                  lambda g: (_unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)))


def div(a, b):
    a, b = as_tensor(a), as_tensor(b)
    return Tensor(a.data / b.data, (a, b), "div",
                  lambda g: (_unbroadcast(g / b.data, a.shape),
                             _unbroadcast(-g * a.data / b.data ** 2, b.shape)))


def tensor_sum(x, axis=None):
    out = x.data.sum(axis=axis)

    def grad_fn(g):
        if axis is None:
            return (np.broadcast_to(g, x.shape).copy(),)
        return (np.broadcast_to(np.expand_dims(g, axis), x.shape).copy(),)
    return Tensor(out, (x,), "sum", grad_fn)


def mean(x, axis=None):
    if axis is None:
        count = x.data.size
    else:
        axes = axis if isinstance(axis, tuple) else (axis,)
        count = int(np.prod([x.shape[a] for a in axes]))
    return mul(tensor_sum(x, axis), 1.0 / count)


def absolute(x):
    # subgradiente 0 en el pico
    return Tensor(np.abs(x.data), (x,), "abs", lambda g: (g * np.sign(x.data),))


def square(x):
    return Tensor(x.data ** 2, (x,), "square", lambda g: (2.0 * g * x.data,))


def exp(x):
    out = np.exp(x.data)
    return Tensor(out, (x,), "exp", lambda g: (g * out,))


def leaky_relu(x, slope=0.01):
    """max(x, slope * x) for 0 < slope < 1."""
    positive = x.data > 0
    return Tensor(np.where(positive, x.data, slope * x.data), (x,), "leaky_relu",
                  lambda g: (np.where(positive, g, slope * g),))


def reshape(x, shape):
    return Tensor(x.data.reshape(shape), (x,), "reshape", lambda g: (g.reshape(x.shape),))


def broadcast_to(x, shape):
    return Tensor(np.broadcast_to(x.data, shape).copy(), (x,), "broadcast",
                  lambda g: (_unbroadcast(g, x.shape),))


def concat(tensors, axis=0):
    tensors = [as_tensor(t) for t in tensors]
    sizes = [t.shape[axis] for t in tensors]
    bounds = np.cumsum([0] + sizes)

    def grad_fn(g):
        return tuple(np.take(g, np.arange(lo, hi), axis=axis) for lo, hi in zip(bounds[:-1], bounds[1:]))
    return Tensor(np.concatenate([t.data for t in tensors], axis=axis), tensors, "concat", grad_fn)


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise InvalidInputError(f"matmul con formas incompatibles {a.shape} @ {b.shape}")
    return Tensor(a.data @ b.data, (a, b), "matmul", lambda g: (g @ b.data.T, a.data.T @ g))


@dataclass(frozen=True)
class Graph:
    """Nodes reachable from a root, in topological order (inputs first)."""

    nodes: tuple

    @classmethod
    def trace(cls, root):
        order, seen = [], set()
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for parent in node.parents:
                if id(parent) not in seen:
                    stack.append((parent, False))
        return cls(tuple(order))

    def parameters(self):
        return [n for n in self.nodes if n.op == "leaf" and n.requires_grad]

    def __len__(self):
        return len(self.nodes)


def backward(loss, params=None):
    """Propagate d(loss)/d(node) through the traced graph of a scalar loss.

    Leaves that require grad get `.grad` set. Returns {leaf: grad} for every
    parameter in the graph, or, if `params` is given, their gradients in order
    (zeros for parameters the loss does not reach).
    """
    if loss.data.size != 1:
        raise InvalidInputError(f"backward necesita una pérdida escalar, recibió forma {loss.shape}")
    graph = Graph.trace(loss)
    grads = {id(loss): np.ones_like(loss.data)}
    for node in reversed(graph.nodes):
        g = grads.pop(id(node), None) if node.grad_fn is not None else grads.get(id(node))
        if g is None:
            continue
        if node.grad_fn is None:
            if node.requires_grad:
                node.grad = g
            continue
        for parent, parent_grad in zip(node.parents, node.grad_fn(g)):
            if not parent.requires_grad or parent_grad is None:
                continue
            if id(parent) in grads:
                grads[id(parent)] = grads[id(parent)] + parent_grad
            else:
                grads[id(parent)] = parent_grad
    if params is None:
        return {p: p.grad for p in graph.parameters()}
    result = []
    for p in params:
        if id(p) not in grads:
            p.grad = np.zeros_like(p.data)
        result.append(p.grad)
    return result
