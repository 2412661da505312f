from fairst.tensor.conv import conv_same
from fairst.tensor.engine import Graph, Tensor, backward, leaky_relu, parameter
from fairst.tensor.optim import adam_step, lr_at

__all__ = ["conv_same", "Graph", "Tensor", "backward", "leaky_relu", "parameter", "adam_step", "lr_at"]
