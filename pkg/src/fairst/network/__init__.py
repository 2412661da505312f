from fairst.network.baseline import ha_forecast, ha_predict
from fairst.network.fairst import fairst_forward, init_params, param_shapes, stream1d, stream2d, stream3d

__all__ = ["ha_forecast", "ha_predict", "fairst_forward", "init_params", "param_shapes",
           "stream1d", "stream2d", "stream3d"]
