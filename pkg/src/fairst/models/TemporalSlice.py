from dataclasses import dataclass

import numpy as np


@dataclass
class TemporalSlice:
    history: np.ndarray
    target: np.ndarray
    history_1d: np.ndarray
    target_index: int
