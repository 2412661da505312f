import numpy as np
import pytest

from fairst.models.AdamState import AdamState
from fairst.tensor.optim import adam_step, lr_at


class TestLearningRate:

    @pytest.mark.parametrize("step,expected", [
        (0, 0.005),
        (4999, 0.005),
        (5000, 0.0048),
        (10000, 0.004608),
    ])
    def test_staircase_values(self, step, expected):
        assert lr_at(step) == pytest.approx(expected, rel=1e-15)

    def test_negative_step(self):
        with pytest.raises(ValueError):
            lr_at(-1)


class TestAdam:

    def test_first_step_moves_by_lr_against_gradient_sign(self):
        params = {"w": np.array([1.0, -1.0, 0.5])}
        grads = {"w": np.array([0.3, -2.0, 1e-3])}
        new, state = adam_step(params, grads, AdamState(), 0.01)
        # m̂ = g y v̂ = g², así que el paso es lr·g/(|g| + eps)
        expected = params["w"] - 0.01 * grads["w"] / (np.abs(grads["w"]) + 1e-8)
        np.testing.assert_allclose(new["w"], expected, rtol=1e-12)
        assert state.step == 1

    def test_inputs_untouched(self):
        params = {"w": np.array([1.0])}
        adam_step(params, {"w": np.array([1.0])}, AdamState(), 0.1)
        assert params["w"][0] == 1.0

    def test_second_step_uses_moments(self):
        params = {"w": np.array([0.0])}
        p1, s1 = adam_step(params, {"w": np.array([1.0])}, AdamState(), 0.1)
        p2, s2 = adam_step(p1, {"w": np.array([3.0])}, s1, 0.1)
        m = 0.9 * 0.1 * 1.0 + 0.1 * 3.0
        v = 0.999 * 0.001 * 1.0 + 0.001 * 9.0
        m_hat, v_hat = m / (1 - 0.9 ** 2), v / (1 - 0.999 ** 2)
        assert p2["w"][0] == pytest.approx(p1["w"][0] - 0.1 * m_hat / (np.sqrt(v_hat) + 1e-8), rel=1e-12)
        assert s2.step == 2

    def test_zero_gradient_keeps_parameters(self):
        params = {"w": np.array([0.25, -3.0])}
        new, _ = adam_step(params, {"w": np.zeros(2)}, AdamState(), 0.1)
        np.testing.assert_array_equal(new["w"], params["w"])

    def test_two_steps_descend_a_quadratic(self):
        target = np.array([1.0, -2.0, 0.5])

        def value(w):
            return float(np.sum((w - target) ** 2))

        params, state = {"w": np.zeros(3)}, AdamState()
        values = [value(params["w"])]
        for _ in range(2):
            params, state = adam_step(params, {"w": 2 * (params["w"] - target)}, state, 0.05)
            values.append(value(params["w"]))
        assert values[2] < values[1] < values[0]
