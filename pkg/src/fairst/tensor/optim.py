import numpy as np

from fairst.models.AdamState import AdamState

LR_BASE = 0.005
LR_DECAY = 0.96
LR_EVERY = 5000


def lr_at(step, base=LR_BASE, decay=LR_DECAY, every=LR_EVERY):
    """Staircase exponential decay: base * decay ** floor(step / every)."""
    if step < 0:
        raise ValueError(f"step debe ser >= 0, recibió {step}")
    return base * decay ** (step // every)


def adam_step(params, grads, state, lr):
    """One bias-corrected Adam update.

    params and grads are dicts name -> ndarray. Returns new (params, state);
    the inputs are left untouched.
    """
    step = state.step + 1
    b1, b2, eps = state.beta1, state.beta2, state.eps
    new_params, m_all, v_all = {}, {}, {}
    for name, value in params.items():
        g = grads[name]
        if g.shape != value.shape:
            raise ValueError(f"Gradiente de {name} con forma {g.shape}, parámetro {value.shape}")
        m = b1 * state.m.get(name, np.zeros_like(value)) + (1 - b1) * g
        v = b2 * state.v.get(name, np.zeros_like(value)) + (1 - b2) * g * g
        m_hat = m / (1 - b1 ** step)
        v_hat = v / (1 - b2 ** step)
        new_params[name] = value - lr * m_hat / (np.sqrt(v_hat) + eps)
        m_all[name], v_all[name] = m, v
    return new_params, AdamState(m_all, v_all, step, b1, b2, eps)
