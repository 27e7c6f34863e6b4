"""
Adam with the L2 penalty folded into the gradient, plus the step-halving
learning-rate schedule.
"""

from dataclasses import dataclass, field
from typing import Dict, Mapping

import numpy as np

from config.experiment_config import TrainConfig
from numeric import ShapeError, Tensor


@dataclass
class AdamState:
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0

    @classmethod
    def zeros(cls, params: Mapping[str, Tensor]) -> "AdamState":
        return cls({n: np.zeros_like(p.data) for n, p in params.items()},
                   {n: np.zeros_like(p.data) for n, p in params.items()}, 0)


def adam_step(params: Mapping[str, Tensor], grads: Mapping[str, np.ndarray], state: AdamState,
              lr: float, l2: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> AdamState:
    """One bias-corrected Adam update on g + l2 * theta; parameters change in place."""
    t = state.t + 1
    bc1 = 1.0 - beta1 ** t
    bc2 = 1.0 - beta2 ** t
    for name, param in params.items():
        g = grads[name]
        if g.shape != param.shape or state.m[name].shape != param.shape or state.v[name].shape != param.shape:
            raise ShapeError(f"adam_step: {name} has shape {param.shape}, gradient {g.shape}, "
                             f"moments {state.m[name].shape}/{state.v[name].shape}")
        g = g + l2 * param.data
        state.m[name] = beta1 * state.m[name] + (1.0 - beta1) * g
        state.v[name] = beta2 * state.v[name] + (1.0 - beta2) * (g * g)
        m_hat = state.m[name] / bc1
        v_hat = state.v[name] / bc2
        param.data -= lr * m_hat / (np.sqrt(v_hat) + eps)
    state.t = t
    return state


def lr_at(epoch: int, config: TrainConfig) -> float:
    """lr0 * 0.5 ** floor((epoch - 1) / halve_every), epochs counted from 1."""
    if epoch < 1:
        raise ValueError(f"epochs are counted from 1, got {epoch}")
    return config.lr0 * 0.5 ** ((epoch - 1) // config.halve_every)
