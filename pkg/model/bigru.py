"""
Sequential bidirectional GRU baseline.

Each token is represented by its own forward and backward states plus the
final state of each pass (forward at the last token, backward at the first).
"""

from typing import List, Sequence

import numpy as np

from config.experiment_config import ModelConfig
from numeric import Tensor, concat, constant

from .dag_gru import gru_cell
from .params import ModelParams


def run_sequential(inputs: Sequence[Tensor], params: ModelParams, config: ModelConfig, direction: str) -> List[Tensor]:
    gates = params.gates(direction)
    n = len(inputs)
    order = range(n) if direction == "forward" else range(n - 1, -1, -1)
    h = constant(np.zeros(config.hidden_size))
    states: List[Tensor] = [None] * n
    for t in order:
        h = gru_cell(inputs[t], h, gates)
        states[t] = h
    return states


def encode_plain(inputs: Sequence[Tensor], params: ModelParams, config: ModelConfig) -> List[Tensor]:
    """[h_f,t ; h_b,t ; h_f,n-1 ; h_b,0] for each token (4 x hidden)."""
    forward = run_sequential(inputs, params, config, "forward")
    backward = run_sequential(inputs, params, config, "backward")
    last_forward, last_backward = forward[-1], backward[0]
    return [concat(f, b, last_forward, last_backward) for f, b in zip(forward, backward)]
