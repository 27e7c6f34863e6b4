"""
DAG-GRU: a GRU whose recurrent input is a combination of the hidden states
arriving over a token's incoming temporal and dependency edges.

Each incoming state is concatenated with its edge-type embedding and mapped
through the shared ``U_a`` with tanh (or through a per-edge-type ``U_e`` in
the per-edge variant). The transformed rows are combined by attention
(variant A, per-edge) or by their mean (variant B), and the result replaces
h_{t-1} in the GRU equations.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from config.experiment_config import ModelConfig
from graph.dag_builder import TEMPORAL_ID, DagGraph
from numeric import (
    Tensor, add, concat, constant, matmul, mean_rows, mul, row, sigmoid, softmax, stack, sub, tanh,
)

from .params import AttentionParams, GateParams, ModelParams

IncomingStates = Sequence[Tuple[Tensor, int]]


def gru_cell(x: Tensor, h_in: Tensor, gates: GateParams) -> Tensor:
    r = sigmoid(add(add(matmul(gates.W_r, x), matmul(gates.U_r, h_in)), gates.b_r))
    z = sigmoid(add(add(matmul(gates.W_z, x), matmul(gates.U_z, h_in)), gates.b_z))
    h_tilde = tanh(add(add(matmul(gates.W_h, x), mul(r, matmul(gates.U_h, h_in))), gates.b_h))
    keep = sub(constant(np.ones(z.shape)), z)
    return add(mul(keep, h_in), mul(z, h_tilde))


def transform_incoming(incoming: IncomingStates, attention: AttentionParams) -> List[Tensor]:
    """One transformed row per incoming edge, duplicates kept."""
    if not incoming:
        raise ValueError("a node needs at least one incoming state to combine")
    if attention.U_e is not None:
        return [tanh(matmul(attention.U_e[edge_type], h)) for h, edge_type in incoming]
    return [tanh(matmul(attention.U_a, concat(h, row(attention.v_e, edge_type)))) for h, edge_type in incoming]


def combine_attention(incoming: IncomingStates, attention: AttentionParams) -> Tuple[Tensor, Tensor]:
    """Variant A: alpha = softmax(tanh(D w_a)), h_a = alpha^T D. Returns (h_a, alpha)."""
    D = stack(transform_incoming(incoming, attention))
    alpha = softmax(tanh(matmul(D, attention.w_a)))
    return matmul(alpha, D), alpha


def combine_average(incoming: IncomingStates, attention: AttentionParams) -> Tensor:
    """Variant B: unweighted mean of the transformed rows."""
    return mean_rows(stack(transform_incoming(incoming, attention)))


def combine(incoming: IncomingStates, attention: AttentionParams, config: ModelConfig) -> Tensor:
    if config.variant == "B":
        return combine_average(incoming, attention)
    h_a, _ = combine_attention(incoming, attention)
    return h_a


def run_direction(inputs: Sequence[Tensor], dag: DagGraph, params: ModelParams, config: ModelConfig,
                  direction: str) -> List[Tensor]:
    """Hidden state per token for one direction, visiting tokens in topological order.

    The direction-initial token reads the zero initial state through a
    synthetic temporal edge, so every token goes through the combine step.
    """
    n = len(inputs)
    gates = params.gates(direction)
    attention = params.attention(direction)
    side = dag.side(direction)
    order = range(n) if direction == "forward" else range(n - 1, -1, -1)
    h_init = constant(np.zeros(config.hidden_size))

    states: List[Optional[Tensor]] = [None] * n
    for t in order:
        incoming = [(states[source], edge_type) for source, edge_type in side[t]]
        if not incoming:
            incoming = [(h_init, TEMPORAL_ID)]
        states[t] = gru_cell(inputs[t], combine(incoming, attention, config), gates)
    return states


def encode(inputs: Sequence[Tensor], dag: DagGraph, params: ModelParams, config: ModelConfig) -> List[Tensor]:
    """h_c,t = [h_f,t ; h_b,t] for each token."""
    forward = run_direction(inputs, dag, params, config, "forward")
    backward = run_direction(inputs, dag, params, config, "backward")
    return [concat(f, b) for f, b in zip(forward, backward)]
