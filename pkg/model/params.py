"""
Learnable tensors of the event detector and their initialisation.

Naming: ``<direction>.<name>`` for per-direction tensors (gates, attention,
per-edge-type transforms), ``edge.v_e`` for the shared edge-type embedding
table (one row per edge type) and ``output.W_o`` / ``output.b_o`` for the
classifier. Matrices are stored (out, in).
"""

from collections import OrderedDict
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from config.experiment_config import ModelConfig
from numeric import Tensor

DIRECTIONS = ("forward", "backward")
GATE_NAMES = ("W_r", "W_z", "W_h", "U_r", "U_z", "U_h", "b_r", "b_z", "b_h")


class GateParams(NamedTuple):
    W_r: Tensor
    W_z: Tensor
    W_h: Tensor
    U_r: Tensor
    U_z: Tensor
    U_h: Tensor
    b_r: Tensor
    b_z: Tensor
    b_h: Tensor


class AttentionParams(NamedTuple):
    U_a: Optional[Tensor]
    w_a: Optional[Tensor]
    v_e: Optional[Tensor]
    U_e: Optional[List[Tensor]]


def classifier_width(config: ModelConfig) -> int:
    return (2 if config.mode == "dag" else 4) * config.hidden_size


def expected_shapes(config: ModelConfig, k: int, n_edge_types: int, n_labels: int) -> "OrderedDict[str, Tuple[int, ...]]":
    """Name -> shape for every tensor the configuration needs, in a fixed order."""
    H, E = config.hidden_size, config.edge_dim
    shapes: "OrderedDict[str, Tuple[int, ...]]" = OrderedDict()
    for d in DIRECTIONS:
        for gate in ("r", "z", "h"):
            shapes[f"{d}.W_{gate}"] = (H, k)
        for gate in ("r", "z", "h"):
            shapes[f"{d}.U_{gate}"] = (H, H)
        for gate in ("r", "z", "h"):
            shapes[f"{d}.b_{gate}"] = (H,)
        if config.mode != "dag":
            continue
        if config.variant == "per-edge":
            for e in range(n_edge_types):
                shapes[f"{d}.U_e.{e}"] = (H, H)
        else:
            shapes[f"{d}.U_a"] = (H, H + E)
        if config.variant in ("A", "per-edge"):
            shapes[f"{d}.w_a"] = (H,)
    if config.mode == "dag" and config.variant != "per-edge":
        shapes["edge.v_e"] = (n_edge_types, E)
    shapes["output.W_o"] = (n_labels, classifier_width(config))
    shapes["output.b_o"] = (n_labels,)
    return shapes


class ModelParams:
    """Ordered collection of named parameter tensors."""

    def __init__(self, tensors: "OrderedDict[str, Tensor]"):
        self.tensors = OrderedDict(tensors)

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def __contains__(self, name: str) -> bool:
        return name in self.tensors

    def __iter__(self) -> Iterator[str]:
        return iter(self.tensors)

    def items(self):
        return self.tensors.items()

    def names(self) -> List[str]:
        return list(self.tensors)

    def gates(self, direction: str) -> GateParams:
        return GateParams(*(self.tensors[f"{direction}.{n}"] for n in GATE_NAMES))

    def attention(self, direction: str) -> AttentionParams:
        U_e = None
        if f"{direction}.U_e.0" in self.tensors:
            U_e = []
            while f"{direction}.U_e.{len(U_e)}" in self.tensors:
                U_e.append(self.tensors[f"{direction}.U_e.{len(U_e)}"])
        return AttentionParams(self.tensors.get(f"{direction}.U_a"), self.tensors.get(f"{direction}.w_a"),
                               self.tensors.get("edge.v_e"), U_e)

    def copy(self) -> "ModelParams":
        return ModelParams(OrderedDict((n, t.copy()) for n, t in self.tensors.items()))

    def count(self) -> int:
        """Number of learnable scalars."""
        return int(sum(t.size for t in self.tensors.values()))

    def shapes(self) -> Dict[str, Tuple[int, ...]]:
        return {n: t.shape for n, t in self.tensors.items()}

    def validate(self, expected: Dict[str, Tuple[int, ...]]) -> None:
        missing = set(expected) - set(self.tensors)
        extra = set(self.tensors) - set(expected)
        if missing or extra:
            raise ValueError(f"parameter names differ: missing {sorted(missing)}, unexpected {sorted(extra)}")
        for name, shape in expected.items():
            tensor = self.tensors[name]
            if tensor.shape != tuple(shape):
                raise ValueError(f"parameter {name} has shape {tensor.shape}, expected {tuple(shape)}")
            if not np.all(np.isfinite(tensor.data)):
                raise ValueError(f"parameter {name} has non-finite values")


def glorot_limit(shape: Tuple[int, ...]) -> float:
    fan_out = shape[0]
    fan_in = shape[1] if len(shape) > 1 else 1
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def init_params(config: ModelConfig, k: int, n_edge_types: int, n_labels: int, seed: int) -> ModelParams:
    """Glorot-uniform matrices and attention vectors, zero biases, v_e ~ U(-0.1, 0.1)."""
    rng = np.random.default_rng(seed)
    tensors: "OrderedDict[str, Tensor]" = OrderedDict()
    for name, shape in expected_shapes(config, k, n_edge_types, n_labels).items():
        short = name.split(".")[1]
        if short.startswith("b_"):
            values = np.zeros(shape)
        elif name == "edge.v_e":
            values = rng.uniform(-0.1, 0.1, size=shape)
        else:
            limit = glorot_limit(shape)
            values = rng.uniform(-limit, limit, size=shape)
        tensors[name] = Tensor(values, name=name)
    return ModelParams(tensors)
