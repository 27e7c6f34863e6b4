"""
Computation record for reverse-mode gradients.

Operations executed while a ``ComputationRecord`` is active append an entry
holding their operands, their output and a closure mapping the output
gradient to operand gradients. Entries are appended in execution order, so
the log is topologically ordered and ``backward`` can replay it in reverse.
"""

import contextvars
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .tensor import ShapeError, Tensor

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_ACTIVE: contextvars.ContextVar = contextvars.ContextVar("active_record", default=None)


@dataclass(frozen=True)
class RecordEntry:
    op: str
    inputs: Tuple[Tensor, ...]
    output: Tensor
    backward: BackwardFn


class ComputationRecord:
    """Ordered log of the primitive operations of one forward pass."""

    def __init__(self):
        self.entries: List[RecordEntry] = []
        self._token = None

    def __enter__(self) -> "ComputationRecord":
        self._token = _ACTIVE.set(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        _ACTIVE.reset(self._token)
        self._token = None

    def __len__(self) -> int:
        return len(self.entries)

    def append(self, op: str, inputs: Tuple[Tensor, ...], output: Tensor, backward: BackwardFn) -> None:
        self.entries.append(RecordEntry(op, inputs, output, backward))

    def backward(self, loss: Tensor, params: Mapping[str, Tensor]) -> Dict[str, np.ndarray]:
        """Gradient of a scalar ``loss`` with respect to each named parameter.

        Contributions from every use of a tensor are summed; parameters the
        loss does not depend on receive zeros.
        """
        if loss.size != 1:
            raise ShapeError(f"loss must be scalar, got shape {loss.shape}")
        if not any(entry.output is loss for entry in self.entries):
            raise ValueError("loss was not produced through this record")

        grads: Dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
        for entry in reversed(self.entries):
            upstream = grads.get(id(entry.output))
            if upstream is None:
                continue
            for operand, grad in zip(entry.inputs, entry.backward(upstream)):
                if grad is None:
                    continue
                key = id(operand)
                grads[key] = grads[key] + grad if key in grads else grad

        return {
            name: np.array(grads[id(tensor)], dtype=np.float64) if id(tensor) in grads
            else np.zeros_like(tensor.data)
            for name, tensor in params.items()
        }


def active_record() -> Optional[ComputationRecord]:
    return _ACTIVE.get()
