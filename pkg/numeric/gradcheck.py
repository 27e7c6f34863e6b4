"""
Finite-difference oracle for analytic gradients.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping

import numpy as np

from .record import ComputationRecord
from .tensor import Tensor

logger = logging.getLogger(__name__)


class NonDeterministicError(RuntimeError):
    """The checked function returned different values for identical inputs."""


@dataclass
class ParamCheck:
    name: str
    n_elements: int
    max_rel_error: float
    max_abs_error: float
    passed: bool


@dataclass
class GradCheckReport:
    tolerance: float
    step: float
    params: Dict[str, ParamCheck] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.params.values())

    @property
    def worst(self) -> float:
        return max((c.max_rel_error for c in self.params.values()), default=0.0)

    def failures(self) -> Dict[str, ParamCheck]:
        return {name: c for name, c in self.params.items() if not c.passed}


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-3) -> np.ndarray:
    """|a - n| / max(|a|, |n|, floor), elementwise.

    The floor keeps near-zero gradients from inflating the ratio.
    """
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return np.abs(analytic - numeric) / scale


def finite_diff_check(f: Callable[[], Tensor], params: Mapping[str, Tensor],
                      step: float = 1e-5, tolerance: float = 1e-4,
                      floor: float = 1e-3) -> GradCheckReport:
    """Compare reverse-mode gradients of scalar ``f()`` with central differences.

    ``f`` takes no arguments and reads the tensors in ``params``; they are
    perturbed in place one element at a time and restored afterwards.
    """
    first = f().item()
    second = f().item()
    if first != second:
        raise NonDeterministicError(f"f is not deterministic: {first!r} != {second!r}")

    with ComputationRecord() as record:
        loss = f()
    analytic = record.backward(loss, params)

    report = GradCheckReport(tolerance=tolerance, step=step)
    for name, tensor in params.items():
        flat = tensor.data.reshape(-1)
        numeric = np.zeros(flat.size)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + step
            plus = f().item()
            flat[i] = original - step
            minus = f().item()
            flat[i] = original
            numeric[i] = (plus - minus) / (2.0 * step)

        a = analytic[name].reshape(-1)
        rel = relative_error(a, numeric, floor)
        max_rel = float(rel.max()) if rel.size else 0.0
        max_abs = float(np.abs(a - numeric).max()) if rel.size else 0.0
        report.params[name] = ParamCheck(name, flat.size, max_rel, max_abs, max_rel < tolerance)
        if max_rel >= tolerance:
            logger.warning(f"gradient check failed for {name}: rel. err {max_rel:.3e}")

    return report
