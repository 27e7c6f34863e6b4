"""
Differentiable primitives over ``Tensor``.

Every function computes its result eagerly with numpy and, when a
``ComputationRecord`` is active, logs itself with a backward closure. Without
an active record the functions are plain evaluation.
"""

from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import expit, logsumexp
from scipy.special import softmax as _softmax

from .record import BackwardFn, active_record
from .tensor import ShapeError, Tensor, check_finite


def _emit(op: str, inputs: Tuple[Tensor, ...], values: np.ndarray, backward: BackwardFn) -> Tensor:
    out = Tensor(check_finite(values, op))
    record = active_record()
    if record is not None:
        record.append(op, inputs, out, backward)
    return out


def _same_shape(op: str, a: Tensor, b: Tensor) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{op}: shape mismatch {a.shape} vs {b.shape}")


def _require_vector(op: str, *tensors: Tensor) -> None:
    for t in tensors:
        if t.ndim != 1:
            raise ShapeError(f"{op} expects rank-1 tensors, got shape {t.shape}")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix (or matrix-vector / vector-matrix) product for rank ≤ 2."""
    if a.ndim not in (1, 2) or b.ndim not in (1, 2) or a.shape[-1] != b.shape[0]:
        raise ShapeError(f"matmul: cannot multiply {a.shape} by {b.shape}")
    x, y = a.data, b.data

    def backward(g: np.ndarray):
        if x.ndim == 2 and y.ndim == 2:
            return g @ y.T, x.T @ g
        if x.ndim == 2:
            return np.outer(g, y), x.T @ g
        if y.ndim == 2:
            return y @ g, np.outer(x, g)
        return g * y, g * x

    return _emit("matmul", (a, b), x @ y, backward)


def add(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("add", a, b)
    return _emit("add", (a, b), a.data + b.data, lambda g: (g, g))


def sub(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("sub", a, b)
    return _emit("sub", (a, b), a.data - b.data, lambda g: (g, -g))


def mul(a: Tensor, b: Tensor) -> Tensor:
    """Hadamard product."""
    _same_shape("mul", a, b)
    x, y = a.data, b.data
    return _emit("mul", (a, b), x * y, lambda g: (g * y, g * x))


def scale(a: Tensor, factor: float) -> Tensor:
    return _emit("scale", (a,), a.data * factor, lambda g: (g * factor,))


def sigmoid(a: Tensor) -> Tensor:
    s = expit(a.data)
    return _emit("sigmoid", (a,), s, lambda g: (g * s * (1.0 - s),))


def tanh(a: Tensor) -> Tensor:
    t = np.tanh(a.data)
    return _emit("tanh", (a,), t, lambda g: (g * (1.0 - t * t),))


_ELEMENTWISE: Dict[str, Callable[..., Tensor]] = {
    "add": add,
    "sub": sub,
    "mul": mul,
    "sigmoid": sigmoid,
    "tanh": tanh,
}


def elementwise(op: str, *operands: Tensor) -> Tensor:
    """Dispatch a pointwise operation by name."""
    try:
        fn = _ELEMENTWISE[op]
    except KeyError:
        raise ValueError(f"unknown elementwise op {op!r}; expected one of {sorted(_ELEMENTWISE)}")
    return fn(*operands)


def softmax(v: Tensor) -> Tensor:
    _require_vector("softmax", v)
    if v.size == 0:
        raise ShapeError("softmax of an empty vector")
    s = _softmax(v.data)

    def backward(g: np.ndarray):
        return (s * (g - np.dot(g, s)),)

    return _emit("softmax", (v,), s, backward)


def concat(*parts: Tensor) -> Tensor:
    _require_vector("concat", *parts)
    sizes = [p.size for p in parts]
    bounds = np.cumsum(sizes)[:-1]

    def backward(g: np.ndarray):
        return tuple(np.split(g, bounds))

    return _emit("concat", tuple(parts), np.concatenate([p.data for p in parts]), backward)


def stack(rows: Sequence[Tensor]) -> Tensor:
    """Stack equal-length vectors into a matrix, one row per vector."""
    if not rows:
        raise ShapeError("stack of an empty list")
    _require_vector("stack", *rows)
    width = rows[0].size
    for r in rows:
        if r.size != width:
            raise ShapeError(f"stack: row lengths differ ({width} vs {r.size})")
    return _emit("stack", tuple(rows), np.stack([r.data for r in rows]), lambda g: tuple(g))


def row(matrix: Tensor, index: int) -> Tensor:
    """Row lookup with gradient scattered back to the selected row."""
    if matrix.ndim != 2:
        raise ShapeError(f"row expects a matrix, got shape {matrix.shape}")
    if not 0 <= index < matrix.shape[0]:
        raise IndexError(f"row {index} out of range for {matrix.shape[0]} rows")

    def backward(g: np.ndarray):
        grad = np.zeros_like(matrix.data)
        grad[index] = g
        return (grad,)

    return _emit("row", (matrix,), matrix.data[index].copy(), backward)


def mean_rows(matrix: Tensor) -> Tensor:
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise ShapeError(f"mean_rows expects a non-empty matrix, got shape {matrix.shape}")
    n = matrix.shape[0]
    return _emit("mean_rows", (matrix,), matrix.data.mean(axis=0),
                 lambda g: (np.broadcast_to(g / n, matrix.shape).copy(),))


def total(a: Tensor) -> Tensor:
    """Sum of all elements as a scalar tensor."""
    return _emit("sum", (a,), np.array(a.data.sum()), lambda g: (np.full_like(a.data, float(g)),))


def sum_scalars(values: Sequence[Tensor]) -> Tensor:
    if not values:
        raise ShapeError("sum_scalars of an empty list")
    return _emit("sum_scalars", tuple(values), np.array(sum(float(v.item()) for v in values)),
                 lambda g: tuple(np.full_like(v.data, float(g)) for v in values))


def cross_entropy(logits: Tensor, gold: int) -> Tensor:
    """Negative log-likelihood of class ``gold`` under softmax(logits)."""
    _require_vector("cross_entropy", logits)
    if not 0 <= gold < logits.size:
        raise IndexError(f"gold class {gold} out of range for {logits.size} classes")
    z = logits.data
    loss = logsumexp(z) - z[gold]

    def backward(g: np.ndarray):
        grad = _softmax(z)
        grad[gold] -= 1.0
        return (grad * float(g),)

    return _emit("cross_entropy", (logits,), np.array(loss), backward)


def constant(values, name: Optional[str] = None) -> Tensor:
    """Wrap data that takes no part in differentiation."""
    return Tensor(values, name=name)
