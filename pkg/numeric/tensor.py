"""
Dense 64-bit tensor container used by every model computation.
"""

from typing import Optional, Sequence, Tuple, Union

import numpy as np


class ShapeError(ValueError):
    """Operand shapes are incompatible for an operation."""


class NonFiniteError(ArithmeticError):
    """An operation produced NaN or infinite values."""


ArrayLike = Union[np.ndarray, Sequence[float], float]


class Tensor:
    """A row-major float64 array.

    Parameters and intermediate values share this type. The ``data`` array is
    writable so optimizers and the finite-difference oracle can update
    parameters in place.
    """

    __slots__ = ("data", "name")

    def __init__(self, data: ArrayLike, name: Optional[str] = None):
        self.data = np.array(data, dtype=np.float64)
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    def item(self) -> float:
        if self.data.size != 1:
            raise ShapeError(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self.data.reshape(-1)[0])

    def numpy(self) -> np.ndarray:
        return self.data

    def copy(self) -> "Tensor":
        return Tensor(self.data.copy(), name=self.name)

    @classmethod
    def zeros(cls, *shape: int, name: Optional[str] = None) -> "Tensor":
        return cls(np.zeros(shape, dtype=np.float64), name=name)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<Tensor{label} shape={self.shape}>"


def check_finite(values: np.ndarray, op: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(f"{op} produced non-finite values")
    return values
