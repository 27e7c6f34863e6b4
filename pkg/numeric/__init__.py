"""
Float64 tensors with a reverse-mode computation record and a finite-difference oracle.
"""

from .gradcheck import GradCheckReport, NonDeterministicError, ParamCheck, finite_diff_check
from .ops import (
    add, concat, constant, cross_entropy, elementwise, matmul, mean_rows, mul, row,
    scale, sigmoid, softmax, stack, sub, sum_scalars, tanh, total,
)
from .record import ComputationRecord, active_record
from .tensor import NonFiniteError, ShapeError, Tensor

__all__ = [
    'Tensor', 'ShapeError', 'NonFiniteError', 'NonDeterministicError',
    'ComputationRecord', 'active_record',
    'matmul', 'add', 'sub', 'mul', 'scale', 'sigmoid', 'tanh', 'elementwise',
    'softmax', 'concat', 'stack', 'row', 'mean_rows', 'total', 'sum_scalars',
    'cross_entropy', 'constant',
    'finite_diff_check', 'GradCheckReport', 'ParamCheck',
]
