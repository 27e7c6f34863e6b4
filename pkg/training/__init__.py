from .adam import AdamState, adam_step, lr_at
from .run_result import RunResult
from .trainer import DivergenceError, PartitionReadError, Trainer, train

__all__ = ['AdamState', 'adam_step', 'lr_at', 'RunResult', 'DivergenceError', 'PartitionReadError', 'Trainer',
           'train']
