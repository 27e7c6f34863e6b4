"""
DAG-GRU and BiGRU event detectors.
"""

from .bigru import encode_plain, run_sequential
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .dag_gru import (
    combine, combine_attention, combine_average, encode, gru_cell, run_direction, transform_incoming,
)
from .detector import (
    EventDetector, apply_dropout, argmax_labels, forward, forward_plain_bigru, predict, representations,
)
from .params import (
    DIRECTIONS, AttentionParams, GateParams, ModelParams, classifier_width, expected_shapes, init_params,
)

__all__ = [
    'encode_plain', 'run_sequential',
    'CheckpointError', 'load_checkpoint', 'save_checkpoint',
    'combine', 'combine_attention', 'combine_average', 'encode', 'gru_cell', 'run_direction',
    'transform_incoming',
    'EventDetector', 'apply_dropout', 'argmax_labels', 'forward', 'forward_plain_bigru', 'predict',
    'representations',
    'DIRECTIONS', 'AttentionParams', 'GateParams', 'ModelParams', 'classifier_width', 'expected_shapes',
    'init_params',
]
