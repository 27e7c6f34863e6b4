"""
Checkpoint container: compressed ``.npz`` with one array per parameter and a
JSON ``__meta__`` entry describing config and vocabularies.
"""

import json
import logging
from collections import OrderedDict
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import ValidationError

from config.experiment_config import ModelConfig
from corpus.data_model import LabelVocab
from graph.dag_builder import EdgeTypeVocab
from numeric import Tensor

from .detector import EventDetector
from .params import ModelParams

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
META_KEY = "__meta__"


class CheckpointError(ValueError):
    """A checkpoint file is unreadable or inconsistent with its metadata."""


def save_checkpoint(detector: EventDetector, path: Union[str, Path]) -> Path:
    path = Path(path)
    if path.suffix != ".npz":
        path = path.with_suffix(".npz")
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "format_version": FORMAT_VERSION,
        "model_config": detector.config.model_dump(),
        "embedding_dim": detector.embedding_dim,
        "edge_types": detector.edge_vocab.names,
        "labels": detector.label_vocab.names,
        "parameter_order": detector.params.names(),
    }
    arrays = {name: tensor.data for name, tensor in detector.params.items()}
    np.savez_compressed(path, **{META_KEY: np.array(json.dumps(meta, sort_keys=True))}, **arrays)
    logger.debug(f"Saved checkpoint {path} ({detector.parameter_count()} parameters)")
    return path


def load_checkpoint(path: Union[str, Path]) -> EventDetector:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"checkpoint not found: {path}")
    try:
        with np.load(path, allow_pickle=False) as archive:
            meta = json.loads(str(archive[META_KEY]))
            arrays = {name: np.array(archive[name], dtype=np.float64) for name in archive.files if name != META_KEY}
    except (OSError, ValueError, KeyError) as e:
        raise CheckpointError(f"{path}: unreadable checkpoint ({e})") from e

    if meta.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(f"{path}: unsupported format version {meta.get('format_version')!r}")
    try:
        config = ModelConfig(**meta["model_config"])
        edge_vocab = EdgeTypeVocab.from_names(meta["edge_types"])
        label_vocab = LabelVocab.from_names(meta["labels"])
        order = meta["parameter_order"]
        params = ModelParams(OrderedDict((name, Tensor(arrays[name], name=name)) for name in order))
        return EventDetector(config, params, edge_vocab, label_vocab, int(meta["embedding_dim"]))
    except (KeyError, ValueError, ValidationError) as e:
        raise CheckpointError(f"{path}: invalid checkpoint contents: {e}") from e
