"""
Train/dev/test document partitions: manifest-driven and seeded random splits.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from .data_model import Corpus

logger = logging.getLogger(__name__)

STANDARD_COUNTS = (529, 30, 40)


class SplitError(ValueError):
    """A split request is inconsistent with the corpus."""


class SplitManifest(BaseModel):
    train: List[str] = Field(default_factory=list)
    dev: List[str] = Field(default_factory=list)
    test: List[str] = Field(default_factory=list)


@dataclass(frozen=True)
class CorpusSplit:
    split_id: str
    train: Tuple[str, ...]
    dev: Tuple[str, ...]
    test: Tuple[str, ...]

    @property
    def counts(self) -> Tuple[int, int, int]:
        return len(self.train), len(self.dev), len(self.test)

    def partition(self, name: str) -> Tuple[str, ...]:
        if name not in ("train", "dev", "test"):
            raise ValueError(f"unknown partition {name!r}")
        return getattr(self, name)

    def to_manifest(self) -> SplitManifest:
        return SplitManifest(train=list(self.train), dev=list(self.dev), test=list(self.test))


def _validate(corpus: Corpus, split: CorpusSplit) -> CorpusSplit:
    seen = {}
    for name in ("train", "dev", "test"):
        for doc_id in split.partition(name):
            if doc_id not in corpus:
                raise SplitError(f"{name} lists document {doc_id!r} which is not in the corpus")
            if doc_id in seen:
                raise SplitError(f"document {doc_id!r} appears in both {seen[doc_id]} and {name}")
            seen[doc_id] = name
    return split


def standard_split(corpus: Corpus, manifest: SplitManifest, split_id: str = "standard") -> CorpusSplit:
    """Partition exactly as listed in the manifest."""
    split = CorpusSplit(split_id, tuple(manifest.train), tuple(manifest.dev), tuple(manifest.test))
    return _validate(corpus, split)


def random_split(corpus: Corpus, seed: int, counts: Sequence[int] = STANDARD_COUNTS) -> CorpusSplit:
    """Uniform assignment of documents without replacement, fixed partition sizes."""
    n_train, n_dev, n_test = (int(c) for c in counts)
    if min(n_train, n_dev, n_test) < 0:
        raise SplitError(f"split counts must be non-negative, got {tuple(counts)}")
    if n_train + n_dev + n_test > len(corpus):
        raise SplitError(f"split counts {tuple(counts)} exceed corpus size {len(corpus)}")
    ids = corpus.document_ids
    order = np.random.default_rng(seed).permutation(len(ids))
    picked = [ids[i] for i in order]
    split = CorpusSplit(
        f"random-{seed}",
        tuple(picked[:n_train]),
        tuple(picked[n_train:n_train + n_dev]),
        tuple(picked[n_train + n_dev:n_train + n_dev + n_test]),
    )
    logger.debug(f"random split seed={seed} counts={split.counts}")
    return split


def ordered_split(corpus: Corpus, counts: Sequence[int], split_id: str = "standard") -> CorpusSplit:
    """Consecutive blocks of the corpus document order (used to write a fixed manifest)."""
    n_train, n_dev, n_test = (int(c) for c in counts)
    if n_train + n_dev + n_test > len(corpus):
        raise SplitError(f"split counts {tuple(counts)} exceed corpus size {len(corpus)}")
    ids = corpus.document_ids
    return CorpusSplit(split_id, tuple(ids[:n_train]), tuple(ids[n_train:n_train + n_dev]),
                       tuple(ids[n_train + n_dev:n_train + n_dev + n_test]))


def load_manifest(path: Union[str, Path]) -> SplitManifest:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"split manifest not found: {path}")
    return SplitManifest.model_validate_json(path.read_text(encoding="utf-8"))


def save_manifest(split: CorpusSplit, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(split.to_manifest().model_dump(), indent=2) + "\n", encoding="utf-8")
    return path
