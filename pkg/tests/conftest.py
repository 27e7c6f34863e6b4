import logging
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from config.experiment_config import ModelConfig, TrainConfig  # noqa: E402
from corpus import (  # noqa: E402
    Corpus, DependencyEdge, Document, LabelVocab, Sentence, Token, generate_synthetic,
)
from corpus.splits import CorpusSplit  # noqa: E402


def make_sentence(n_tokens=4, deps=((2, 0, "nsubj"), (2, 1, "aux"), (2, 3, "dobj")), k=4, seed=0, labels=None):
    """Random-embedding sentence; deps are (head, dependent, relation)."""
    rng = np.random.default_rng(seed)
    labels = labels or [0] * n_tokens
    tokens = tuple(Token(f"t{i}", labels[i], rng.uniform(-1, 1, size=k)) for i in range(n_tokens))
    return Sentence(tokens, tuple(DependencyEdge(h, d, rel) for h, d, rel in deps))


def make_run(model="dag-a", study="seed", seed=1, dev=0.7, test=0.65, split_id="standard", n_parameters=100):
    from training.run_result import RunResult

    return RunResult(model_name=model, study=study, seed=seed, split_id=split_id, best_epoch=1, epochs_run=2,
                     dev_f1=dev, test_f1=test, n_parameters=n_parameters)


@pytest.fixture
def tiny_corpus() -> Corpus:
    return generate_synthetic(seed=5, n_docs=12, sentences_per_doc=2, vocab_size=10, n_event_types=2, k=4,
                              trigger_rate=0.3, min_length=3, max_length=6)


@pytest.fixture
def tiny_split(tiny_corpus) -> CorpusSplit:
    ids = tiny_corpus.document_ids
    return CorpusSplit("tiny", tuple(ids[:8]), tuple(ids[8:10]), tuple(ids[10:12]))


@pytest.fixture
def tiny_config() -> ModelConfig:
    return ModelConfig(hidden_size=3, edge_dim=2, dropout_rate=0.0)


@pytest.fixture
def quick_train_config() -> TrainConfig:
    return TrainConfig(lr0=0.01, max_epochs=2, patience=2, batch_size=4, seed=1)


@pytest.fixture
def fig1_sentence() -> Sentence:
    # members(0) were(1) hacked(2): nsubj and auxpass both headed by "hacked"
    rng = np.random.default_rng(11)
    tokens = tuple(Token(w, 0, rng.uniform(-1, 1, size=4)) for w in ("members", "were", "hacked"))
    return Sentence(tokens, (DependencyEdge(2, 0, "nsubj"), DependencyEdge(2, 1, "auxpass")))


@pytest.fixture
def restore_logging():
    """Undo root-logger handlers installed by setup_logging."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    for handler in handlers:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level)
