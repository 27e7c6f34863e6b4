"""
Per-token event classifier on top of the DAG-GRU or BiGRU encoder.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from config.experiment_config import ModelConfig
from corpus.data_model import LabelVocab, Sentence
from graph.dag_builder import EdgeTypeVocab, build_dags
from numeric import Tensor, add, constant, cross_entropy, matmul, mul, sum_scalars

from .bigru import encode_plain
from .dag_gru import encode
from .params import ModelParams, expected_shapes, init_params

logger = logging.getLogger(__name__)


def apply_dropout(h: Tensor, rate: float, train_mode: bool, rng: Optional[np.random.Generator]) -> Tensor:
    """Inverted dropout: surviving units are scaled by 1/(1-rate) at train time only."""
    if not train_mode or rate == 0.0:
        return h
    if rng is None:
        raise ValueError("train-mode dropout needs a random generator")
    mask = (rng.random(h.shape) >= rate) / (1.0 - rate)
    return mul(h, constant(mask))


def sentence_inputs(sentence: Sentence) -> List[Tensor]:
    return [constant(tok.embedding) for tok in sentence.tokens]


def representations(sentence: Sentence, params: ModelParams, config: ModelConfig,
                    edge_vocab: Optional[EdgeTypeVocab] = None) -> List[Tensor]:
    """Classifier inputs per token before dropout."""
    inputs = sentence_inputs(sentence)
    if config.mode == "plain-bigru":
        return encode_plain(inputs, params, config)
    if edge_vocab is None:
        raise ValueError("DAG mode needs an edge-type vocabulary")
    return encode(inputs, build_dags(sentence, edge_vocab), params, config)


def forward(sentence: Sentence, params: ModelParams, config: ModelConfig, edge_vocab: Optional[EdgeTypeVocab],
            train_mode: bool = False, dropout_rng: Optional[np.random.Generator] = None) -> List[Tensor]:
    """Logits (one entry per label) for every token."""
    W_o, b_o = params["output.W_o"], params["output.b_o"]
    logits = []
    for h_c in representations(sentence, params, config, edge_vocab):
        h_c = apply_dropout(h_c, config.dropout_rate, train_mode, dropout_rng)
        logits.append(add(matmul(W_o, h_c), b_o))
    return logits


def forward_plain_bigru(sentence: Sentence, params: ModelParams, config: ModelConfig, train_mode: bool = False,
                        dropout_rng: Optional[np.random.Generator] = None) -> List[Tensor]:
    if config.mode != "plain-bigru":
        raise ValueError(f"forward_plain_bigru needs mode 'plain-bigru', got {config.mode!r}")
    return forward(sentence, params, config, None, train_mode, dropout_rng)


def argmax_labels(logits: Sequence[Tensor]) -> List[int]:
    """Highest-scoring label per token; ties go to the smallest id, so NIL wins ties."""
    return [int(np.argmax(l.data)) for l in logits]


class EventDetector:
    """Configuration, vocabularies and parameters of one trained or fresh model."""

    def __init__(self, config: ModelConfig, params: ModelParams, edge_vocab: EdgeTypeVocab,
                 label_vocab: LabelVocab, embedding_dim: int):
        self.config = config
        self.params = params
        self.edge_vocab = edge_vocab
        self.label_vocab = label_vocab
        self.embedding_dim = embedding_dim
        params.validate(self.expected_shapes())

    @classmethod
    def create(cls, config: ModelConfig, edge_vocab: EdgeTypeVocab, label_vocab: LabelVocab,
               embedding_dim: int, seed: int) -> "EventDetector":
        params = init_params(config, embedding_dim, len(edge_vocab), len(label_vocab), seed)
        return cls(config, params, edge_vocab, label_vocab, embedding_dim)

    def expected_shapes(self):
        return expected_shapes(self.config, self.embedding_dim, len(self.edge_vocab), len(self.label_vocab))

    def forward(self, sentence: Sentence, train_mode: bool = False,
                dropout_rng: Optional[np.random.Generator] = None) -> List[Tensor]:
        return forward(sentence, self.params, self.config, self.edge_vocab, train_mode, dropout_rng)

    def sentence_loss(self, sentence: Sentence, train_mode: bool = False,
                      dropout_rng: Optional[np.random.Generator] = None) -> Tensor:
        """Summed token cross-entropy of one sentence."""
        logits = self.forward(sentence, train_mode, dropout_rng)
        return sum_scalars([cross_entropy(l, tok.gold_label) for l, tok in zip(logits, sentence.tokens)])

    def predict(self, sentence: Sentence) -> List[int]:
        return predict(sentence, self.params, self.config, self.edge_vocab)

    def predict_many(self, sentences: Sequence[Sentence]) -> List[List[int]]:
        return [self.predict(s) for s in sentences]

    def parameter_count(self) -> int:
        return self.params.count()


def predict(sentence: Sentence, params: ModelParams, config: ModelConfig,
            edge_vocab: Optional[EdgeTypeVocab] = None) -> List[int]:
    """Eval-mode label ids per token."""
    return argmax_labels(forward(sentence, params, config, edge_vocab, train_mode=False))
