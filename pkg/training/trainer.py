"""
单次训练
Single training run: Adam over shuffled sentence batches, dev-F1 model
selection with patience, one final read of the test partition.
"""

import logging
import time
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from config.experiment_config import ModelConfig, TrainConfig
from corpus.data_model import Corpus, Sentence
from corpus.splits import CorpusSplit
from evaluation.metrics import PRF, f1_by_domain, micro_f1
from graph.dag_builder import edge_type_vocab
from model.checkpoint import save_checkpoint
from model.detector import EventDetector
from numeric import ComputationRecord, NonFiniteError

from .adam import AdamState, adam_step, lr_at
from .run_result import RunResult

logger = logging.getLogger(__name__)


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss or value."""

    def __init__(self, seed: int, epoch: int, detail: str):
        super().__init__(f"training diverged at epoch {epoch} (seed {seed}): {detail}")
        self.seed = seed
        self.epoch = epoch
        self.detail = detail

    def __reduce__(self):
        return (DivergenceError, (self.seed, self.epoch, self.detail))


class PartitionReadError(RuntimeError):
    """The test partition was requested a second time within one run."""


class Trainer:
    """Runs one (seed, split, model) training job."""

    def __init__(self, corpus: Corpus, split: CorpusSplit, model_config: ModelConfig, train_config: TrainConfig,
                 model_name: str = "dag-a", study: str = "single", checkpoint_dir: Optional[Path] = None):
        if corpus.embedding_dim is None:
            raise ValueError("corpus tokens carry no embeddings; attach an embedding table first")
        self.corpus = corpus
        self.split = split
        self.model_config = model_config
        self.train_config = train_config
        self.model_name = model_name
        self.study = study
        self.checkpoint_dir = Path(checkpoint_dir) if checkpoint_dir else None
        self.partition_reads: Dict[str, int] = {"train": 0, "dev": 0, "test": 0}
        self.detector: Optional[EventDetector] = None

    def _sentences(self, partition: str) -> List[Tuple[str, Sentence]]:
        if partition == "test" and self.partition_reads["test"]:
            raise PartitionReadError(f"test partition of split {self.split.split_id!r} already read in this run")
        self.partition_reads[partition] += 1
        return self.corpus.labelled_sentences(self.split.partition(partition))

    def _score(self, partition: str) -> Tuple[PRF, Dict[str, PRF]]:
        """在指定分区上打分：整体 F1 与按领域 F1"""
        labelled = self._sentences(partition)
        sentences = [s for _, s in labelled]
        predictions = self.detector.predict_many(sentences)
        gold = [s.gold_labels for s in sentences]
        return micro_f1(predictions, gold), f1_by_domain([d for d, _ in labelled], predictions, gold)

    def _run_epoch(self, train: List[Sentence], state: AdamState, lr: float,
                   shuffle_rng: np.random.Generator, dropout_rng: np.random.Generator) -> Tuple[float, float]:
        cfg = self.train_config
        params = self.detector.params.tensors
        order = shuffle_rng.permutation(len(train))
        loss_sum, token_count, grad_norm = 0.0, 0, 0.0

        for start in range(0, len(train), cfg.batch_size):
            batch = [train[i] for i in order[start:start + cfg.batch_size]]
            summed: Optional[Dict[str, np.ndarray]] = None
            batch_tokens = 0
            for sentence in batch:
                with ComputationRecord() as record:
                    loss = self.detector.sentence_loss(sentence, train_mode=True, dropout_rng=dropout_rng)
                grads = record.backward(loss, params)
                summed = grads if summed is None else {n: summed[n] + grads[n] for n in summed}
                batch_tokens += len(sentence)
                loss_sum += loss.item()
            mean_grads = {n: g / batch_tokens for n, g in summed.items()}
            grad_norm = float(np.sqrt(sum(float(np.sum(g * g)) for g in mean_grads.values())))
            if not np.isfinite(loss_sum) or not np.isfinite(grad_norm):
                raise NonFiniteError(f"loss {loss_sum}, gradient norm {grad_norm}")
            adam_step(params, mean_grads, state, lr, cfg.l2, cfg.beta1, cfg.beta2, cfg.eps)
            token_count += batch_tokens

        return loss_sum / max(token_count, 1), grad_norm

    def train(self) -> RunResult:
        cfg = self.train_config
        self.partition_reads["train"] += 1
        train = self.corpus.sentences(self.split.train)
        if not train:
            raise ValueError(f"split {self.split.split_id!r} has an empty train partition")

        edge_vocab = edge_type_vocab(self.corpus, self.split.train)
        self.detector = EventDetector.create(self.model_config, edge_vocab, self.corpus.label_vocab,
                                             self.corpus.embedding_dim, cfg.seed)
        state = AdamState.zeros(self.detector.params.tensors)
        # 打乱与 dropout 使用独立的随机流
        shuffle_rng = np.random.default_rng([cfg.seed, 1])
        dropout_rng = np.random.default_rng([cfg.seed, 2])

        logger.info(f"Training {self.model_name} on split {self.split.split_id} (seed {cfg.seed}): "
                    f"{len(train)} sentences, {self.detector.parameter_count()} parameters, "
                    f"{len(edge_vocab)} edge types")
        start_time = time.time()

        # 早停状态
        best_f1, best_epoch, since_best = -1.0, 0, 0
        best_params = None
        loss_trace, dev_trace, norm_trace = [], [], []
        epoch = 0
        for epoch in range(1, cfg.max_epochs + 1):
            lr = lr_at(epoch, cfg)
            try:
                mean_loss, grad_norm = self._run_epoch(train, state, lr, shuffle_rng, dropout_rng)
                dev_prf, _ = self._score("dev")
            except NonFiniteError as e:
                logger.error(f"Run {self.model_name}/{self.split.split_id} seed {cfg.seed} diverged at epoch {epoch}: {e}")
                raise DivergenceError(cfg.seed, epoch, str(e)) from e
            loss_trace.append(mean_loss)
            dev_trace.append(dev_prf.f1)
            norm_trace.append(grad_norm)
            logger.info(f"epoch {epoch:2d} lr={lr:.3g} loss={mean_loss:.4f} "
                        f"grad_norm={grad_norm:.4f} dev_f1={dev_prf.f1:.4f}")

            if dev_prf.f1 > best_f1:
                best_f1, best_epoch, since_best = dev_prf.f1, epoch, 0
                best_params = self.detector.params.copy()
            else:
                since_best += 1
                if since_best >= cfg.patience:
                    logger.info(f"No dev improvement for {since_best} epochs; stopping at epoch {epoch}")
                    break

        self.detector.params = best_params
        test_prf, test_domains = self._score("test")

        checkpoint_path = None
        if self.checkpoint_dir is not None:
            name = f"{self.model_name}_{self.split.split_id}_seed{cfg.seed}.npz"
            checkpoint_path = str(save_checkpoint(self.detector, self.checkpoint_dir / name))

        logger.info(f"Finished {self.model_name} seed {cfg.seed}: best epoch {best_epoch}, "
                    f"dev F1 {best_f1:.4f}, test F1 {test_prf.f1:.4f} ({time.time() - start_time:.1f}s)")
        return RunResult(
            model_name=self.model_name,
            study=self.study,
            seed=cfg.seed,
            split_id=self.split.split_id,
            best_epoch=best_epoch,
            epochs_run=epoch,
            dev_f1=best_f1,
            test_f1=test_prf.f1,
            test_precision=test_prf.precision,
            test_recall=test_prf.recall,
            domain_test_f1={d: prf.f1 for d, prf in test_domains.items()},
            n_parameters=self.detector.parameter_count(),
            loss_trace=loss_trace,
            dev_f1_trace=dev_trace,
            grad_norm_trace=norm_trace,
            checkpoint_path=checkpoint_path,
        )


def train(corpus: Corpus, split: CorpusSplit, model_config: ModelConfig, train_config: TrainConfig,
          model_name: str = "dag-a", study: str = "single", checkpoint_dir: Optional[Path] = None) -> RunResult:
    """Train one model and return its RunResult (checkpoint written when a directory is given)."""
    return Trainer(corpus, split, model_config, train_config, model_name, study, checkpoint_dir).train()
