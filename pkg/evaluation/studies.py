"""
方差研究
Variance studies: the same model trained under many seeds on one split, and
several models trained once on each of many random splits.

Runs are independent jobs; the coordinating process collects their
RunResults in submission order and is the only writer of the ledger.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from config.experiment_config import ModelConfig, TrainConfig
from corpus.data_model import Corpus
from corpus.splits import STANDARD_COUNTS, CorpusSplit, random_split
from training.run_result import RunResult
from training.trainer import train
from utils.execution_manager import ExecutionManager
from utils.json_logger import RunLedger

from .statistics import ScoreTable, aggregate_runs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainJob:
    """一次训练任务，可被子进程序列化执行"""

    corpus: Corpus
    split: CorpusSplit
    model_config: ModelConfig
    train_config: TrainConfig
    model_name: str
    study: str
    checkpoint_dir: Optional[Path] = None


def run_train_job(job: TrainJob) -> RunResult:
    return train(job.corpus, job.split, job.model_config, job.train_config,
                 job.model_name, job.study, job.checkpoint_dir)


@dataclass
class StudyFailure:
    """失败的运行：记录后跳过"""

    model_name: str
    split_id: str
    seed: int
    error: str


@dataclass
class StudyOutcome:
    table: ScoreTable
    runs: List[RunResult] = field(default_factory=list)
    failures: List[StudyFailure] = field(default_factory=list)


def score_table(runs: Sequence[RunResult], study: str, order: Optional[Sequence[str]] = None) -> ScoreTable:
    """Aggregate RunResults per model name; models keep first-appearance order unless given."""
    grouped: Dict[str, List[RunResult]] = {}
    for run in runs:
        grouped.setdefault(run.model_name, []).append(run)
    names = [m for m in order if m in grouped] if order is not None else list(grouped)
    rows = [aggregate_runs(name, [r.dev_f1 for r in grouped[name]], [r.test_f1 for r in grouped[name]],
                           grouped[name][0].n_parameters)
            for name in names]
    return ScoreTable(study=study, rows=rows)


def _execute(jobs: List[TrainJob], n_jobs: Optional[int],
             ledger: Optional[RunLedger]) -> Tuple[List[RunResult], List[StudyFailure]]:
    outcomes = ExecutionManager(n_jobs).run(run_train_job, jobs)
    runs, failures = [], []
    for job, outcome in zip(jobs, outcomes):
        if outcome.ok:
            runs.append(outcome.value)
            if ledger is not None:
                ledger.append(outcome.value)
            continue
        error = f"{type(outcome.error).__name__}: {outcome.error}"
        logger.error(f"Run {job.model_name}/{job.split.split_id} seed {job.train_config.seed} failed: {error}")
        failures.append(StudyFailure(job.model_name, job.split.split_id, job.train_config.seed, error))
    return runs, failures


def seed_study(corpus: Corpus, split: CorpusSplit, model_config: ModelConfig, train_config: TrainConfig,
               n_seeds: int, model_name: str = "dag-a", jobs: Optional[int] = None,
               checkpoint_dir: Optional[Path] = None, ledger: Optional[RunLedger] = None) -> StudyOutcome:
    """Train seeds 1..n_seeds on one split and aggregate; failed runs are reported and left out."""
    if n_seeds < 2:
        raise ValueError(f"seed study needs n_seeds >= 2, got {n_seeds}")
    logger.info(f"Seed study: {model_name} x {n_seeds} seeds on split {split.split_id}")
    job_list = [TrainJob(corpus, split, model_config, train_config.model_copy(update={"seed": seed}),
                         model_name, "seed", checkpoint_dir)
                for seed in range(1, n_seeds + 1)]
    runs, failures = _execute(job_list, jobs, ledger)
    if not runs:
        raise RuntimeError(f"all {n_seeds} runs of {model_name} failed")
    if failures:
        logger.warning(f"{len(failures)} of {n_seeds} runs failed; aggregating n={len(runs)}")
    return StudyOutcome(score_table(runs, "seed"), runs, failures)


def split_study(corpus: Corpus, model_configs: Mapping[str, ModelConfig], train_config: TrainConfig,
                n_splits: int, counts: Sequence[int] = STANDARD_COUNTS, jobs: Optional[int] = None,
                checkpoint_dir: Optional[Path] = None, ledger: Optional[RunLedger] = None) -> StudyOutcome:
    """Train every model once on each of random splits 1..n_splits and aggregate per model."""
    if n_splits < 1:
        raise ValueError(f"split study needs n_splits >= 1, got {n_splits}")
    if not model_configs:
        raise ValueError("split study needs at least one model")
    splits = [random_split(corpus, seed, counts) for seed in range(1, n_splits + 1)]
    logger.info(f"Split study: {sorted(model_configs)} x {n_splits} splits of {tuple(counts)}")
    job_list = [TrainJob(corpus, split, config, train_config, name, "split", checkpoint_dir)
                for split in splits
                for name, config in model_configs.items()]
    runs, failures = _execute(job_list, jobs, ledger)
    if not runs:
        raise RuntimeError("every run of the split study failed")
    return StudyOutcome(score_table(runs, "split", order=list(model_configs)), runs, failures)
