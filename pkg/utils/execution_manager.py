"""
执行管理器
Execution manager: runs independent training jobs serially or in a process
pool and hands the outcomes back in submission order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Any, Callable, Generic, List, Optional, Sequence, TypeVar

from config.runtime_config import runtime_config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class JobOutcome(Generic[R]):
    """Result of one job; exactly one of value and error is set."""
    index: int
    value: Optional[R] = None
    error: Optional[BaseException] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _guarded(fn: Callable[[Any], R], index: int, job: Any) -> JobOutcome:
    try:
        return JobOutcome(index, value=fn(job))
    except Exception as e:
        return JobOutcome(index, error=e)


class ExecutionManager:
    """Runs a function over a list of jobs, optionally across worker processes."""

    def __init__(self, jobs: Optional[int] = None):
        """
        Args:
            jobs: Requested worker count; None reads DAGGRU_JOBS. Capped at the physical core count.
        """
        requested = jobs if jobs is not None else runtime_config.get_jobs()
        if requested < 1:
            raise ValueError(f"jobs must be >= 1, got {requested}")
        self.jobs = min(requested, runtime_config.get_max_jobs())
        if self.jobs < requested:
            logger.warning(f"Requested {requested} jobs; capped at {self.jobs} physical cores")

    def run(self, fn: Callable[[T], R], jobs: Sequence[T]) -> List[JobOutcome[R]]:
        """Apply fn to every job. Exceptions are captured per job, never raised.

        fn must be a module-level function when more than one worker is used.
        """
        if not jobs:
            return []
        if self.jobs == 1 or len(jobs) == 1:
            logger.info(f"Running {len(jobs)} job(s) serially")
            return [_guarded(fn, i, job) for i, job in enumerate(jobs)]

        workers = min(self.jobs, len(jobs))
        logger.info(f"Running {len(jobs)} jobs on {workers} worker processes")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(partial(_guarded, fn, i), job) for i, job in enumerate(jobs)]
            return [future.result() for future in futures]
