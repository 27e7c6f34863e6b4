"""
运行时配置
Runtime settings read from the environment.
"""

import logging
import os
from pathlib import Path

import psutil


class RuntimeConfig:
    """Environment-backed defaults for output location, log level and parallelism."""

    def __init__(self):
        self.default_output_dir = "./daggru_output"
        self.default_log_level = "INFO"
        self.default_jobs = 1

    def get_output_dir(self) -> Path:
        """Directory for checkpoints, ledgers, reports and logs."""
        return Path(os.getenv("DAGGRU_OUTPUT_DIR", self.default_output_dir))

    def get_log_level(self) -> int:
        """日志级别，未知名称回退到 INFO"""
        name = os.getenv("DAGGRU_LOG_LEVEL", self.default_log_level).upper()
        level = logging.getLevelName(name)
        return level if isinstance(level, int) else logging.INFO

    def get_jobs(self) -> int:
        """默认并行任务数"""
        return max(1, int(os.getenv("DAGGRU_JOBS", str(self.default_jobs))))

    def get_max_jobs(self) -> int:
        """Upper bound for concurrent training runs: physical cores."""
        return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1

    def describe(self) -> dict:
        return {
            "output_dir": str(self.get_output_dir()),
            "log_level": logging.getLevelName(self.get_log_level()),
            "jobs": self.get_jobs(),
            "max_jobs": self.get_max_jobs(),
        }


runtime_config = RuntimeConfig()
