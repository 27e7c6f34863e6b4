"""
工具模块
Logging setup, the run ledger and the job executor.
"""

from .execution_manager import ExecutionManager, JobOutcome
from .json_logger import LedgerFormatError, RunLedger
from .logging import setup_logging

__all__ = [
    'ExecutionManager',
    'JobOutcome',
    'RunLedger',
    'LedgerFormatError',
    'setup_logging',
]
