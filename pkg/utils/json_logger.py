"""
运行记录账本
Append-only JSONL ledger of RunResults.

Every study appends one line per finished run; reports are pure functions of
the ledger, so re-running a report never retrains anything.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from pydantic import ValidationError

from training.run_result import RunResult

logger = logging.getLogger(__name__)


class LedgerFormatError(ValueError):
    """A ledger line is not a valid RunResult."""


class RunLedger:
    """
    Writer and reader for a run ledger file.

    Only the process that owns the ledger appends to it; parallel workers hand
    their results back instead of writing.
    """

    def __init__(self, path: Path):
        self.path = Path(path)

    def append(self, result: RunResult) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, 'a', encoding='utf-8') as f:
            f.write(result.model_dump_json() + "\n")
        logger.debug(f"Ledger {self.path.name}: +{result.model_name}/{result.split_id}/seed{result.seed}")

    def extend(self, results: Iterable[RunResult]) -> int:
        count = 0
        for result in results:
            self.append(result)
            count += 1
        return count

    def read(self) -> List[RunResult]:
        """按顺序读取全部运行记录"""
        if not self.path.exists():
            raise FileNotFoundError(f"Ledger not found: {self.path}")
        results = []
        with open(self.path, 'r', encoding='utf-8') as f:
            for line_no, line in enumerate(f, start=1):
                # 跳过空行
                if not line.strip():
                    continue
                try:
                    results.append(RunResult.model_validate(json.loads(line)))
                except (json.JSONDecodeError, ValidationError) as e:
                    raise LedgerFormatError(f"{self.path}:{line_no}: {e}") from e
        return results

    def runs(self, study: Optional[str] = None) -> Dict[str, List[RunResult]]:
        """Runs grouped by model name, in ledger order, optionally filtered by study."""
        grouped: Dict[str, List[RunResult]] = {}
        for result in self.read():
            if study is None or result.study == study:
                grouped.setdefault(result.model_name, []).append(result)
        return grouped

    def __len__(self) -> int:
        return len(self.read()) if self.path.exists() else 0
