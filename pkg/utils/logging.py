import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

from config.runtime_config import runtime_config


def setup_logging(log_dir: Path, level: Optional[int] = None) -> logging.Logger:
    """Set up logging to a dated file in log_dir and to the console.

    Console records go to stdout; stderr is left to the CLI error line.

    Args:
        log_dir: Directory to store log files
        level: Root level; defaults to DAGGRU_LOG_LEVEL

    Returns:
        The configured root logger
    """
    if level is None:
        level = runtime_config.get_log_level()
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)
    log_file = log_dir / f"{datetime.now().strftime('%Y-%m-%d')}.log"

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file, encoding='utf-8'),
            logging.StreamHandler(sys.stdout)
        ],
        force=True,
    )

    # Console never shows DEBUG
    for handler in logging.getLogger().handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
            handler.setLevel(max(level, logging.INFO))

    return logging.getLogger()
