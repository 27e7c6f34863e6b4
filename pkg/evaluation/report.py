"""
Report tables built from a run ledger.

Every function here reads RunResults only; nothing is retrained. Tables are
pandas DataFrames written as CSV plus an aligned plain-text rendering.
"""

import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence

import pandas as pd

from config.experiment_config import display_name
from training.run_result import RunResult
from utils.json_logger import RunLedger

from .statistics import BootstrapResult, ScorePair, ScoreTable, bootstrap_selection, pairwise_t_tests
from .studies import score_table

logger = logging.getLogger(__name__)

STUDY_TABLES = {"seed": "seed_study", "split": "split_study"}
BOOTSTRAP_TABLE = "bootstrap_selection"
SEED_COLUMNS = ["Model", "Dev Mean", "Mean", "Min", "Max", "Std. Dev.", "Published"]
SPLIT_COLUMNS = ["Method", "Dev Mean", "Mean", "Min", "Max", "Std. Dev."]
BOOTSTRAP_COLUMNS = ["Model", "Dev Mean", "Mean", "Std. Dev."]


def _pct(value: float) -> str:
    return f"{value:.1f}%"


def _mean_ci(mean: float, ci: float) -> str:
    return f"{mean:.1f}% ± {ci:.2f}"


def study_frame(table: ScoreTable, published: Optional[Mapping[str, float]] = None) -> pd.DataFrame:
    """Study table in its own layout.

    Seed studies end with a Published column (blank unless ``published``
    names the model, in percent); split studies head the first column
    "Method" and have no Published column.
    """
    published = published or {}
    records = []
    for r in table.rows:
        record = [display_name(r.model), _pct(r.dev_mean), _mean_ci(r.test_mean, r.ci_halfwidth),
                  _pct(r.min), _pct(r.max), _pct(r.std)]
        if table.study != "split":
            record.append(_pct(published[r.model]) if r.model in published else "")
        records.append(record)
    return pd.DataFrame(records, columns=SPLIT_COLUMNS if table.study == "split" else SEED_COLUMNS)


def details_frame(table: ScoreTable) -> pd.DataFrame:
    """Unformatted numbers behind a study table, with run counts, parameters and the dev/test gap."""
    frame = pd.DataFrame([row.model_dump() for row in table.rows])
    if not frame.empty:
        frame.insert(0, "display_name", [display_name(m) for m in frame["model"]])
    return frame


def bootstrap_frame(results: Mapping[str, BootstrapResult]) -> pd.DataFrame:
    """Bootstrap-selection layout: Model, Dev Mean, Mean ± CI, Std. Dev."""
    records = [[display_name(name), _pct(100.0 * r.dev_mean), _mean_ci(100.0 * r.mean_test, 100.0 * r.ci_halfwidth),
                _pct(100.0 * r.std_test)]
               for name, r in results.items()]
    return pd.DataFrame(records, columns=BOOTSTRAP_COLUMNS)


def pvalue_frame(runs_by_model: Mapping[str, Sequence[RunResult]]) -> pd.DataFrame:
    """Welch t-test on test F1 for every model pair; '*' marks p < 0.05."""
    samples = {name: [100.0 * r.test_f1 for r in runs] for name, runs in runs_by_model.items()}
    records = []
    for (a, b), result in pairwise_t_tests(samples).items():
        if result is None:
            records.append([display_name(a), display_name(b), None, None, None, ""])
            continue
        records.append([display_name(a), display_name(b), round(result.t, 4), round(result.dof, 2),
                        result.p, "*" if result.significant else ""])
    return pd.DataFrame(records, columns=["Model A", "Model B", "t", "dof", "p", "p<0.05"])


def write_frame(frame: pd.DataFrame, out_dir: Path, stem: str) -> List[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    txt_path = out_dir / f"{stem}.txt"
    frame.to_csv(csv_path, index=False)
    txt_path.write_text(frame.to_string(index=False) + "\n", encoding="utf-8")
    return [csv_path, txt_path]


def report_from_ledger(ledger: RunLedger, out_dir: Path) -> Dict[str, List[Path]]:
    """Seed-study and split-study tables plus pairwise p-values for every study in the ledger."""
    written: Dict[str, List[Path]] = {}
    for study, stem in STUDY_TABLES.items():
        runs_by_model = ledger.runs(study)
        if not runs_by_model:
            continue
        runs = [r for group in runs_by_model.values() for r in group]
        table = score_table(runs, study, order=list(runs_by_model))
        written[stem] = write_frame(study_frame(table), out_dir, stem)
        written[f"{stem}_details"] = write_frame(details_frame(table), out_dir, f"{stem}_details")
        if len(runs_by_model) > 1:
            written[f"{stem}_pvalues"] = write_frame(pvalue_frame(runs_by_model), out_dir, f"{stem}_pvalues")
        logger.info(f"{study} study: {len(runs)} runs over {len(runs_by_model)} model(s)")
    if not written:
        raise ValueError(f"ledger {ledger.path} holds no seed-study or split-study runs")
    return written


def bootstrap_from_ledger(ledger: RunLedger, out_dir: Path, k: int = 5, reps: int = 1000, seed: int = 0,
                          study: str = "seed") -> Dict[str, BootstrapResult]:
    """Best-of-k selection per model over the ledger's runs of one study; writes the bootstrap table."""
    runs_by_model = ledger.runs(study)
    if not runs_by_model:
        raise ValueError(f"ledger {ledger.path} holds no {study}-study runs to resample")
    results = {name: bootstrap_selection([ScorePair(r.dev_f1, r.test_f1) for r in runs], k, reps, seed)
               for name, runs in runs_by_model.items()}
    write_frame(bootstrap_frame(results), out_dir, BOOTSTRAP_TABLE)
    return results
