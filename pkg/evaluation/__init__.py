from .metrics import NIL_ID, PRF, f1_by_domain, micro_counts, micro_f1, prf_from_counts
from .statistics import (
    BootstrapResult, ScorePair, ScoreRow, ScoreTable, TTestResult, aggregate_runs, bootstrap_selection,
    ci_halfwidth, exact_selection_expectation, pairwise_t_tests, summarize, t_test,
)

# studies and report depend on training, which itself imports metrics; import them by module path

__all__ = [
    'NIL_ID', 'PRF', 'micro_f1', 'micro_counts', 'prf_from_counts', 'f1_by_domain',
    'ScorePair', 'ScoreRow', 'ScoreTable', 'TTestResult', 'BootstrapResult', 'summarize',
    'ci_halfwidth', 't_test', 'aggregate_runs', 'bootstrap_selection', 'exact_selection_expectation',
    'pairwise_t_tests',
]
