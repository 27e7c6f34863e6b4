"""
Run-variance statistics: summary rows, t-based confidence half-widths, Welch
t-tests and bootstrap estimates of best-of-k model selection.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import stats


@dataclass(frozen=True)
class ScorePair:
    """Dev and test F1 of one run, as fractions."""
    dev_f1: float
    test_f1: float

    def __post_init__(self):
        for name in ("dev_f1", "test_f1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")


class ScoreRow(BaseModel):
    """Aggregate over the runs of one model; every score is an F1 percentage."""

    model: str
    n_runs: int = Field(..., ge=1)
    dev_mean: float
    test_mean: float
    ci_halfwidth: float = Field(..., ge=0.0)
    min: float
    max: float
    std: float = Field(..., ge=0.0)
    dev_test_gap: float = 0.0
    n_parameters: int = 0

    @model_validator(mode="after")
    def _ordered(self) -> "ScoreRow":
        if not self.min - 1e-9 <= self.test_mean <= self.max + 1e-9:
            raise ValueError(f"mean {self.test_mean} outside [{self.min}, {self.max}]")
        return self


class ScoreTable(BaseModel):
    """One ScoreRow per model of a study, in insertion order."""

    study: str = "seed"
    rows: List[ScoreRow] = Field(default_factory=list)

    def row(self, model: str) -> ScoreRow:
        for row in self.rows:
            if row.model == model:
                return row
        raise KeyError(model)

    @property
    def models(self) -> List[str]:
        return [row.model for row in self.rows]


@dataclass(frozen=True)
class TTestResult:
    t: float
    dof: float
    p: float

    @property
    def significant(self) -> bool:
        return self.p < 0.05


@dataclass(frozen=True)
class BootstrapResult:
    mean_test: float
    std_test: float
    dev_mean: float
    ci_halfwidth: float
    k: int
    reps: int


def summarize(values: Sequence[float]) -> Tuple[float, float, float, float]:
    """(mean, min, max, sample std); std is 0 for a single value."""
    if len(values) == 0:
        raise ValueError("cannot summarize an empty sample")
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), float(arr.min()), float(arr.max()), std


def ci_halfwidth(std: float, n: int, confidence: float = 0.95) -> float:
    """Two-sided Student-t half-width of the mean: t_{n-1} * std / sqrt(n)."""
    if n < 2:
        raise ValueError(f"confidence interval needs n >= 2, got {n}")
    if std < 0:
        raise ValueError(f"std must be non-negative, got {std}")
    return float(stats.t.ppf(0.5 + confidence / 2.0, n - 1) * std / math.sqrt(n))


def t_test(sample_a: Sequence[float], sample_b: Sequence[float]) -> TTestResult:
    """Two-sided Welch t-test with Welch-Satterthwaite degrees of freedom."""
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError(f"each sample needs >= 2 values, got {a.size} and {b.size}")
    va, vb = a.var(ddof=1) / a.size, b.var(ddof=1) / b.size
    if va + vb == 0.0:
        if a.mean() == b.mean():
            return TTestResult(0.0, float(a.size + b.size - 2), 1.0)
        return TTestResult(math.copysign(math.inf, a.mean() - b.mean()), float(a.size + b.size - 2), 0.0)
    dof = (va + vb) ** 2 / (va ** 2 / (a.size - 1) + vb ** 2 / (b.size - 1))
    t, p = stats.ttest_ind(a, b, equal_var=False)
    return TTestResult(float(t), float(dof), float(p))


def aggregate_runs(model: str, dev_f1: Sequence[float], test_f1: Sequence[float], n_parameters: int = 0) -> ScoreRow:
    """ScoreRow from per-run F1 fractions."""
    dev = [100.0 * x for x in dev_f1]
    test = [100.0 * x for x in test_f1]
    mean, lo, hi, std = summarize(test)
    dev_mean = summarize(dev)[0]
    ci = ci_halfwidth(std, len(test)) if len(test) > 1 else 0.0
    return ScoreRow(model=model, n_runs=len(test), dev_mean=dev_mean, test_mean=mean, ci_halfwidth=ci,
                    min=lo, max=hi, std=std, dev_test_gap=dev_mean - mean, n_parameters=n_parameters)


def _selection_rank(pairs: Sequence[ScorePair]) -> np.ndarray:
    """Rank 0 is the preferred pair: highest dev, then highest test, then lowest index."""
    order = sorted(range(len(pairs)), key=lambda i: (-pairs[i].dev_f1, -pairs[i].test_f1, i))
    rank = np.empty(len(pairs), dtype=np.int64)
    rank[order] = np.arange(len(pairs))
    return rank


def bootstrap_selection(pairs: Sequence[ScorePair], k: int = 5, reps: int = 1000,
                        seed: int = 0) -> BootstrapResult:
    """Best-of-k selection by dev score, estimated by resampling runs with replacement."""
    if not pairs:
        raise ValueError("bootstrap needs at least one score pair")
    if k < 1 or reps < 1:
        raise ValueError(f"k and reps must be >= 1, got k={k}, reps={reps}")
    rng = np.random.default_rng(seed)
    dev = np.array([p.dev_f1 for p in pairs])
    test = np.array([p.test_f1 for p in pairs])
    rank = _selection_rank(pairs)

    draws = rng.integers(0, len(pairs), size=(reps, k))
    chosen = draws[np.arange(reps), rank[draws].argmin(axis=1)]
    selected_test = test[chosen]
    std = float(selected_test.std(ddof=1)) if reps > 1 else 0.0
    ci = ci_halfwidth(std, reps) if reps > 1 else 0.0
    return BootstrapResult(float(selected_test.mean()), std, float(dev[chosen].mean()), ci, k, reps)


def exact_selection_expectation(pairs: Sequence[ScorePair], k: int) -> float:
    """Expected selected test score, enumerating all n**k equally likely draws."""
    if not pairs:
        raise ValueError("need at least one score pair")
    rank = _selection_rank(pairs)
    total = 0.0
    draws = list(itertools.product(range(len(pairs)), repeat=k))
    for draw in draws:
        chosen = min(draw, key=lambda i: rank[i])
        total += pairs[chosen].test_f1
    return total / len(draws)


def pairwise_t_tests(samples: Dict[str, Sequence[float]]) -> Dict[Tuple[str, str], Optional[TTestResult]]:
    """Welch test for every unordered model pair; None where a sample is too small."""
    results: Dict[Tuple[str, str], Optional[TTestResult]] = {}
    for a, b in itertools.combinations(sorted(samples), 2):
        try:
            results[(a, b)] = t_test(samples[a], samples[b])
        except ValueError:
            results[(a, b)] = None
    return results
