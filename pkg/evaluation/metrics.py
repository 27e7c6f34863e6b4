"""
Token-level micro precision/recall/F1 over non-NIL labels.

A prediction counts as a true positive when it equals a non-NIL gold label on
the same token. Span-level trigger matching is not modelled: every token
carries exactly one label.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

NIL_ID = 0


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float
    true_positives: int = 0
    predicted: int = 0
    gold: int = 0


def _flatten(labels) -> List[int]:
    if len(labels) and hasattr(labels[0], "__len__"):
        return [int(x) for seq in labels for x in seq]
    return [int(x) for x in labels]


def prf_from_counts(tp: int, predicted: int, gold: int) -> PRF:
    precision = tp / predicted if predicted else 0.0
    recall = tp / gold if gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRF(precision, recall, f1, tp, predicted, gold)


def micro_counts(predictions: Sequence[int], gold: Sequence[int]) -> Tuple[int, int, int]:
    if len(predictions) != len(gold):
        raise ValueError(f"prediction/gold length mismatch: {len(predictions)} vs {len(gold)}")
    tp = sum(1 for p, g in zip(predictions, gold) if p == g != NIL_ID)
    predicted = sum(1 for p in predictions if p != NIL_ID)
    actual = sum(1 for g in gold if g != NIL_ID)
    return tp, predicted, actual


def micro_f1(predictions, gold) -> PRF:
    """Micro P/R/F1; accepts flat label lists or per-sentence lists of lists."""
    return prf_from_counts(*micro_counts(_flatten(predictions), _flatten(gold)))


def f1_by_domain(domains: Iterable[str], predictions: Sequence[Sequence[int]],
                 gold: Sequence[Sequence[int]]) -> Dict[str, PRF]:
    """Micro scores per document domain tag, one domain entry per sentence."""
    domains = list(domains)
    if not len(domains) == len(predictions) == len(gold):
        raise ValueError("domains, predictions and gold must have one entry per sentence")
    totals = defaultdict(lambda: [0, 0, 0])
    for domain, pred, ref in zip(domains, predictions, gold):
        counts = micro_counts(list(pred), list(ref))
        for i in range(3):
            totals[domain][i] += counts[i]
    return {domain: prf_from_counts(*totals[domain]) for domain in sorted(totals)}
