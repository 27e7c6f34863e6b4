"""
Forward/backward DAGs over a sentence's temporal and dependency edges.

Every edge between tokens i < j is oriented twice: in the forward DAG node j
reads from i, in the backward DAG node i reads from j. Both DAGs are acyclic
because all sources lie strictly on one side of their target.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from corpus.data_model import Corpus, Sentence

TEMPORAL = "temporal"
DEPENDENCY = "dependency"
UNKNOWN = "unknown"

PARENT = "parent"
CHILD = "child"


@dataclass(frozen=True)
class EdgeType:
    kind: str
    label: Optional[str] = None
    source_role: Optional[str] = None

    def __post_init__(self):
        if self.kind == TEMPORAL and (self.label or self.source_role):
            raise ValueError("temporal edges carry no label")
        if self.kind == DEPENDENCY:
            if not self.label:
                raise ValueError("dependency edge type needs a relation label")
            if self.source_role not in (PARENT, CHILD):
                raise ValueError(f"source_role must be {PARENT!r} or {CHILD!r}")

    @property
    def name(self) -> str:
        if self.kind == TEMPORAL:
            return TEMPORAL
        if self.kind == UNKNOWN:
            return "UNKNOWN-DEP"
        return f"{self.label}-{self.source_role}"

    @classmethod
    def from_name(cls, name: str) -> "EdgeType":
        if name == TEMPORAL:
            return TEMPORAL_EDGE
        if name == "UNKNOWN-DEP":
            return UNKNOWN_EDGE
        label, _, role = name.rpartition("-")
        return cls(DEPENDENCY, label, role)


TEMPORAL_EDGE = EdgeType(TEMPORAL)
UNKNOWN_EDGE = EdgeType(UNKNOWN)
TEMPORAL_ID = 0
UNKNOWN_ID = 1


class EdgeTypeVocab:
    """Edge types indexed for embedding lookup; temporal is 0 and UNKNOWN-DEP is 1."""

    def __init__(self, types: Iterable[EdgeType] = ()):
        self._types: List[EdgeType] = [TEMPORAL_EDGE, UNKNOWN_EDGE]
        self._ids: Dict[EdgeType, int] = {TEMPORAL_EDGE: TEMPORAL_ID, UNKNOWN_EDGE: UNKNOWN_ID}
        for edge_type in types:
            self.add(edge_type)

    def add(self, edge_type: EdgeType) -> int:
        if edge_type not in self._ids:
            self._ids[edge_type] = len(self._types)
            self._types.append(edge_type)
        return self._ids[edge_type]

    def lookup(self, edge_type: EdgeType, extend: bool = False) -> int:
        if edge_type in self._ids:
            return self._ids[edge_type]
        return self.add(edge_type) if extend else UNKNOWN_ID

    def __len__(self) -> int:
        return len(self._types)

    def __getitem__(self, type_id: int) -> EdgeType:
        return self._types[type_id]

    @property
    def names(self) -> List[str]:
        return [t.name for t in self._types]

    @classmethod
    def from_names(cls, names: List[str]) -> "EdgeTypeVocab":
        if names[:2] != [TEMPORAL, "UNKNOWN-DEP"]:
            raise ValueError("edge vocabulary must start with temporal, UNKNOWN-DEP")
        return cls(EdgeType.from_name(n) for n in names[2:])

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeTypeVocab) and self._types == other._types


Incoming = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class DagGraph:
    """Per-token incoming (source index, edge-type id) lists for both directions."""
    n_tokens: int
    forward: Tuple[Incoming, ...]
    backward: Tuple[Incoming, ...]
    edge_vocab: EdgeTypeVocab

    def side(self, direction: str) -> Tuple[Incoming, ...]:
        if direction == "forward":
            return self.forward
        if direction == "backward":
            return self.backward
        raise ValueError(f"unknown direction {direction!r}")


def _dependency_types(sentence: Sentence):
    """(low, high, type seen from high, type seen from low) per dependency edge."""
    for edge in sentence.dep_edges:
        low, high = sorted((edge.head, edge.dependent))
        role_of_low = PARENT if low == edge.head else CHILD
        role_of_high = PARENT if high == edge.head else CHILD
        yield low, high, EdgeType(DEPENDENCY, edge.label, role_of_low), EdgeType(DEPENDENCY, edge.label, role_of_high)


def build_dags(sentence: Sentence, edge_vocab: EdgeTypeVocab, extend: bool = False) -> DagGraph:
    """Split the sentence graph into the forward and backward DAGs.

    Temporal edges come first in each incoming list, followed by dependency
    edges in sentence order. The edge type records the role of the source
    token. Unseen relation types map to UNKNOWN-DEP unless ``extend`` is set.
    """
    n = len(sentence)
    forward: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    backward: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
    for t in range(n):
        if t > 0:
            forward[t].append((t - 1, TEMPORAL_ID))
        if t < n - 1:
            backward[t].append((t + 1, TEMPORAL_ID))

    for low, high, type_from_low, type_from_high in _dependency_types(sentence):
        forward[high].append((low, edge_vocab.lookup(type_from_low, extend)))
        backward[low].append((high, edge_vocab.lookup(type_from_high, extend)))

    return DagGraph(n, tuple(map(tuple, forward)), tuple(map(tuple, backward)), edge_vocab)


def edge_type_vocab(corpus: Corpus, doc_ids: Optional[Iterable[str]] = None) -> EdgeTypeVocab:
    """Vocabulary over the given documents: temporal, UNKNOWN-DEP, then (label, role) sorted."""
    types = set()
    for sentence in corpus.sentences(doc_ids):
        for edge in sentence.dep_edges:
            types.add((edge.label, PARENT))
            types.add((edge.label, CHILD))
    return EdgeTypeVocab(EdgeType(DEPENDENCY, label, role) for label, role in sorted(types))
