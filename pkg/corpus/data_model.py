"""
Annotated corpus data model: documents, sentences, tokens and labels.

All objects are immutable once built; attaching embeddings produces a new
corpus.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

NIL = "NIL"


class LabelVocab:
    """Bijective label name <-> id mapping with NIL pinned at id 0."""

    def __init__(self, event_types: Iterable[str] = ()):
        self._names: List[str] = [NIL]
        self._ids: Dict[str, int] = {NIL: 0}
        for name in event_types:
            self.add(name)

    @classmethod
    def from_names(cls, names: Sequence[str]) -> "LabelVocab":
        """Rebuild a vocabulary from its full ordered name list (NIL first)."""
        if not names or names[0] != NIL:
            raise ValueError(f"label list must start with {NIL!r}")
        if len(set(names)) != len(names):
            raise ValueError("label list contains duplicates")
        return cls(names[1:])

    def add(self, name: str) -> int:
        if name not in self._ids:
            self._ids[name] = len(self._names)
            self._names.append(name)
        return self._ids[name]

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise KeyError(f"unknown label {name!r}")

    def name_of(self, label_id: int) -> str:
        return self._names[label_id]

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def __len__(self) -> int:
        return len(self._names)

    @property
    def names(self) -> List[str]:
        return list(self._names)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelVocab) and self._names == other._names

    def __repr__(self) -> str:
        return f"LabelVocab({self._names!r})"


@dataclass(frozen=True, eq=False)
class Token:
    surface: str
    gold_label: int
    embedding: Optional[np.ndarray] = None


@dataclass(frozen=True)
class DependencyEdge:
    head: int
    dependent: int
    label: str


@dataclass(frozen=True, eq=False)
class Sentence:
    tokens: Tuple[Token, ...]
    dep_edges: Tuple[DependencyEdge, ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def gold_labels(self) -> List[int]:
        return [t.gold_label for t in self.tokens]

    @property
    def surfaces(self) -> List[str]:
        return [t.surface for t in self.tokens]

    def embedding_matrix(self) -> np.ndarray:
        if any(t.embedding is None for t in self.tokens):
            raise ValueError("sentence has tokens without embeddings")
        return np.stack([t.embedding for t in self.tokens])


@dataclass(frozen=True, eq=False)
class Document:
    id: str
    domain: str
    sentences: Tuple[Sentence, ...]


@dataclass(frozen=True, eq=False)
class Corpus:
    documents: Tuple[Document, ...]
    label_vocab: LabelVocab
    embedding_dim: Optional[int] = None
    _index: Dict[str, Document] = field(default_factory=dict, repr=False, init=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {doc.id: doc for doc in self.documents})

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    @property
    def document_ids(self) -> List[str]:
        return [doc.id for doc in self.documents]

    def document(self, doc_id: str) -> Document:
        try:
            return self._index[doc_id]
        except KeyError:
            raise KeyError(f"document {doc_id!r} not in corpus")

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._index

    def sentences(self, doc_ids: Optional[Iterable[str]] = None) -> List[Sentence]:
        """Sentences of the given documents (all documents when ``None``), in order."""
        docs = self.documents if doc_ids is None else [self.document(d) for d in doc_ids]
        return [s for doc in docs for s in doc.sentences]

    def labelled_sentences(self, doc_ids: Optional[Iterable[str]] = None) -> List[Tuple[str, Sentence]]:
        """(domain, sentence) pairs, used for per-domain scoring."""
        docs = self.documents if doc_ids is None else [self.document(d) for d in doc_ids]
        return [(doc.domain, s) for doc in docs for s in doc.sentences]

    @property
    def surface_forms(self) -> List[str]:
        return sorted({t.surface for s in self.sentences() for t in s.tokens})

    def with_documents(self, documents: Sequence[Document], embedding_dim: Optional[int]) -> "Corpus":
        return replace(self, documents=tuple(documents), embedding_dim=embedding_dim)

    def to_records(self) -> List[dict]:
        """Plain JSON-compatible view in the corpus file layout."""
        records = []
        for doc in self.documents:
            sentences = []
            for sent in doc.sentences:
                tokens = []
                for tok in sent.tokens:
                    entry = {"surface": tok.surface, "label": self.label_vocab.name_of(tok.gold_label)}
                    if tok.embedding is not None:
                        entry["embedding"] = [float(x) for x in tok.embedding]
                    tokens.append(entry)
                deps = [[e.head, e.dependent, e.label] for e in sent.dep_edges]
                sentences.append({"tokens": tokens, "deps": deps})
            records.append({"id": doc.id, "domain": doc.domain, "sentences": sentences})
        return records
