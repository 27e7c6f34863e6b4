"""
语料读写模块
JSON-lines corpus reader and writer.

One document per line::

    {"id": ..., "domain": ..., "sentences": [
        {"tokens": [{"surface": ..., "label": ..., "embedding": [...]?}],
         "deps": [[head, dependent, relation], ...]}]}

Token indices are 0-based and labels are "NIL" or an event-type name. The
optional per-token ``embedding`` is present when vectors were attached before
saving.
"""

import json
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from .data_model import NIL, Corpus, DependencyEdge, Document, LabelVocab, Sentence, Token

logger = logging.getLogger(__name__)


class CorpusFormatError(ValueError):
    """A corpus file violates the document format or a data-model invariant."""


class TokenRecord(BaseModel):
    surface: str = Field(..., min_length=1, description="Token text")
    label: str = Field(NIL, min_length=1, description="NIL or an event-type name")
    embedding: Optional[List[float]] = Field(None, description="Fixed input vector, if attached")


class SentenceRecord(BaseModel):
    tokens: List[TokenRecord] = Field(..., min_length=1)
    deps: List[Tuple[int, int, str]] = Field(default_factory=list, description="[head, dependent, relation]")


class DocumentRecord(BaseModel):
    id: str = Field(..., min_length=1)
    domain: str = Field("", description="Free-text genre tag such as 'nw' or 'wl'")
    sentences: List[SentenceRecord] = Field(default_factory=list)


def _summarize(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return f"{first.get('msg', 'invalid value')} at {location or 'document'} ({error.error_count()} error(s))"


def _read_records(path: Path) -> List[Tuple[int, DocumentRecord]]:
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                records.append((lineno, DocumentRecord.model_validate_json(line)))
            except ValidationError as e:
                raise CorpusFormatError(f"{path}:{lineno}: malformed document: {_summarize(e)}") from e
    return records


def _build_vocab(records: List[Tuple[int, DocumentRecord]]) -> LabelVocab:
    event_types = {tok.label for _, doc in records for sent in doc.sentences
                   for tok in sent.tokens if tok.label != NIL}
    return LabelVocab(sorted(event_types))


def build_corpus(records: List[Tuple[int, DocumentRecord]], label_vocab: Optional[LabelVocab] = None,
                 source: str = "<memory>") -> Corpus:
    """Validate parsed records and convert them to the immutable data model."""
    vocab = label_vocab if label_vocab is not None else _build_vocab(records)
    seen_ids = set()
    k: Optional[int] = None
    with_vectors = None
    documents = []

    for lineno, doc in records:
        where = f"{source}:{lineno}: document {doc.id!r}"
        # 文档 id 必须唯一
        if doc.id in seen_ids:
            raise CorpusFormatError(f"{where}: duplicate document id")
        seen_ids.add(doc.id)

        sentences = []
        for s_idx, sent in enumerate(doc.sentences):
            n = len(sent.tokens)
            tokens = []
            for t_idx, tok in enumerate(sent.tokens):
                position = f"{where}, sentence {s_idx}, token {t_idx} ({tok.surface!r})"
                if tok.label not in vocab:
                    raise CorpusFormatError(f"{position}: unknown label {tok.label!r}")
                has_vector = tok.embedding is not None
                if with_vectors is None:
                    with_vectors = has_vector
                elif with_vectors != has_vector:
                    raise CorpusFormatError(f"{position}: embeddings must be given for all tokens or none")
                vector = None
                if has_vector:
                    if k is None:
                        k = len(tok.embedding)
                        if k == 0:
                            raise CorpusFormatError(f"{position}: empty embedding")
                    if len(tok.embedding) != k:
                        raise CorpusFormatError(
                            f"{position}: embedding length {len(tok.embedding)} != corpus k={k}")
                    vector = np.asarray(tok.embedding, dtype=np.float64)
                    if not np.all(np.isfinite(vector)):
                        raise CorpusFormatError(f"{position}: non-finite embedding value")
                    vector.setflags(write=False)
                tokens.append(Token(tok.surface, vocab.id_of(tok.label), vector))

            # 依存弧检查
            edges = []
            for e_idx, (head, dependent, relation) in enumerate(sent.deps):
                position = f"{where}, sentence {s_idx}, dependency {e_idx}"
                if not (0 <= head < n and 0 <= dependent < n):
                    raise CorpusFormatError(
                        f"{position}: dangling index ({head}, {dependent}) for {n} tokens")
                if head == dependent:
                    raise CorpusFormatError(f"{position}: self-loop on token {head}")
                if not relation:
                    raise CorpusFormatError(f"{position}: empty relation label")
                edges.append(DependencyEdge(head, dependent, relation))
            sentences.append(Sentence(tuple(tokens), tuple(edges)))

        documents.append(Document(doc.id, doc.domain, tuple(sentences)))

    return Corpus(tuple(documents), vocab, k)


def load_corpus(path: Union[str, Path], label_vocab: Optional[LabelVocab] = None) -> Corpus:
    """Read and validate a corpus file.

    When ``label_vocab`` is given, labels outside it are rejected; otherwise
    the vocabulary is NIL followed by the event types sorted by name.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"corpus file not found: {path}")
    corpus = build_corpus(_read_records(path), label_vocab, source=str(path))
    logger.info(f"Loaded {len(corpus)} documents, {len(corpus.sentences())} sentences "
                f"and {len(corpus.label_vocab) - 1} event types from {path}")
    return corpus


def save_corpus(corpus: Corpus, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for record in corpus.to_records():
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path
