"""
Precomputed word vectors.

File format: one record per line, the surface form, a tab, then the vector as
space-separated decimals. Vectors are fixed inputs and are never trained.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .data_model import Corpus, Document, Sentence, Token

logger = logging.getLogger(__name__)

UNKNOWN_TOKEN = "<unk>"


class MissingEmbeddingError(KeyError):
    """A surface form has no vector and the table has no unknown-token fallback."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "missing embedding"


class EmbeddingTable:
    """Surface form -> fixed vector lookup with an optional unknown-token fallback."""

    def __init__(self, vectors: Dict[str, np.ndarray], unknown_token: str = UNKNOWN_TOKEN):
        if not vectors:
            raise ValueError("embedding table is empty")
        dims = {len(v) for v in vectors.values()}
        if len(dims) != 1:
            raise ValueError(f"embedding table has mixed vector lengths {sorted(dims)}")
        self.vectors = {word: np.asarray(v, dtype=np.float64) for word, v in vectors.items()}
        for v in self.vectors.values():
            v.setflags(write=False)
        self.dim = dims.pop()
        self.unknown_token = unknown_token

    @property
    def fallback(self) -> Optional[np.ndarray]:
        return self.vectors.get(self.unknown_token)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def lookup(self, word: str) -> Tuple[np.ndarray, bool]:
        """Vector for ``word`` and whether the unknown-token fallback was used."""
        vector = self.vectors.get(word)
        if vector is not None:
            return vector, False
        if self.fallback is not None:
            return self.fallback, True
        raise MissingEmbeddingError(f"no embedding for word {word!r} and no {self.unknown_token!r} fallback")


def load_embeddings(path: Union[str, Path], unknown_token: str = UNKNOWN_TOKEN) -> EmbeddingTable:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"embedding file not found: {path}")
    vectors: Dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            word, sep, values = line.partition("\t")
            if not sep or not word:
                raise ValueError(f"{path}:{lineno}: expected '<word>\\t<values>'")
            try:
                vector = np.array(values.split(), dtype=np.float64)
            except ValueError as e:
                raise ValueError(f"{path}:{lineno}: non-numeric vector for {word!r}") from e
            if vector.size == 0 or not np.all(np.isfinite(vector)):
                raise ValueError(f"{path}:{lineno}: empty or non-finite vector for {word!r}")
            if vectors and vector.size != len(next(iter(vectors.values()))):
                raise ValueError(f"{path}:{lineno}: vector length {vector.size} differs from earlier rows")
            vectors[word] = vector
    table = EmbeddingTable(vectors, unknown_token)
    logger.info(f"Loaded {len(table)} vectors of size {table.dim} from {path}")
    return table


def save_embeddings(table: EmbeddingTable, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for word in sorted(table.vectors):
            values = " ".join(repr(float(x)) for x in table.vectors[word])
            f.write(f"{word}\t{values}\n")
    return path


def attach(corpus: Corpus, table: EmbeddingTable) -> Tuple[Corpus, int]:
    """Return a copy of ``corpus`` whose tokens carry the table's vectors.

    The second value counts tokens that received the unknown-token vector.
    Without a fallback vector, every uncovered word is named in one error.
    """
    missing_words = [w for w in corpus.surface_forms if w not in table.vectors]
    if missing_words and table.fallback is None:
        shown = ", ".join(repr(w) for w in missing_words[:5])
        more = f" and {len(missing_words) - 5} more" if len(missing_words) > 5 else ""
        raise MissingEmbeddingError(f"no embedding for {len(missing_words)} word(s): {shown}{more}; "
                                    f"no {table.unknown_token!r} fallback")

    fallback_hits = 0
    documents = []
    for doc in corpus.documents:
        sentences = []
        for sent in doc.sentences:
            tokens = []
            for tok in sent.tokens:
                vector, used_fallback = table.lookup(tok.surface)
                fallback_hits += used_fallback
                tokens.append(Token(tok.surface, tok.gold_label, vector))
            sentences.append(Sentence(tuple(tokens), sent.dep_edges))
        documents.append(Document(doc.id, doc.domain, tuple(sentences)))

    if fallback_hits:
        logger.warning(f"{fallback_hits} tokens ({len(missing_words)} distinct words, first {missing_words[0]!r}) "
                       f"used the {table.unknown_token!r} vector")
    return corpus.with_documents(documents, table.dim), fallback_hits


def ensure_embeddings(corpus: Corpus, table: Optional[EmbeddingTable]) -> Corpus:
    """Attach ``table`` when given; otherwise require inline vectors."""
    if table is not None:
        corpus, _ = attach(corpus, table)
    elif corpus.embedding_dim is None:
        raise ValueError("corpus has no inline embeddings; an embedding file is required")
    return corpus
