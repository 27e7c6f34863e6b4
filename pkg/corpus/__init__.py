"""
Corpus data model, file ingestion, synthetic generation and document splits.
"""

from .data_model import NIL, Corpus, DependencyEdge, Document, LabelVocab, Sentence, Token
from .embeddings import (
    UNKNOWN_TOKEN, EmbeddingTable, MissingEmbeddingError, attach, ensure_embeddings,
    load_embeddings, save_embeddings,
)
from .loader import CorpusFormatError, build_corpus, load_corpus, save_corpus
from .splits import (
    STANDARD_COUNTS, CorpusSplit, SplitError, SplitManifest, load_manifest, ordered_split,
    random_split, save_manifest, standard_split,
)
from .synthetic import generate_synthetic, synthetic_embeddings

__all__ = [
    'NIL', 'Corpus', 'DependencyEdge', 'Document', 'LabelVocab', 'Sentence', 'Token',
    'UNKNOWN_TOKEN', 'EmbeddingTable', 'MissingEmbeddingError', 'attach', 'ensure_embeddings',
    'load_embeddings', 'save_embeddings',
    'CorpusFormatError', 'build_corpus', 'load_corpus', 'save_corpus',
    'STANDARD_COUNTS', 'CorpusSplit', 'SplitError', 'SplitManifest', 'load_manifest',
    'ordered_split', 'random_split', 'save_manifest', 'standard_split',
    'generate_synthetic', 'synthetic_embeddings',
]
