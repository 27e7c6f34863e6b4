"""
Deterministic synthetic event-detection corpora.

Each event type owns unambiguous trigger words, which are always labelled with
the type, and one ambiguous trigger word, which is labelled with the type only
when it governs the type's cue word through an ``nsubj`` dependency. Otherwise
the ambiguous word is NIL. Free-standing cue words and unattached ambiguous
words are sprinkled in as distractors, so resolving ambiguous triggers takes
the dependency neighbour rather than the surrounding word window.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from .data_model import Corpus, DependencyEdge, Document, LabelVocab, Sentence, Token
from .embeddings import UNKNOWN_TOKEN, EmbeddingTable

logger = logging.getLogger(__name__)

RELATIONS = ("nsubj", "dobj", "amod", "det", "prep", "advmod", "aux", "auxpass")
CUE_RELATION = "nsubj"
TRIGGERS_PER_TYPE = 2


def event_type_name(e: int) -> str:
    return f"Event{e + 1:02d}"


def trigger_word(e: int, j: int) -> str:
    return f"trig{e}_{j}"


def ambiguous_word(e: int) -> str:
    return f"amb{e}"


def cue_word(e: int) -> str:
    return f"cue{e}"


def filler_word(i: int) -> str:
    return f"w{i}"


def lexicon(vocab_size: int, n_event_types: int) -> List[str]:
    """Every surface form the generator can emit, sorted."""
    words = [filler_word(i) for i in range(vocab_size)]
    for e in range(n_event_types):
        words.extend(trigger_word(e, j) for j in range(TRIGGERS_PER_TYPE))
        words.extend([ambiguous_word(e), cue_word(e)])
    words.append(UNKNOWN_TOKEN)
    return sorted(words)


def projective_tree(n: int, rng: np.random.Generator) -> List[int]:
    """Head index per token (-1 for the root) of a uniformly built projective tree."""
    heads = [-1] * n

    def build(lo: int, hi: int, head: int) -> None:
        if lo > hi:
            return
        root = int(rng.integers(lo, hi + 1))
        heads[root] = head
        build(lo, root - 1, root)
        build(root + 1, hi, root)

    build(0, n - 1, -1)
    return heads


def _sentence(rng: np.random.Generator, vectors: dict, length: int, vocab_size: int, n_event_types: int,
              trigger_rate: float, dependency_fraction: float, noisy: bool, parse_noise: float) -> Sentence:
    heads = projective_tree(length, rng)
    relation = {d: RELATIONS[int(rng.integers(len(RELATIONS)))] for d in range(length) if heads[d] >= 0}
    children = [[d for d in range(length) if heads[d] == h] for h in range(length)]

    is_trigger = rng.random(length) < trigger_rate
    types = rng.integers(n_event_types, size=length)
    surface: List[Optional[str]] = [None] * length

    for i in range(length):
        if not is_trigger[i]:
            continue
        e = int(types[i])
        if rng.random() < dependency_fraction:
            free = [c for c in children[i] if not is_trigger[c] and surface[c] is None]
            if free:
                c = free[int(rng.integers(len(free)))]
                surface[i] = ambiguous_word(e)
                surface[c] = cue_word(e)
                relation[c] = CUE_RELATION
                continue
        surface[i] = trigger_word(e, int(rng.integers(TRIGGERS_PER_TYPE)))

    distractor_rate = trigger_rate * dependency_fraction
    for i in range(length):
        if surface[i] is None and rng.random() < distractor_rate:
            surface[i] = ambiguous_word(int(rng.integers(n_event_types)))
    for i in range(length):
        if surface[i] is not None:
            continue
        head_word = surface[heads[i]] if heads[i] >= 0 else None
        if rng.random() < distractor_rate and not (head_word or "").startswith("amb"):
            surface[i] = cue_word(int(rng.integers(n_event_types)))
        else:
            surface[i] = filler_word(int(rng.integers(vocab_size)))

    labels = []
    for i, word in enumerate(surface):
        label = 0
        if word.startswith("trig"):
            label = int(word[4:].split("_")[0]) + 1
        elif word.startswith("amb"):
            e = int(word[3:])
            if any(surface[c] == cue_word(e) and relation[c] == CUE_RELATION for c in children[i]):
                label = e + 1
        labels.append(label)

    if noisy and parse_noise > 0:
        for d in sorted(relation):
            if rng.random() < parse_noise:
                relation[d] = RELATIONS[int(rng.integers(len(RELATIONS)))]

    tokens = tuple(Token(word, labels[i], vectors[word]) for i, word in enumerate(surface))
    edges = tuple(DependencyEdge(heads[d], d, relation[d]) for d in range(length) if heads[d] >= 0)
    return Sentence(tokens, edges)


def synthetic_embeddings(seed: int, vocab_size: int, n_event_types: int, k: int) -> EmbeddingTable:
    """Fixed N(0, 1/k) vectors for the whole synthetic lexicon, including the unknown token."""
    words = lexicon(vocab_size, n_event_types)
    matrix = np.random.default_rng([seed, 1]).normal(0.0, 1.0 / np.sqrt(k), size=(len(words), k))
    return EmbeddingTable(dict(zip(words, matrix)))


def generate_synthetic(seed: int, n_docs: int, sentences_per_doc: int, vocab_size: int,
                       n_event_types: int, k: int, trigger_rate: float = 0.15,
                       dependency_fraction: float = 0.5, min_length: int = 5, max_length: int = 12,
                       domains: Sequence[str] = ("nw", "bc", "wl"), noisy_domains: Sequence[str] = ("wl",),
                       parse_noise: float = 0.0) -> Corpus:
    """Build a corpus whose labels follow from the word plus its dependency neighbourhood.

    The result is fully determined by the arguments. Embeddings are fixed
    random vectors per surface form, drawn from a stream independent of the
    text so changing corpus size does not change word vectors.
    """
    for name, value in (("n_docs", n_docs), ("sentences_per_doc", sentences_per_doc),
                        ("vocab_size", vocab_size), ("n_event_types", n_event_types), ("k", k),
                        ("min_length", min_length)):
        if value < 1:
            raise ValueError(f"{name} must be >= 1, got {value}")
    if max_length < min_length:
        raise ValueError(f"max_length {max_length} < min_length {min_length}")
    for name, value in (("trigger_rate", trigger_rate), ("dependency_fraction", dependency_fraction),
                        ("parse_noise", parse_noise)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1], got {value}")
    if not domains:
        raise ValueError("at least one domain tag is required")

    vectors = synthetic_embeddings(seed, vocab_size, n_event_types, k).vectors

    rng = np.random.default_rng([seed, 0])
    documents = []
    for d in range(n_docs):
        domain = domains[int(rng.integers(len(domains)))]
        noisy = domain in noisy_domains
        sentences = tuple(
            _sentence(rng, vectors, int(rng.integers(min_length, max_length + 1)), vocab_size,
                      n_event_types, trigger_rate, dependency_fraction, noisy, parse_noise)
            for _ in range(sentences_per_doc)
        )
        documents.append(Document(f"syn{seed}-{d:04d}", domain, sentences))

    vocab = LabelVocab(event_type_name(e) for e in range(n_event_types))
    logger.info(f"Generated synthetic corpus: seed={seed}, {n_docs} documents, "
                f"{n_docs * sentences_per_doc} sentences, {n_event_types} event types, k={k}")
    return Corpus(tuple(documents), vocab, k)
