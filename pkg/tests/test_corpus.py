import json
from collections import Counter

import numpy as np
import pytest

from corpus import (
    NIL, Corpus, CorpusFormatError, Document, EmbeddingTable, LabelVocab, MissingEmbeddingError, STANDARD_COUNTS,
    SplitError, SplitManifest, attach, build_corpus, ensure_embeddings, generate_synthetic, load_corpus,
    load_embeddings, load_manifest, ordered_split, random_split, save_corpus, save_embeddings, save_manifest,
    standard_split, synthetic_embeddings,
)
from corpus.loader import DocumentRecord
from corpus.synthetic import CUE_RELATION, ambiguous_word, cue_word
from evaluation.metrics import micro_f1


def _write_lines(path, docs):
    path.write_text("".join(json.dumps(d) + "\n" for d in docs), encoding="utf-8")
    return path


def _doc(doc_id="d1", embeddings=True, deps=((1, 0, "nsubj"),), labels=("NIL", "Attack", "NIL")):
    tokens = []
    for i, label in enumerate(labels):
        tok = {"surface": f"w{i}", "label": label}
        if embeddings:
            tok["embedding"] = [float(i), 0.5]
        tokens.append(tok)
    return {"id": doc_id, "domain": "nw", "sentences": [{"tokens": tokens, "deps": [list(d) for d in deps]}]}


def _small_corpus(n_docs):
    docs = tuple(Document(f"doc{i:03d}", "nw", ()) for i in range(n_docs))
    return Corpus(docs, LabelVocab())


def test_label_vocab_pins_nil():
    vocab = LabelVocab(["Attack", "Die"])
    assert vocab.id_of(NIL) == 0
    assert vocab.name_of(2) == "Die"
    assert LabelVocab.from_names(vocab.names) == vocab
    with pytest.raises(ValueError):
        LabelVocab.from_names(["Attack", NIL])


def test_load_single_document(tmp_path):
    corpus = load_corpus(_write_lines(tmp_path / "c.jsonl", [_doc()]))
    assert len(corpus) == 1
    assert corpus.embedding_dim == 2
    sentence = corpus.sentences()[0]
    assert sentence.gold_labels == [0, 1, 0]
    assert corpus.label_vocab.names == [NIL, "Attack"]
    assert sentence.dep_edges[0].head == 1 and sentence.dep_edges[0].dependent == 0


def test_embedding_length_mismatch_names_token(tmp_path):
    doc = _doc()
    doc["sentences"][0]["tokens"][2]["embedding"] = [1.0, 2.0, 3.0]
    with pytest.raises(CorpusFormatError, match="token 2"):
        load_corpus(_write_lines(tmp_path / "c.jsonl", [doc]))


def test_mixed_embedding_presence_rejected(tmp_path):
    doc = _doc()
    del doc["sentences"][0]["tokens"][1]["embedding"]
    with pytest.raises(CorpusFormatError, match="all tokens or none"):
        load_corpus(_write_lines(tmp_path / "c.jsonl", [doc]))


@pytest.mark.parametrize("deps, message", [
    (((3, 0, "nsubj"),), "dangling"),
    (((1, 1, "nsubj"),), "self-loop"),
    (((1, 0, ""),), "empty relation"),
])
def test_invalid_dependencies_rejected(tmp_path, deps, message):
    with pytest.raises(CorpusFormatError, match=message):
        load_corpus(_write_lines(tmp_path / "c.jsonl", [_doc(deps=deps)]))


def test_duplicate_id_and_malformed_line(tmp_path):
    with pytest.raises(CorpusFormatError, match="duplicate"):
        load_corpus(_write_lines(tmp_path / "dup.jsonl", [_doc("a"), _doc("a")]))

    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps(_doc("a")) + "\n{not json\n", encoding="utf-8")
    with pytest.raises(CorpusFormatError, match=":2:"):
        load_corpus(path)


def test_unknown_label_against_fixed_vocab(tmp_path):
    path = _write_lines(tmp_path / "c.jsonl", [_doc()])
    with pytest.raises(CorpusFormatError, match="unknown label 'Attack'"):
        load_corpus(path, LabelVocab(["Die"]))


def test_non_finite_embedding_rejected():
    record = DocumentRecord.model_validate(_doc())
    record.sentences[0].tokens[0].embedding = [float("nan"), 0.0]
    with pytest.raises(CorpusFormatError, match="non-finite"):
        build_corpus([(1, record)])


def _pick_sentence(records, rng):
    doc = records[rng.integers(len(records))]
    return doc["sentences"][rng.integers(len(doc["sentences"]))]


def _drop_surface(records, rng):
    sentence = _pick_sentence(records, rng)
    del sentence["tokens"][rng.integers(len(sentence["tokens"]))]["surface"]


def _drop_last_token(records, rng):
    # every synthetic tree spans its sentence, so the last index is on some arc
    _pick_sentence(records, rng)["tokens"].pop()


def _head_out_of_range(records, rng):
    sentence = _pick_sentence(records, rng)
    arc = sentence["deps"][rng.integers(len(sentence["deps"]))]
    arc[0] = int(rng.choice([-1 - rng.integers(3), len(sentence["tokens"]) + rng.integers(3)]))


def _unknown_label(records, rng):
    sentence = _pick_sentence(records, rng)
    sentence["tokens"][rng.integers(len(sentence["tokens"]))]["label"] = f"Unseen{rng.integers(100)}"


def _empty_sentence(records, rng):
    sentence = _pick_sentence(records, rng)
    sentence["tokens"] = []
    sentence["deps"] = []


def _duplicate_id(records, rng):
    first, second = rng.choice(len(records), size=2, replace=False)
    records[second]["id"] = records[first]["id"]


@pytest.mark.parametrize("mutate", [_drop_surface, _drop_last_token, _head_out_of_range, _unknown_label,
                                    _empty_sentence, _duplicate_id])
@pytest.mark.parametrize("draw", range(10))
def test_mutated_corpus_always_rejected(tmp_path, mutate, draw):
    corpus = generate_synthetic(seed=draw, n_docs=4, sentences_per_doc=2, vocab_size=8, n_event_types=2, k=3)
    path = save_corpus(corpus, tmp_path / "valid.jsonl")
    assert len(load_corpus(path, corpus.label_vocab)) == 4

    records = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
    mutate(records, np.random.default_rng([draw, 5]))
    with pytest.raises(CorpusFormatError):
        load_corpus(_write_lines(tmp_path / "mutated.jsonl", records), corpus.label_vocab)


def test_missing_corpus_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path / "absent.jsonl")


def test_save_load_round_trip(tmp_path, tiny_corpus):
    path = save_corpus(tiny_corpus, tmp_path / "syn.jsonl")
    loaded = load_corpus(path)
    assert loaded.to_records() == tiny_corpus.to_records()
    assert loaded.label_vocab == tiny_corpus.label_vocab
    assert loaded.embedding_dim == tiny_corpus.embedding_dim


def test_attach_table_vectors(tmp_path):
    corpus = load_corpus(_write_lines(tmp_path / "c.jsonl", [_doc(embeddings=False, labels=("NIL", "NIL"),
                                                                   deps=())]))
    table = EmbeddingTable({"w0": [1.0, 0.0], "w1": [0.0, 1.0]})
    attached, hits = attach(corpus, table)
    assert hits == 0
    tokens = attached.sentences()[0].tokens
    assert np.array_equal(tokens[0].embedding, [1.0, 0.0])
    assert np.array_equal(tokens[1].embedding, [0.0, 1.0])
    assert attached.embedding_dim == 2
    assert corpus.sentences()[0].tokens[0].embedding is None


def test_attach_fallback_counts_and_warns(tmp_path, caplog):
    corpus = load_corpus(_write_lines(tmp_path / "c.jsonl", [_doc(embeddings=False, deps=())]))
    table = EmbeddingTable({"w0": [1.0, 0.0], "<unk>": [9.0, 9.0]})
    with caplog.at_level("WARNING"):
        attached, hits = attach(corpus, table)
    assert hits == 2
    assert np.array_equal(attached.sentences()[0].tokens[2].embedding, [9.0, 9.0])
    assert "<unk>" in caplog.text
    assert "2 distinct words, first 'w1'" in caplog.text


def test_attach_missing_word_without_fallback(tmp_path):
    corpus = load_corpus(_write_lines(tmp_path / "c.jsonl", [_doc(embeddings=False, deps=())]))
    with pytest.raises(MissingEmbeddingError, match="2 word\\(s\\): 'w1', 'w2'"):
        attach(corpus, EmbeddingTable({"w0": [1.0, 0.0]}))



def test_ensure_embeddings_requires_vectors(tmp_path):
    corpus = load_corpus(_write_lines(tmp_path / "c.jsonl", [_doc(embeddings=False, deps=())]))
    with pytest.raises(ValueError, match="embedding file is required"):
        ensure_embeddings(corpus, None)


def test_embedding_file_round_trip_and_errors(tmp_path):
    table = EmbeddingTable({"a": [1.0, 0.25], "b": [0.0, -1.5]})
    loaded = load_embeddings(save_embeddings(table, tmp_path / "emb.txt"))
    assert np.array_equal(loaded.lookup("b")[0], [0.0, -1.5])
    assert loaded.dim == 2

    bad = tmp_path / "bad.txt"
    bad.write_text("a\t1 2\nb\t1 2 3\n", encoding="utf-8")
    with pytest.raises(ValueError, match="differs"):
        load_embeddings(bad)
    bad.write_text("a 1 2\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":1:"):
        load_embeddings(bad)


def test_synthetic_is_deterministic_per_seed():
    kwargs = dict(n_docs=6, sentences_per_doc=3, vocab_size=8, n_event_types=2, k=3)
    a = generate_synthetic(seed=4, **kwargs)
    b = generate_synthetic(seed=4, **kwargs)
    c = generate_synthetic(seed=5, **kwargs)
    assert a.to_records() == b.to_records()
    assert a.to_records() != c.to_records()


def test_synthetic_vectors_match_exported_table():
    corpus = generate_synthetic(seed=2, n_docs=3, sentences_per_doc=2, vocab_size=6, n_event_types=2, k=5)
    table = synthetic_embeddings(2, 6, 2, 5)
    assert "<unk>" in table
    for tok in corpus.sentences()[0].tokens:
        assert np.array_equal(tok.embedding, table.lookup(tok.surface)[0])


def test_synthetic_unambiguous_triggers_solved_by_lookup_table():
    corpus = generate_synthetic(seed=9, n_docs=40, sentences_per_doc=5, vocab_size=20, n_event_types=1, k=4,
                                dependency_fraction=0.0)
    table = {}
    for sentence in corpus.sentences():
        for tok in sentence.tokens:
            table.setdefault(tok.surface, tok.gold_label)
    predictions = [[table[t.surface] for t in s.tokens] for s in corpus.sentences()]
    gold = [s.gold_labels for s in corpus.sentences()]
    assert micro_f1(predictions, gold).f1 == 1.0


def test_synthetic_trigger_rate():
    corpus = generate_synthetic(seed=1, n_docs=250, sentences_per_doc=4, vocab_size=40, n_event_types=3, k=2,
                                trigger_rate=0.15)
    labels = [label for s in corpus.sentences() for label in s.gold_labels]
    assert len(corpus.sentences()) == 1000
    assert abs(np.mean(np.array(labels) > 0) - 0.15) < 0.02


def test_synthetic_ambiguous_words_follow_dependency_rule():
    corpus = generate_synthetic(seed=3, n_docs=60, sentences_per_doc=4, vocab_size=20, n_event_types=3, k=2,
                                trigger_rate=0.3, dependency_fraction=0.8)
    vocab = corpus.label_vocab
    seen_positive = seen_negative = 0
    for sentence in corpus.sentences():
        for i, tok in enumerate(sentence.tokens):
            if not tok.surface.startswith("amb"):
                continue
            e = int(tok.surface[3:])
            cued = any(edge.head == i and edge.label == CUE_RELATION
                       and sentence.tokens[edge.dependent].surface == cue_word(e)
                       for edge in sentence.dep_edges)
            expected = vocab.id_of(f"Event{e + 1:02d}") if cued else 0
            assert tok.gold_label == expected
            seen_positive += cued
            seen_negative += not cued
    assert seen_positive > 0 and seen_negative > 0
    assert ambiguous_word(0) == "amb0"


def test_synthetic_parses_are_projective_trees():
    corpus = generate_synthetic(seed=6, n_docs=20, sentences_per_doc=3, vocab_size=10, n_event_types=2, k=2)
    for sentence in corpus.sentences():
        n = len(sentence)
        heads = Counter(edge.dependent for edge in sentence.dep_edges)
        assert len(sentence.dep_edges) == n - 1
        assert all(count == 1 for count in heads.values())
        spans = [tuple(sorted((e.head, e.dependent))) for e in sentence.dep_edges]
        for a, b in spans:
            for c, d in spans:
                assert not (a < c < b < d), "crossing arcs"


def test_parse_noise_only_touches_noisy_domains():
    kwargs = dict(seed=8, n_docs=10, sentences_per_doc=3, vocab_size=10, n_event_types=2, k=2, domains=("nw",))
    clean = generate_synthetic(parse_noise=0.0, **kwargs)
    noisy_setting = generate_synthetic(parse_noise=1.0, **kwargs)
    assert clean.to_records() == noisy_setting.to_records()


@pytest.mark.parametrize("kwargs", [dict(n_docs=0), dict(k=0), dict(trigger_rate=1.5), dict(domains=())])
def test_synthetic_argument_validation(kwargs):
    args = dict(seed=1, n_docs=2, sentences_per_doc=1, vocab_size=5, n_event_types=1, k=2)
    args.update(kwargs)
    with pytest.raises(ValueError):
        generate_synthetic(**args)


def test_standard_split_honours_manifest(tmp_path):
    corpus = _small_corpus(6)
    manifest = SplitManifest(train=["doc000", "doc001", "doc002"], dev=["doc003"], test=["doc004", "doc005"])
    split = standard_split(corpus, manifest)
    assert split.counts == (3, 1, 2)
    assert load_manifest(save_manifest(split, tmp_path / "split.json")) == manifest


def test_standard_split_rejects_unknown_and_overlapping_ids():
    corpus = _small_corpus(4)
    with pytest.raises(SplitError, match="not in the corpus"):
        standard_split(corpus, SplitManifest(train=["doc000", "nope"]))
    with pytest.raises(SplitError, match="both"):
        standard_split(corpus, SplitManifest(train=["doc000"], dev=["doc000"]))


def test_random_split_standard_counts_over_many_seeds():
    corpus = _small_corpus(599)
    all_ids = set(corpus.document_ids)
    for seed in range(100):
        split = random_split(corpus, seed=seed, counts=STANDARD_COUNTS)
        train, dev, test = set(split.train), set(split.dev), set(split.test)
        assert split.counts == (529, 30, 40)
        assert (len(train), len(dev), len(test)) == (529, 30, 40)
        assert not (train & dev or train & test or dev & test)
        assert train | dev | test == all_ids


def test_random_split_deterministic_and_disjoint():
    corpus = _small_corpus(10)
    a, b = random_split(corpus, 7, (5, 2, 3)), random_split(corpus, 7, (5, 2, 3))
    assert a == b
    assert a.split_id == "random-7"
    assert not (set(a.train) & set(a.dev) or set(a.train) & set(a.test) or set(a.dev) & set(a.test))
    with pytest.raises(SplitError, match="exceed"):
        random_split(corpus, 1, (8, 2, 1))


def test_random_split_is_uniform():
    corpus = _small_corpus(10)
    n_seeds = 2000
    in_dev = Counter()
    for seed in range(n_seeds):
        in_dev.update(random_split(corpus, seed, (8, 1, 1)).dev)
    for doc_id in corpus.document_ids:
        assert abs(in_dev[doc_id] / n_seeds - 0.1) < 0.05


def test_ordered_split_takes_blocks():
    corpus = _small_corpus(5)
    split = ordered_split(corpus, (3, 1, 1))
    assert split.train == ("doc000", "doc001", "doc002")
    assert split.test == ("doc004",)
