import numpy as np
import pytest

import training.trainer as trainer_module
from config.experiment_config import ModelConfig, TrainConfig, model_preset
from corpus import generate_synthetic
from corpus.splits import CorpusSplit, ordered_split
from evaluation import t_test
from numeric import ShapeError, Tensor
from training import AdamState, DivergenceError, PartitionReadError, Trainer, adam_step, lr_at, train


def test_adam_zero_gradient_without_l2_keeps_parameters():
    params = {"w": Tensor([0.5, -1.0])}
    state = AdamState.zeros(params)
    adam_step(params, {"w": np.zeros(2)}, state, lr=0.1, l2=0.0)
    assert np.array_equal(params["w"].data, [0.5, -1.0])
    assert state.t == 1


def test_adam_single_step_by_hand():
    params = {"w": Tensor([2.0])}
    state = AdamState.zeros(params)
    g, lr, b1, b2, eps = 0.3, 0.01, 0.9, 0.999, 1e-8
    adam_step(params, {"w": np.array([g])}, state, lr, 0.0, b1, b2, eps)
    m_hat = (1 - b1) * g / (1 - b1)
    v_hat = (1 - b2) * g * g / (1 - b2)
    assert params["w"].data[0] == pytest.approx(2.0 - lr * m_hat / (np.sqrt(v_hat) + eps), abs=1e-12)

    adam_step(params, {"w": np.array([g])}, state, lr, 0.0, b1, b2, eps)
    m = b1 * (1 - b1) * g + (1 - b1) * g
    v = b2 * (1 - b2) * g * g + (1 - b2) * g * g
    second = lr * (m / (1 - b1 ** 2)) / (np.sqrt(v / (1 - b2 ** 2)) + eps)
    assert params["w"].data[0] == pytest.approx(2.0 - lr * m_hat / (np.sqrt(v_hat) + eps) - second, abs=1e-12)


def test_adam_l2_decays_parameters():
    params = {"w": Tensor([1.5, -2.0])}
    state = AdamState.zeros(params)
    before = np.abs(params["w"].data).copy()
    adam_step(params, {"w": np.zeros(2)}, state, lr=0.01, l2=0.0001)
    assert np.all(np.abs(params["w"].data) < before)


def test_adam_shape_mismatch():
    params = {"w": Tensor([1.0, 2.0])}
    with pytest.raises(ShapeError, match="w"):
        adam_step(params, {"w": np.zeros(3)}, AdamState.zeros(params), lr=0.1, l2=0.0)


def test_learning_rate_schedule():
    config = TrainConfig()
    assert lr_at(1, config) == 0.0005
    assert lr_at(5, config) == 0.0005
    assert lr_at(6, config) == 0.00025
    assert lr_at(30, config) == pytest.approx(1.5625e-5, rel=1e-12)
    with pytest.raises(ValueError):
        lr_at(0, config)


def test_training_is_deterministic(tiny_corpus, tiny_split, tiny_config, quick_train_config):
    first = train(tiny_corpus, tiny_split, tiny_config, quick_train_config)
    second = train(tiny_corpus, tiny_split, tiny_config, quick_train_config)
    assert first.model_dump() == second.model_dump()
    assert len(first.loss_trace) == first.epochs_run
    assert 1 <= first.best_epoch <= first.epochs_run
    assert 0.0 <= first.test_f1 <= 1.0


def test_dropout_run_is_deterministic(tiny_corpus, tiny_split, quick_train_config):
    config = ModelConfig(hidden_size=3, edge_dim=2, dropout_rate=0.5, variant="B")
    first = train(tiny_corpus, tiny_split, config, quick_train_config)
    second = train(tiny_corpus, tiny_split, config, quick_train_config)
    assert first.loss_trace == second.loss_trace


def test_patience_stops_when_nothing_can_improve(monkeypatch, tiny_corpus, tiny_split, tiny_config):
    monkeypatch.setattr(trainer_module, "lr_at", lambda epoch, config: 0.0)
    config = TrainConfig(max_epochs=10, patience=1, batch_size=4, seed=3)
    result = train(tiny_corpus, tiny_split, tiny_config, config)
    assert result.epochs_run == 2
    assert result.best_epoch == 1
    assert result.dev_f1_trace[0] == result.dev_f1_trace[1]


def test_test_partition_read_once_after_selection(tiny_corpus, tiny_split, tiny_config, quick_train_config):
    runner = Trainer(tiny_corpus, tiny_split, tiny_config, quick_train_config)
    result = runner.train()
    assert runner.partition_reads["test"] == 1
    assert runner.partition_reads["dev"] == result.epochs_run

    with pytest.raises(PartitionReadError, match="already read"):
        runner._score("test")
    assert runner.partition_reads["test"] == 1


def test_checkpoint_written_when_requested(tmp_path, tiny_corpus, tiny_split, tiny_config, quick_train_config):
    from model import load_checkpoint

    result = train(tiny_corpus, tiny_split, tiny_config, quick_train_config, model_name="dag-a",
                   checkpoint_dir=tmp_path)
    assert result.checkpoint_path.endswith("dag-a_tiny_seed1.npz")
    detector = load_checkpoint(result.checkpoint_path)
    assert detector.parameter_count() == result.n_parameters


def test_empty_train_partition_rejected(tiny_corpus, tiny_config, quick_train_config):
    ids = tiny_corpus.document_ids
    split = CorpusSplit("empty", (), tuple(ids[:2]), tuple(ids[2:4]))
    with pytest.raises(ValueError, match="empty train partition"):
        train(tiny_corpus, split, tiny_config, quick_train_config)


def test_missing_embeddings_rejected(tiny_corpus, tiny_split, tiny_config, quick_train_config):
    bare = tiny_corpus.with_documents(tiny_corpus.documents, None)
    with pytest.raises(ValueError, match="embeddings"):
        Trainer(bare, tiny_split, tiny_config, quick_train_config)


def test_divergence_reports_seed_and_epoch(monkeypatch, tiny_corpus, tiny_split, tiny_config, quick_train_config):
    def poisoned_step(params, grads, state, lr, *args):
        next(iter(params.values())).data[...] = np.inf
        return state

    monkeypatch.setattr(trainer_module, "adam_step", poisoned_step)
    with pytest.raises(DivergenceError) as err:
        train(tiny_corpus, tiny_split, tiny_config, quick_train_config)
    assert err.value.seed == 1 and err.value.epoch == 1
    assert "seed 1" in str(err.value)


def test_divergence_error_survives_pickling():
    import pickle

    error = pickle.loads(pickle.dumps(DivergenceError(4, 7, "loss inf")))
    assert (error.seed, error.epoch, error.detail) == (4, 7, "loss inf")


@pytest.mark.slow
def test_overfits_a_small_corpus():
    corpus = generate_synthetic(seed=2, n_docs=10, sentences_per_doc=1, vocab_size=6, n_event_types=2, k=8,
                                trigger_rate=0.3, dependency_fraction=0.0, min_length=4, max_length=6)
    ids = tuple(corpus.document_ids)
    split = CorpusSplit("overfit", ids, ids, ids)
    config = ModelConfig(hidden_size=8, edge_dim=4, dropout_rate=0.0)
    result = train(corpus, split, config, TrainConfig(lr0=0.05, halve_every=200, max_epochs=200, patience=200,
                                                      l2=0.0, batch_size=10, seed=1))
    assert result.dev_f1 == 1.0
    assert result.test_f1 == 1.0


@pytest.mark.slow
def test_loss_decreases_for_most_seeds():
    corpus = generate_synthetic(seed=4, n_docs=20, sentences_per_doc=2, vocab_size=10, n_event_types=2, k=8)
    ids = tuple(corpus.document_ids)
    split = CorpusSplit("learn", ids[:16], ids[16:18], ids[18:])
    config = ModelConfig(hidden_size=6, edge_dim=3, dropout_rate=0.0)
    decreasing = 0
    for seed in range(1, 11):
        result = train(corpus, split, config, TrainConfig(lr0=0.01, max_epochs=5, patience=5, seed=seed))
        decreasing += result.loss_trace[-1] < result.loss_trace[0]
    assert decreasing >= 9


@pytest.mark.slow
def test_dependency_attention_outranks_plain_bigru():
    # most triggers are ambiguous words whose label depends on an nsubj cue child
    corpus = generate_synthetic(seed=7, n_docs=60, sentences_per_doc=4, vocab_size=50, n_event_types=3, k=16,
                                dependency_fraction=0.8)
    split = ordered_split(corpus, (40, 10, 10))
    test_sentences = corpus.sentences(split.test)
    scores = {"dag-a": [], "gru": []}
    ambiguous_hits, ambiguous_total = 0, 0
    for name in scores:
        for seed in range(1, 6):
            runner = Trainer(corpus, split, model_preset(name, hidden_size=8), TrainConfig(max_epochs=12, seed=seed),
                             model_name=name)
            scores[name].append(runner.train().test_f1)
            if name == "dag-a":
                for sentence, predicted in zip(test_sentences, runner.detector.predict_many(test_sentences)):
                    for token, label in zip(sentence.tokens, predicted):
                        if token.surface.startswith("amb"):
                            ambiguous_total += 1
                            ambiguous_hits += int(label == token.gold_label)

    assert ambiguous_total > 0
    assert ambiguous_hits / ambiguous_total > 0.85
    assert np.mean(scores["dag-a"]) > np.mean(scores["gru"])
    assert t_test(scores["dag-a"], scores["gru"]).p < 0.05
