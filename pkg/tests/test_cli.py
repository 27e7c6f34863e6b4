import re

import pandas as pd
import pytest

from main_event_detector import run
from utils import RunLedger

from conftest import make_run

SMALL_CORPUS = ["--seed", "3", "--n-docs", "12", "--sentences-per-doc", "2", "--vocab-size", "8",
                "--n-event-types", "2", "--k", "4", "--counts", "8", "2", "2"]
SMALL_MODEL = ["--hidden-size", "3", "--edge-dim", "2", "--dropout", "0", "--max-epochs", "2", "--batch-size", "4"]
LOG_LINE = re.compile(r"^\d{4}-\d{2}-\d{2} [\d:,]+ - \S+ - (DEBUG|INFO|WARNING|ERROR|CRITICAL) - ")


@pytest.fixture(autouse=True)
def _isolated(restore_logging, monkeypatch, tmp_path):
    monkeypatch.setenv("DAGGRU_OUTPUT_DIR", str(tmp_path / "default_out"))
    monkeypatch.setenv("DAGGRU_JOBS", "1")


def _cli(capsys, *argv):
    """Exit code, printed results (console log records removed) and non-empty stderr lines."""
    code = run([str(a) for a in argv])
    captured = capsys.readouterr()
    results = "".join(line for line in captured.out.splitlines(keepends=True) if not LOG_LINE.match(line))
    err_lines = [line for line in captured.err.splitlines() if line.strip()]
    return code, results, err_lines


@pytest.fixture
def synthetic_files(tmp_path, capsys):
    out = tmp_path / "syn"
    code, stdout, _ = _cli(capsys, "gen-synthetic", *SMALL_CORPUS, "--output-dir", out)
    assert code == 0
    return {"corpus": out / "corpus.jsonl", "embeddings": out / "embeddings.txt", "split": out / "split.json"}


def _corpus_flags(files):
    return ["--corpus", files["corpus"], "--embeddings", files["embeddings"], "--split", files["split"]]


def test_gen_synthetic_is_byte_identical(tmp_path, capsys):
    for name in ("a", "b"):
        code, stdout, _ = _cli(capsys, "gen-synthetic", *SMALL_CORPUS, "--output-dir", tmp_path / name)
        assert code == 0
        assert len(stdout.splitlines()) == 3
    for filename in ("corpus.jsonl", "embeddings.txt", "split.json"):
        assert (tmp_path / "a" / filename).read_bytes() == (tmp_path / "b" / filename).read_bytes()


def test_output_dir_defaults_to_environment(tmp_path, capsys):
    code, _, _ = _cli(capsys, "gen-synthetic", *SMALL_CORPUS)
    assert code == 0
    assert (tmp_path / "default_out" / "corpus.jsonl").exists()
    assert any((tmp_path / "default_out" / "logs").glob("*.log"))


def test_seed_study_writes_ledger_and_table(tmp_path, capsys, synthetic_files):
    ledgers = []
    for name in ("first", "second"):
        out = tmp_path / name
        code, stdout, _ = _cli(capsys, "seed-study", *_corpus_flags(synthetic_files), "--n-seeds", 3,
                               *SMALL_MODEL, "--output-dir", out)
        assert code == 0
        assert "seed_study.csv" in stdout
        ledgers.append((out / "ledger.jsonl").read_bytes())

    runs = RunLedger(tmp_path / "first" / "ledger.jsonl").read()
    assert [r.seed for r in runs] == [1, 2, 3]
    assert all(r.study == "seed" and r.checkpoint_path is None for r in runs)
    assert ledgers[0] == ledgers[1]
    table = pd.read_csv(tmp_path / "first" / "seed_study.csv")
    assert table["Model"].tolist() == ["DAG-GRU A"]


def test_train_then_evaluate(tmp_path, capsys, synthetic_files):
    out = tmp_path / "run"
    code, stdout, _ = _cli(capsys, "train", *_corpus_flags(synthetic_files), "--model", "dag-b", *SMALL_MODEL,
                           "--output-dir", out)
    assert code == 0
    assert stdout.startswith("dag-b seed=1")
    checkpoint = out / "checkpoints" / "dag-b_standard_seed1.npz"
    assert checkpoint.exists()
    assert len(RunLedger(out / "ledger.jsonl")) == 1

    code, stdout, _ = _cli(capsys, "evaluate", "--checkpoint", checkpoint, *_corpus_flags(synthetic_files),
                           "--partition", "dev")
    assert code == 0
    assert stdout.startswith("precision=")


def test_bootstrap_and_report_from_ledger(tmp_path, capsys):
    ledger = RunLedger(tmp_path / "ledger.jsonl")
    for seed in range(1, 21):
        ledger.append(make_run("dag-a", seed=seed, dev=0.6 + 0.01 * (seed % 7), test=0.6 + 0.005 * (seed % 5)))
        ledger.append(make_run("gru", seed=seed, dev=0.6, test=0.58 + 0.004 * (seed % 3)))

    code, stdout, _ = _cli(capsys, "bootstrap", "--ledger", ledger.path, "--k", 5, "--reps", 200,
                           "--output-dir", tmp_path / "boot")
    assert code == 0
    assert "DAG-GRU A" in stdout and "GRU" in stdout
    assert (tmp_path / "boot" / "bootstrap_selection.csv").exists()

    code, stdout, _ = _cli(capsys, "report", "--ledger", ledger.path, "--output-dir", tmp_path / "rep")
    assert code == 0
    for stem in ("seed_study", "seed_study_details", "seed_study_pvalues"):
        assert (tmp_path / "rep" / f"{stem}.csv").exists()
        assert (tmp_path / "rep" / f"{stem}.txt").exists()


@pytest.mark.parametrize("argv", [
    [],
    ["seed-study", "--corpus", "c.jsonl"],
    ["train", "--corpus", "c.jsonl", "--split", "s.json", "--model", "cnn"],
    ["report"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = _cli(capsys, *argv)
    assert code == 2
    assert len(err) == 1 and err[0].startswith("error: UsageError:")


def test_invalid_split_flag_combinations(capsys, synthetic_files):
    flags = ["--corpus", synthetic_files["corpus"], "--embeddings", synthetic_files["embeddings"]]
    code, _, err = _cli(capsys, "train", *flags, "--split", synthetic_files["split"], "--counts", 8, 2, 2)
    assert code == 2 and "--counts" in err[-1]
    code, _, err = _cli(capsys, "train", *flags, "--split-seed", 4)
    assert code == 2 and err[-1].startswith("error: UsageError:")


def test_missing_corpus_exits_1(tmp_path, capsys):
    code, _, err = _cli(capsys, "train", "--corpus", tmp_path / "absent.jsonl", "--split", tmp_path / "s.json",
                        "--output-dir", tmp_path / "out")
    assert code == 1
    assert len(err) == 1
    assert err[0].startswith("error: FileNotFoundError: corpus file not found")


def test_help_exits_0(capsys):
    code, stdout, _ = _cli(capsys, "--help")
    assert code == 0
    assert "seed-study" in stdout


def test_failed_run_writes_only_the_error_line_to_stderr(tmp_path, capsys):
    ledger = RunLedger(tmp_path / "single.jsonl")
    ledger.append(make_run(study="single"))
    code = run(["bootstrap", "--ledger", str(ledger.path), "--output-dir", str(tmp_path / "out")])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.err.splitlines() == [
        f"error: ValueError: ledger {ledger.path} holds no seed-study runs to resample"]
    # the configuration banner was logged before the failure, on stdout
    assert any(LOG_LINE.match(line) and "Resolved configuration" in line for line in captured.out.splitlines())


def test_partition_without_split_is_a_usage_error(tmp_path, capsys, synthetic_files):
    out = tmp_path / "run"
    code, _, _ = _cli(capsys, "train", *_corpus_flags(synthetic_files), *SMALL_MODEL, "--output-dir", out)
    assert code == 0
    checkpoint = out / "checkpoints" / "dag-a_standard_seed1.npz"

    code, _, err = _cli(capsys, "evaluate", "--checkpoint", checkpoint, "--corpus", synthetic_files["corpus"],
                        "--embeddings", synthetic_files["embeddings"], "--partition", "dev")
    assert code == 2
    assert err == ["error: UsageError: --partition needs --split or --split-seed"]

    code, stdout, _ = _cli(capsys, "evaluate", "--checkpoint", checkpoint, "--corpus", synthetic_files["corpus"],
                           "--embeddings", synthetic_files["embeddings"])
    assert code == 0
    assert stdout.startswith("precision=")
