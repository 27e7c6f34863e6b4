#!/usr/bin/env python3
"""
DAG-GRU 事件检测命令行入口
DAG-GRU event detector: command-line entry point.

Subcommands generate synthetic corpora, train and evaluate single models, run
seed and random-split variance studies into a JSONL ledger, and build report
tables from that ledger.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

# Make flat top-level packages importable from anywhere
sys.path.insert(0, str(Path(__file__).parent))

from config.experiment_config import MODEL_PRESETS, ModelConfig, StudyConfig, TrainConfig, model_preset
from config.runtime_config import runtime_config
from corpus import (
    Corpus, CorpusSplit, ensure_embeddings, generate_synthetic, load_corpus, load_embeddings, load_manifest,
    ordered_split, random_split, save_corpus, save_embeddings, save_manifest, standard_split,
    synthetic_embeddings,
)
from evaluation.metrics import f1_by_domain, micro_f1
from evaluation.report import (
    STUDY_TABLES, bootstrap_frame, bootstrap_from_ledger, report_from_ledger, study_frame, write_frame,
)
from evaluation.studies import seed_study, split_study
from model.checkpoint import load_checkpoint
from training.trainer import train
from utils.json_logger import RunLedger
from utils.logging import setup_logging

logger = logging.getLogger(__name__)

LEDGER_NAME = "ledger.jsonl"


class UsageError(Exception):
    """Bad flags or an invalid flag combination."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default(model, name):
    return model.model_fields[name].default


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model")
    g.add_argument('--hidden-size', type=int, default=_default(ModelConfig, 'hidden_size'))
    g.add_argument('--edge-dim', type=int, default=_default(ModelConfig, 'edge_dim'))
    g.add_argument('--dropout', type=float, default=_default(ModelConfig, 'dropout_rate'))


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("training")
    g.add_argument('--lr0', type=float, default=_default(TrainConfig, 'lr0'), help='Initial learning rate')
    g.add_argument('--halve-every', type=int, default=_default(TrainConfig, 'halve_every'))
    g.add_argument('--max-epochs', type=int, default=_default(TrainConfig, 'max_epochs'))
    g.add_argument('--l2', type=float, default=_default(TrainConfig, 'l2'))
    g.add_argument('--patience', type=int, default=_default(TrainConfig, 'patience'))
    g.add_argument('--batch-size', type=int, default=_default(TrainConfig, 'batch_size'))
    g.add_argument('--seed', type=int, default=_default(TrainConfig, 'seed'), help='Initialization/shuffle seed')


def _add_corpus_flags(p: argparse.ArgumentParser, split_required: bool) -> None:
    p.add_argument('--corpus', type=Path, required=True, help='Corpus JSON-lines file')
    p.add_argument('--embeddings', type=Path, help='Embedding table (word TAB values); omit for inline vectors')
    split = p.add_mutually_exclusive_group(required=split_required)
    split.add_argument('--split', type=Path, help='Split manifest (JSON with train/dev/test id lists)')
    split.add_argument('--split-seed', type=int, help='Draw a random split with this seed')
    p.add_argument('--counts', type=int, nargs=3, metavar=('TRAIN', 'DEV', 'TEST'),
                   help='Documents per partition for --split-seed')


def _add_output_flags(p: argparse.ArgumentParser, ledger: bool = True) -> None:
    p.add_argument('--output-dir', type=Path, default=None,
                   help='Output directory (default: $DAGGRU_OUTPUT_DIR or ./daggru_output)')
    if ledger:
        p.add_argument('--ledger', type=Path, default=None, help=f'Run ledger (default: <output-dir>/{LEDGER_NAME})')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog='main_event_detector.py',
        description='DAG-GRU event detection with seed/split variance studies',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main_event_detector.py gen-synthetic --seed 7 --output-dir ./syn
  python main_event_detector.py train --corpus ./syn/corpus.jsonl --split ./syn/split.json --model dag-a
  python main_event_detector.py seed-study --corpus ./syn/corpus.jsonl --split ./syn/split.json --n-seeds 20
  python main_event_detector.py split-study --corpus ./syn/corpus.jsonl --n-splits 10 --counts 40 10 10
  python main_event_detector.py bootstrap --ledger ./daggru_output/ledger.jsonl --k 5 --reps 1000
  python main_event_detector.py report --ledger ./daggru_output/ledger.jsonl
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('gen-synthetic', help='Write a synthetic corpus, its embeddings and a split manifest')
    p.add_argument('--seed', type=int, default=1)
    p.add_argument('--n-docs', type=int, default=60)
    p.add_argument('--sentences-per-doc', type=int, default=4)
    p.add_argument('--vocab-size', type=int, default=50)
    p.add_argument('--n-event-types', type=int, default=3)
    p.add_argument('--k', type=int, default=16, help='Embedding size')
    p.add_argument('--trigger-rate', type=float, default=0.15)
    p.add_argument('--dependency-fraction', type=float, default=0.5)
    p.add_argument('--parse-noise', type=float, default=0.0, help='Relation-label noise in noisy domains')
    p.add_argument('--counts', type=int, nargs=3, default=[40, 10, 10], metavar=('TRAIN', 'DEV', 'TEST'))
    _add_output_flags(p, ledger=False)
    p.set_defaults(handler=cmd_gen_synthetic)

    p = sub.add_parser('train', help='Train one model and append its result to the ledger')
    _add_corpus_flags(p, split_required=True)
    p.add_argument('--model', choices=sorted(MODEL_PRESETS), default='dag-a')
    _add_model_flags(p)
    _add_train_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser('evaluate', help='Score a checkpoint on a corpus or one partition of it')
    p.add_argument('--checkpoint', type=Path, required=True)
    _add_corpus_flags(p, split_required=False)
    p.add_argument('--partition', choices=['train', 'dev', 'test'], default=None,
                   help='Partition to score (default: test); needs --split or --split-seed')
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser('seed-study', help='Train one model under seeds 1..n on one split')
    _add_corpus_flags(p, split_required=True)
    p.add_argument('--model', choices=sorted(MODEL_PRESETS), default='dag-a')
    p.add_argument('--n-seeds', type=int, default=_default(StudyConfig, 'n_seeds'))
    p.add_argument('--jobs', type=int, default=None, help='Concurrent runs (default: $DAGGRU_JOBS)')
    p.add_argument('--save-checkpoints', action='store_true')
    _add_model_flags(p)
    _add_train_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_seed_study)

    p = sub.add_parser('split-study', help='Train each model once on random splits 1..n')
    p.add_argument('--corpus', type=Path, required=True)
    p.add_argument('--embeddings', type=Path)
    p.add_argument('--n-splits', type=int, default=_default(StudyConfig, 'n_splits'))
    p.add_argument('--counts', type=int, nargs=3, default=list(_default(StudyConfig, 'counts')),
                   metavar=('TRAIN', 'DEV', 'TEST'))
    p.add_argument('--models', nargs='+', choices=sorted(MODEL_PRESETS), default=['dag-a', 'gru'])
    p.add_argument('--jobs', type=int, default=None)
    p.add_argument('--save-checkpoints', action='store_true')
    _add_model_flags(p)
    _add_train_flags(p)
    _add_output_flags(p)
    p.set_defaults(handler=cmd_split_study)

    p = sub.add_parser('bootstrap', help='Best-of-k selection by dev score over ledger runs')
    p.add_argument('--ledger', type=Path, required=True)
    p.add_argument('--k', type=int, default=_default(StudyConfig, 'bootstrap_k'))
    p.add_argument('--reps', type=int, default=_default(StudyConfig, 'bootstrap_reps'))
    p.add_argument('--bootstrap-seed', type=int, default=_default(StudyConfig, 'bootstrap_seed'))
    p.add_argument('--study', choices=['seed', 'split'], default='seed')
    _add_output_flags(p, ledger=False)
    p.set_defaults(handler=cmd_bootstrap)

    p = sub.add_parser('report', help='Study tables and pairwise p-values from a ledger')
    p.add_argument('--ledger', type=Path, required=True)
    _add_output_flags(p, ledger=False)
    p.set_defaults(handler=cmd_report)

    return parser


def _output_dir(args) -> Path:
    out = args.output_dir if getattr(args, 'output_dir', None) else runtime_config.get_output_dir()
    out.mkdir(parents=True, exist_ok=True)
    return out


def _ledger(args, out: Path) -> RunLedger:
    return RunLedger(args.ledger if args.ledger else out / LEDGER_NAME)


def _banner(command: str, **sections) -> None:
    resolved = {"command": command, "runtime": runtime_config.describe(), **sections}
    logger.info(f"Resolved configuration: {json.dumps(resolved, sort_keys=True, default=str)}")


def _load_corpus(args, label_vocab=None) -> Corpus:
    corpus = load_corpus(args.corpus, label_vocab)
    table = load_embeddings(args.embeddings) if args.embeddings else None
    return ensure_embeddings(corpus, table)


def _resolve_split(args, corpus: Corpus) -> Optional[CorpusSplit]:
    if args.split is not None:
        if args.counts is not None:
            raise UsageError("--counts only applies to --split-seed")
        return standard_split(corpus, load_manifest(args.split))
    if args.split_seed is not None:
        if args.counts is None:
            raise UsageError("--split-seed needs --counts TRAIN DEV TEST")
        return random_split(corpus, args.split_seed, args.counts)
    return None


def _model_config(name: str, args) -> ModelConfig:
    return model_preset(name, hidden_size=args.hidden_size, edge_dim=args.edge_dim, dropout_rate=args.dropout)


def _train_config(args) -> TrainConfig:
    return TrainConfig(lr0=args.lr0, halve_every=args.halve_every, max_epochs=args.max_epochs, l2=args.l2,
                       patience=args.patience, batch_size=args.batch_size, seed=args.seed)


def cmd_gen_synthetic(args) -> int:
    out = _output_dir(args)
    params = dict(seed=args.seed, n_docs=args.n_docs, sentences_per_doc=args.sentences_per_doc,
                  vocab_size=args.vocab_size, n_event_types=args.n_event_types, k=args.k,
                  trigger_rate=args.trigger_rate, dependency_fraction=args.dependency_fraction,
                  parse_noise=args.parse_noise)
    _banner('gen-synthetic', generator=params, counts=args.counts)
    corpus = generate_synthetic(**params)
    split = ordered_split(corpus, args.counts)
    paths = [
        save_corpus(corpus, out / 'corpus.jsonl'),
        save_embeddings(synthetic_embeddings(args.seed, args.vocab_size, args.n_event_types, args.k),
                        out / 'embeddings.txt'),
        save_manifest(split, out / 'split.json'),
    ]
    for path in paths:
        print(path)
    return 0


def cmd_train(args) -> int:
    out = _output_dir(args)
    corpus = _load_corpus(args)
    split = _resolve_split(args, corpus)
    model_config, train_config = _model_config(args.model, args), _train_config(args)
    _banner('train', model=args.model, model_config=model_config.model_dump(),
            train_config=train_config.model_dump(), split=split.split_id, split_counts=split.counts)
    result = train(corpus, split, model_config, train_config, args.model, "single", out / 'checkpoints')
    _ledger(args, out).append(result)
    print(f"{args.model} seed={result.seed} best_epoch={result.best_epoch} "
          f"dev_f1={result.dev_f1:.4f} test_f1={result.test_f1:.4f} checkpoint={result.checkpoint_path}")
    return 0


def cmd_evaluate(args) -> int:
    """评估已保存的检查点"""
    # 未给出划分时 --partition 没有意义
    if args.partition is not None and args.split is None and args.split_seed is None:
        raise UsageError('--partition needs --split or --split-seed')
    partition = args.partition or 'test'
    detector = load_checkpoint(args.checkpoint)
    corpus = _load_corpus(args, detector.label_vocab)
    if corpus.embedding_dim != detector.embedding_dim:
        raise ValueError(f"corpus embeddings have size {corpus.embedding_dim}, "
                         f"checkpoint expects {detector.embedding_dim}")
    split = _resolve_split(args, corpus)
    doc_ids = split.partition(partition) if split is not None else None
    _banner('evaluate', checkpoint=str(args.checkpoint), model_config=detector.config.model_dump(),
            partition=partition if split is not None else 'all')

    labelled = corpus.labelled_sentences(doc_ids)
    sentences = [s for _, s in labelled]
    predictions = detector.predict_many(sentences)
    gold = [s.gold_labels for s in sentences]
    prf = micro_f1(predictions, gold)
    print(f"precision={prf.precision:.4f} recall={prf.recall:.4f} f1={prf.f1:.4f} "
          f"tp={prf.true_positives} predicted={prf.predicted} gold={prf.gold}")
    for domain, domain_prf in f1_by_domain([d for d, _ in labelled], predictions, gold).items():
        print(f"  {domain}: precision={domain_prf.precision:.4f} recall={domain_prf.recall:.4f} "
              f"f1={domain_prf.f1:.4f}")
    return 0


def cmd_seed_study(args) -> int:
    out = _output_dir(args)
    corpus = _load_corpus(args)
    split = _resolve_split(args, corpus)
    model_config, train_config = _model_config(args.model, args), _train_config(args)
    _banner('seed-study', model=args.model, model_config=model_config.model_dump(),
            train_config=train_config.model_dump(), seeds=list(range(1, args.n_seeds + 1)),
            split=split.split_id, jobs=args.jobs)
    outcome = seed_study(corpus, split, model_config, train_config, args.n_seeds, args.model, args.jobs,
                         out / 'checkpoints' if args.save_checkpoints else None, _ledger(args, out))
    for path in write_frame(study_frame(outcome.table), out, STUDY_TABLES['seed']):
        print(path)
    return 0


def cmd_split_study(args) -> int:
    out = _output_dir(args)
    corpus = _load_corpus(args)
    configs: Dict[str, ModelConfig] = {name: _model_config(name, args) for name in dict.fromkeys(args.models)}
    train_config = _train_config(args)
    _banner('split-study', models={n: c.model_dump() for n, c in configs.items()},
            train_config=train_config.model_dump(), split_seeds=list(range(1, args.n_splits + 1)),
            counts=args.counts, jobs=args.jobs)
    outcome = split_study(corpus, configs, train_config, args.n_splits, args.counts, args.jobs,
                          out / 'checkpoints' if args.save_checkpoints else None, _ledger(args, out))
    for path in write_frame(study_frame(outcome.table), out, STUDY_TABLES['split']):
        print(path)
    return 0


def cmd_bootstrap(args) -> int:
    out = _output_dir(args)
    _banner('bootstrap', ledger=str(args.ledger), k=args.k, reps=args.reps, bootstrap_seed=args.bootstrap_seed,
            study=args.study)
    results = bootstrap_from_ledger(RunLedger(args.ledger), out, args.k, args.reps, args.bootstrap_seed, args.study)
    print(bootstrap_frame(results).to_string(index=False))
    return 0


def cmd_report(args) -> int:
    out = _output_dir(args)
    _banner('report', ledger=str(args.ledger))
    for paths in report_from_ledger(RunLedger(args.ledger), out).values():
        for path in paths:
            print(path)
    return 0


def _one_line(error: BaseException) -> str:
    return " ".join(str(error).split())


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch the subcommand and return the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: UsageError: {_one_line(e)}", file=sys.stderr)
        return 2
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else 0

    out = args.output_dir if getattr(args, 'output_dir', None) else runtime_config.get_output_dir()
    setup_logging(out / 'logs')

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except UsageError as e:
        print(f"error: UsageError: {_one_line(e)}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("error: KeyboardInterrupt: interrupted", file=sys.stderr)
        return 1
    except Exception as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {type(e).__name__}: {_one_line(e)}", file=sys.stderr)
        return 1


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
