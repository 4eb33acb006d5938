"""Command-line entry point.

Subcommand groups: ``corruptor`` (train/generate the error-injection model),
``dataset`` (label and filter corruptions), ``detector`` (train/evaluate the
BiLSTM tagger) and ``turing`` (serve the human evaluation session). Every
command rerun with identical inputs and seeds produces byte-identical output
files. Exit codes: 0 success, 2 usage or I/O error, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import corpus, dataset, decode, detector, seq2seq, turing
from .errors import ConfigError, EmptyInput, ParseError, WrongsmithError

USAGE_EXIT = 2
INTERNAL_EXIT = 3


def _default_seed():
    return int(os.environ.get("WRONGSMITH_SEED", "0"))


def _add_train_flags(parser, cell_default=64):
    parser.add_argument("--cell-size", type=int, default=cell_default)
    parser.add_argument("--emb-size", type=int, default=32)
    parser.add_argument("--lr", type=float, default=0.5)
    parser.add_argument("--batch-size", type=int, default=8)
    parser.add_argument("--patience", type=int, default=20)
    parser.add_argument("--max-epochs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=_default_seed())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wrongsmith",
        description="Learn grammatical errors from a parallel corpus, inject "
        "them into clean text, and train/evaluate a token-level detector.",
    )
    sub = parser.add_subparsers(dest="group", required=True)

    corr = sub.add_parser("corruptor", help="error-injection seq2seq model")
    corr_sub = corr.add_subparsers(dest="command", required=True)

    p = corr_sub.add_parser("train", help="train the corruption model")
    p.add_argument("--parallel", required=True, help="training pairs TSV")
    p.add_argument("--dev", required=True, help="development pairs TSV")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--min-count", type=int, default=1)
    _add_train_flags(p)
    p.set_defaults(func=cmd_corruptor_train)

    p = corr_sub.add_parser("generate", help="corrupt clean sentences")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="clean text, one sentence per line")
    p.add_argument("--strategy", required=True, choices=["am", "ts", "bs"])
    p.add_argument("--tau", type=float, default=None, help="TS temperature (default 0.05)")
    p.add_argument("--beam", type=int, default=11, help="BS beam width")
    p.add_argument("--samples", type=int, default=10, help="corruptions per source")
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", required=True, help="parallel TSV to write")
    p.set_defaults(func=cmd_corruptor_generate)

    dset = sub.add_parser("dataset", help="build labelled training data")
    dset_sub = dset.add_subparsers(dest="command", required=True)

    p = dset_sub.add_parser("build", help="label, dedup and filter corruptions")
    p.add_argument("--pairs", required=True, help="parallel TSV of (source, corruption)")
    p.add_argument("--max-errors", type=int, default=5)
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--out", required=True, help="two-column labelled file")
    p.set_defaults(func=cmd_dataset_build)

    det = sub.add_parser("detector", help="BiLSTM error detector")
    det_sub = det.add_subparsers(dest="command", required=True)

    p = det_sub.add_parser("train", help="train the detector")
    p.add_argument("--real", required=True, help="labelled real training data")
    p.add_argument("--synthetic", default=None, help="labelled synthetic data")
    p.add_argument("--alternate", action="store_true",
                   help="alternate epochs between real and synthetic")
    p.add_argument("--dev", required=True, help="labelled dev data")
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    _add_train_flags(p)
    p.set_defaults(func=cmd_detector_train)

    p = det_sub.add_parser("eval", help="evaluate on labelled data")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--json", action="store_true", help="metrics as JSON fractions")
    p.set_defaults(func=cmd_detector_eval)

    tur = sub.add_parser("turing", help="human evaluation session")
    tur_sub = tur.add_subparsers(dest="command", required=True)

    p = tur_sub.add_parser("serve", help="serve the annotation UI and API")
    p.add_argument("--real", required=True, help="real erroneous sentences, one per line")
    p.add_argument("--synthetic", required=True, help="synthetic sentences, one per line")
    p.add_argument("--n", type=int, default=50, help="items per class")
    p.add_argument("--port", type=int, default=8017)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default="turing_results.json",
                   help="metrics JSON written on session close")
    p.add_argument("--ui", default=None, help="directory of built UI assets")
    p.set_defaults(func=cmd_turing_serve)

    return parser


def cmd_corruptor_train(args):
    train_pairs = corpus.read_parallel_tsv(args.parallel)
    dev_pairs = corpus.read_parallel_tsv(args.dev)
    if not train_pairs:
        raise EmptyInput(f"no pairs in {args.parallel}")
    sentences = [p.source for p in train_pairs] + [p.target for p in train_pairs]
    vocab = corpus.build_vocab(sentences, min_count=args.min_count)
    config = seq2seq.TrainConfig(
        cell_size=args.cell_size,
        emb_size=args.emb_size,
        learning_rate=args.lr,
        batch_size=args.batch_size,
        patience=args.patience,
        max_epochs=args.max_epochs,
        seed=args.seed,
    )
    config.validate()
    params = seq2seq.init_params(vocab, args.cell_size, args.emb_size, args.seed)
    best, history = seq2seq.train(params, train_pairs, dev_pairs, config)
    for row in history:
        star = " *" if row["improved"] else ""
        print(
            f"epoch {row['epoch']:3d}  train_loss {row['train_loss']:.4f}"
            f"  dev_loss {row['dev_loss']:.4f}{star}"
        )
    seq2seq.save(best, args.out)
    print(f"model written to {args.out}")
    return 0


def cmd_corruptor_generate(args):
    if args.strategy != "ts" and args.tau is not None:
        print(
            f"warning: --tau only applies to ts, ignored for {args.strategy}",
            file=sys.stderr,
        )
    model = seq2seq.load(args.model)
    clean = corpus.read_sentences(args.input)
    cfg = dataset.BuildConfig(
        decode=decode.DecodeConfig(
            strategy=args.strategy,
            tau=args.tau if args.tau is not None else 0.05,
            beam_width=args.beam,
            max_len=args.max_len,
            seed=args.seed,
        ),
        samples_per_source=args.samples,
    )
    pairs = dataset.corrupt_corpus(model, clean, cfg)
    corpus.write_parallel_tsv(pairs, args.out)
    dataset.write_corruption_sidecar(pairs, args.out + ".scores.tsv")
    print(f"{len(pairs)} corruptions written to {args.out}")
    return 0


def cmd_dataset_build(args):
    pairs = corpus.read_parallel_tsv(args.pairs)
    cfg = dataset.BuildConfig(max_errors=args.max_errors, dedup=not args.no_dedup)
    labeled = dataset.build_labeled(pairs, cfg)
    corpus.write_labeled(labeled, args.out)
    print(f"{len(labeled)} labelled sentences written to {args.out}")
    return 0


def cmd_detector_train(args):
    if args.synthetic and not args.alternate:
        print(
            "warning: --synthetic without --alternate: synthetic instances "
            "are not trained on",
            file=sys.stderr,
        )
    real = corpus.read_labeled(args.real)
    synthetic = corpus.read_labeled(args.synthetic) if args.synthetic else []
    dev = corpus.read_labeled(args.dev)
    cfg = detector.DetectorTrainConfig(
        cell_size=args.cell_size,
        emb_size=args.emb_size,
        learning_rate=args.lr,
        batch_size=args.batch_size,
        patience=args.patience,
        max_epochs=args.max_epochs,
        seed=args.seed,
        alternation="epoch" if args.alternate else "none",
        threshold=args.threshold,
    )
    cfg.validate()
    best, history = detector.train_detector(real, synthetic, dev, cfg)
    for row in history:
        print(json.dumps(row, sort_keys=True))
    detector.save(best, args.out)
    print(f"model written to {args.out}")
    return 0


def cmd_detector_eval(args):
    params = detector.load(args.model)
    test = corpus.read_labeled(args.test)
    metrics = detector.evaluate(params, test, threshold=args.threshold, beta=args.beta)
    if args.json:
        print(metrics.to_json())
    else:
        print(metrics.as_percentages())
    return 0


def cmd_turing_serve(args):
    real = [" ".join(s) for s in corpus.read_sentences(args.real)]
    synthetic = [" ".join(s) for s in corpus.read_sentences(args.synthetic)]
    session = turing.build_session(real, synthetic, n=args.n, seed=args.seed)
    server = turing.make_server(
        session, host=args.host, port=args.port, out_path=args.out, ui_dir=args.ui
    )
    print(f"serving {len(session.items)} items on http://{args.host}:{server.server_port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def main(argv=None):
    try:
        return run(argv)
    except (ParseError, EmptyInput, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except WrongsmithError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
