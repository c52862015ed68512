"""Operator command line: train, eval, generate, compare, inspect, serve.

Exit codes: 0 success, 1 user error (bad flags, paths, or configuration),
2 internal error. Stdout is line oriented and stable for scripting.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .corpus import Level, prepare_level_data
from .errors import LexitutorError
from .generation import GenerationRequest, generate
from .model import PRESETS, ModelConfig, build_model, count_parameters
from .nn import active_backend, make_rng
from .training import TrainConfig, evaluate, export_metrics, train

LEVEL_NAMES = [level.value for level in Level]


class CliParser(argparse.ArgumentParser):
    """argparse, but user errors exit 1 per our exit-code contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> CliParser:
    parser = CliParser(prog="lexitutor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_training_flags(p):
        p.add_argument("--corpus", required=True, help="corpus root directory")
        p.add_argument("--level", required=True, choices=LEVEL_NAMES)
        p.add_argument("--epochs", type=int, default=20)
        p.add_argument("--batch", type=int, default=150)
        p.add_argument("--window", type=int, default=10)
        p.add_argument("--vocab", type=int, default=125, help="vocabulary cap incl. pad/oov")
        p.add_argument("--embed-dim", type=int, default=70)
        p.add_argument("--hidden", type=int, default=100)
        p.add_argument("--dropout", type=float, default=0.6)
        p.add_argument("--lr", type=float, default=1e-3)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--bidirectional", action="store_true",
                       help="make the first recurrent layer bidirectional")
        p.add_argument("--attention", action="store_true",
                       help="dot-product attention (encdec preset only)")

    p_train = sub.add_parser("train", help="train one level's model and write a checkpoint")
    add_training_flags(p_train)
    p_train.add_argument("--preset", default="stacked", choices=PRESETS)
    p_train.add_argument("--out", required=True, help="checkpoint output path")
    p_train.add_argument("--metrics", help="write per-epoch metrics CSV here")
    p_train.add_argument("--checkpoint-every", type=int, default=0,
                         help="also write the checkpoint every N epochs")

    p_eval = sub.add_parser("eval", help="evaluate a checkpoint on a corpus test split")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--seed", type=int, default=42, help="split seed")

    p_gen = sub.add_parser("generate", help="continue a seed phrase with a trained model")
    p_gen.add_argument("--model", required=True)
    p_gen.add_argument("--seed-text", required=True)
    p_gen.add_argument("--words", type=int, default=5)
    p_gen.add_argument("--strategy", default="greedy", choices=["greedy", "sample"])
    p_gen.add_argument("--temperature", type=float, default=1.0)
    p_gen.add_argument("--rng", type=int, default=None)

    p_cmp = sub.add_parser("compare", help="train presets on identical splits and tabulate")
    add_training_flags(p_cmp)
    p_cmp.add_argument("--presets", default="simple,stacked,encdec",
                       help="comma-separated preset list")
    p_cmp.add_argument("--out-csv", help="write the comparison table as CSV")

    p_ins = sub.add_parser("inspect", help="print a checkpoint's config and layer manifest")
    p_ins.add_argument("--model", required=True)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--models", required=True, help="directory of <level>.ckpt files")
    p_srv.add_argument("--port", type=int, default=None)
    p_srv.add_argument("--data", default=None, help="session persistence directory")
    p_srv.add_argument("--host", default="127.0.0.1")

    return parser


def _train_one(args, preset: str):
    """Shared by train and compare: returns (model, report, vocab)."""
    level = Level(args.level)
    vocab, split = prepare_level_data(args.corpus, level, args.vocab, args.window, args.seed)
    config = ModelConfig(
        preset=preset,
        vocab_size=len(vocab),
        embed_dim=args.embed_dim,
        hidden=args.hidden,
        window=args.window,
        dropout_rate=args.dropout,
        bidirectional_first_layer=args.bidirectional,
        use_attention=args.attention,
    )
    model = build_model(config, make_rng(args.seed), vocab=vocab, level=level)
    train_config = TrainConfig(epochs=args.epochs, batch_size=args.batch,
                               lr=args.lr, seed=args.seed)
    if getattr(args, "checkpoint_every", 0):
        train_config.checkpoint_every = args.checkpoint_every
        train_config.checkpoint_path = args.out
    report = train(model, split, train_config)
    return model, report, split


def cmd_train(args) -> int:
    from .checkpoint import save_checkpoint

    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    model, report, _split = _train_one(args, args.preset)
    save_checkpoint(model, args.out)
    if args.metrics:
        export_metrics(report, args.metrics)
    print(f"checkpoint={args.out}")
    print(f"parameters={count_parameters(model)}")
    print(f"test_loss={report.test_loss:.6f} test_accuracy={report.test_accuracy:.6f}")
    return 0


def cmd_eval(args) -> int:
    from .checkpoint import load_checkpoint
    from .corpus import load_corpus, sentences_to_windows, split_dataset

    model = load_checkpoint(args.model)
    if model.level is None:
        print("error: checkpoint does not record its level", file=sys.stderr)
        return 1
    # window the corpus with the checkpoint's own vocabulary so ids line up
    sentences = [s for s in load_corpus(args.corpus) if s.level == model.level]
    if not sentences:
        print(f"error: corpus has no {model.level.value} sentences", file=sys.stderr)
        return 1
    samples = sentences_to_windows(sentences, model.vocab, model.config.window)
    split = split_dataset(samples, args.seed)
    loss, accuracy = evaluate(model, split.test)
    print(f"test_loss={loss:.6f} test_accuracy={accuracy:.6f}")
    return 0


def cmd_generate(args) -> int:
    from .checkpoint import load_checkpoint

    model = load_checkpoint(args.model)
    if model.level is None:
        print("error: checkpoint does not record its level", file=sys.stderr)
        return 1
    request = GenerationRequest(
        seed_text=args.seed_text,
        level=model.level,
        num_words=args.words,
        strategy=args.strategy,
        temperature=args.temperature,
        rng_seed=args.rng,
    )
    result = generate(model, request)
    print(f"generated={' '.join(result.generated_words)}")
    print(f"full_text={result.full_text}")
    return 0


def cmd_compare(args) -> int:
    presets = [p.strip() for p in args.presets.split(",") if p.strip()]
    for preset in presets:
        if preset not in PRESETS:
            print(f"error: unknown preset {preset!r}", file=sys.stderr)
            return 1
    rows = []
    for preset in presets:
        _model, report, _split = _train_one(args, preset)
        rows.append((preset, report.test_loss, report.test_accuracy))
    print(f"{'preset':<10} {'test_loss':>10} {'test_acc':>9}")
    for preset, loss, acc in rows:
        print(f"{preset:<10} {loss:>10.4f} {acc:>9.4f}")
    if args.out_csv:
        with open(args.out_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["preset", "test_loss", "test_accuracy"])
            for preset, loss, acc in rows:
                writer.writerow([preset, repr(loss), repr(acc)])
    return 0


def cmd_inspect(args) -> int:
    from .checkpoint import load_checkpoint

    model = load_checkpoint(args.model)
    config = model.config
    print(f"model_id={model.model_id}")
    print(f"preset={config.preset}")
    print(f"level={model.level.value if model.level else 'unknown'}")
    print(f"vocab_size={config.vocab_size}")
    print(f"embed_dim={config.embed_dim} hidden={config.hidden} window={config.window}")
    print(f"dropout={config.dropout_rate} bidirectional={config.bidirectional_first_layer} "
          f"attention={config.use_attention}")
    print(f"parameters={count_parameters(model)}")
    print("layers:")
    for p in model.params():
        print(f"  {p.name} {'x'.join(map(str, p.shape))}")
    return 0


def cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import ServiceConfig, create_app

    port = args.port if args.port is not None else int(os.environ.get("LEXITUTOR_PORT", "8080"))
    data_dir = Path(args.data) if args.data else Path(
        os.environ.get("LEXITUTOR_DATA_DIR", "lexitutor_data")
    )
    config = ServiceConfig(
        models_dir=Path(args.models),
        data_dir=data_dir,
        cors_origin=os.environ.get("LEXITUTOR_CORS_ORIGIN", "*"),
    )
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    app = create_app(config)
    print(f"backend={active_backend()} port={port}")
    try:
        uvicorn.run(app, host=args.host, port=port, log_level="warning")
    except OSError as exc:  # typically: port already bound
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # uvicorn startup failure (e.g. busy port)
        if exc.code:
            print("error: server failed to start", file=sys.stderr)
            return 1
    return 0


COMMANDS = {
    "train": cmd_train,
    "eval": cmd_eval,
    "generate": cmd_generate,
    "compare": cmd_compare,
    "inspect": cmd_inspect,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (LexitutorError, FileNotFoundError, NotADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # internal bug: distinct exit code
        print(f"internal error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
