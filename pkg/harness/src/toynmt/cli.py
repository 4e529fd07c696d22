"""Command line for the toy translation experiments.

`toynmt train` runs one (model, corpus) configuration; `toynmt run-all`
sweeps models x language variants, writes one TSV per pair plus a combined
plot, and reports when each variant first passes the 95% mark.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .curves import plot_curves, write_curve_tsv
from .data import load_corpus
from .train import TrainConfig, evaluate, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toynmt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("train", help="train one model on one corpus directory")
    tr.add_argument("--data", type=Path, required=True,
                    help="directory with train/valid/test .source/.target files")
    tr.add_argument("--model", default="bilstm",
                    choices=["bilstm", "transformer_small", "transformer_large"])
    tr.add_argument("--config", type=Path, default=None, help="JSON TrainConfig")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--repeats", type=int, default=None)
    tr.add_argument("--max-steps", type=int, default=None)
    tr.add_argument("--out", type=Path, required=True)

    ra = sub.add_parser("run-all", help="sweep models x variants and plot")
    ra.add_argument("--data-root", type=Path, required=True,
                    help="directory containing one corpus subdirectory per variant")
    ra.add_argument("--variants", default=None,
                    help="comma-separated subdirectory names (default: all subdirectories)")
    ra.add_argument("--models", default="bilstm,transformer_small")
    ra.add_argument("--config", type=Path, default=None, help="JSON TrainConfig")
    ra.add_argument("--seed", type=int, default=0)
    ra.add_argument("--repeats", type=int, default=5)
    ra.add_argument("--max-steps", type=int, default=1000)
    ra.add_argument("--out", type=Path, required=True)
    return parser


def _config(args, model: str) -> TrainConfig:
    data = {}
    if getattr(args, "config", None):
        data = json.loads(args.config.read_text(encoding="utf-8"))
    data["model"] = model
    if args.repeats is not None:
        data["repeats"] = args.repeats
    if getattr(args, "max_steps", None) is not None:
        data["max_steps"] = args.max_steps
    return TrainConfig.from_dict(data)


def _cmd_train(args) -> int:
    corpus = load_corpus(args.data)
    cfg = _config(args, args.model)
    result = train(corpus, cfg, seed=args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    name = f"{args.model}__{args.data.name}"
    write_curve_tsv(result, args.out / f"{name}.tsv")
    plot_curves({name: result.curve}, args.out / f"{name}.png")
    test_accuracy = evaluate(result.model, corpus.test, corpus.src_vocab, corpus.tgt_vocab)
    summary = {
        "model": args.model,
        "data": str(args.data),
        "config": cfg.to_dict(),
        "final_validation_accuracy": result.curve.final_accuracy,
        "test_accuracy_last_repeat": test_accuracy,
        "first_step_at_95": result.curve.first_step_reaching(0.95),
    }
    (args.out / f"{name}.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_run_all(args) -> int:
    if args.variants:
        variants = [v.strip() for v in args.variants.split(",")]
    else:
        variants = sorted(p.name for p in args.data_root.iterdir() if p.is_dir())
    if not variants:
        print("toynmt: no variant subdirectories found", file=sys.stderr)
        return 2
    models = [m.strip() for m in args.models.split(",")]
    args.out.mkdir(parents=True, exist_ok=True)

    curves = {}
    summary = {}
    for model in models:
        for variant in variants:
            corpus = load_corpus(args.data_root / variant)
            cfg = _config(args, model)
            result = train(corpus, cfg, seed=args.seed)
            label = f"{model}__{variant}"
            curves[label] = result.curve
            write_curve_tsv(result, args.out / f"{label}.tsv")
            summary[label] = {
                "final_validation_accuracy": result.curve.final_accuracy,
                "first_step_at_95": result.curve.first_step_reaching(0.95),
            }
            print(f"{label}: final={result.curve.final_accuracy:.4f} "
                  f"first@0.95={result.curve.first_step_reaching(0.95)}")
    plot_curves(curves, args.out / "curves.png", title="validation accuracy by training step")
    (args.out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "train":
        return _cmd_train(args)
    return _cmd_run_all(args)


if __name__ == "__main__":
    sys.exit(main())
