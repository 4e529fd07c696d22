"""Command-line interface.

Subcommands: toy, transform, challenge, subset, score. All seeds and sizes
are explicit flags. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import challenge as challenge_mod
from . import pipeline
from .morphology import CaseSystem, MorphStyle
from .pipeline import DataError, TransformSpec
from .toygrammar import DEFAULT_LEXICON, ToyVariant, generate_corpus, split_corpus, write_corpus


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="synthlang", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    toy = sub.add_parser("toy", help="toy parallel grammar corpora")
    toy_sub = toy.add_subparsers(dest="toy_command", required=True)
    toy_gen = toy_sub.add_parser("generate", help="generate a toy corpus variant")
    toy_gen.add_argument("--variant", required=True, choices=[v.value for v in ToyVariant])
    toy_gen.add_argument("--n", type=int, default=10000)
    toy_gen.add_argument("--seed", type=int, required=True)
    toy_gen.add_argument("--out", type=Path, required=True)
    toy_gen.add_argument("--split", default=None, help="train/valid/test ratios, e.g. 0.8,0.1,0.1")
    toy_gen.add_argument("--split-markers", action="store_true",
                         help="detach #S/#O case markers as separate tokens")

    tr = sub.add_parser("transform", help="transform a parsed parallel corpus")
    tr.add_argument("--source", type=Path, required=True, help="CoNLL-U source side")
    tr.add_argument("--target", type=Path, default=None, help="plain-text target side")
    tr.add_argument("--config", type=Path, default=None, help="JSON TransformSpec, overridden by flags")
    tr.add_argument("--order", default=None,
                    help="original | svo | sov | vso | vos | osv | ovs | random | shuffle")
    tr.add_argument("--case", default=None, choices=[c.value for c in CaseSystem])
    tr.add_argument("--style", default=None, choices=[s.value for s in MorphStyle])
    tr.add_argument("--seed", type=int, default=None)
    tr.add_argument("--keep-agreement", action="store_true",
                    help="skip verb agreement removal")
    tr.add_argument("--declension-map", type=Path, default=None,
                    help="reuse a lemma->class table instead of drawing one")
    tr.add_argument("--name", default=None, help="corpus name used in seed derivation")
    tr.add_argument("--out", type=Path, required=True)

    ch = sub.add_parser("challenge", help="subject/object-swap challenge set")
    ch_sub = ch.add_subparsers(dest="challenge_command", required=True)
    ch_gen = ch_sub.add_parser("generate", help="generate challenge.en/.fr/.tsv")
    ch_gen.add_argument("--out", type=Path, required=True)
    ch_gen.add_argument("--conllu", action="store_true",
                        help="also write the English side as CoNLL-U")

    ss = sub.add_parser("subset", help="draw train/held-out subsets")
    ss.add_argument("--source", type=Path, required=True)
    ss.add_argument("--target", type=Path, required=True)
    ss.add_argument("--size", type=int, required=True)
    ss.add_argument("--heldout", type=int, default=5000)
    ss.add_argument("--seed", type=int, required=True)
    ss.add_argument("--out", type=Path, required=True)

    sc = sub.add_parser("score", help="accuracy / BLEU / RIBES report")
    sc.add_argument("--hyp", type=Path, required=True)
    sc.add_argument("--ref", type=Path, required=True)
    sc.add_argument("--out", type=Path, default=None, help="write the JSON report here")
    sc.add_argument("--per-sentence", type=Path, default=None,
                    help="write per-sentence RIBES as TSV")
    return parser


def _cmd_toy(args) -> int:
    corpus = generate_corpus(DEFAULT_LEXICON, ToyVariant(args.variant), args.n, args.seed)
    write_corpus(corpus, args.out, prefix="full", detach_markers=args.split_markers)
    manifest = {
        "variant": args.variant,
        "n": args.n,
        "seed": args.seed,
        "split": None,
    }
    if args.split:
        ratios = tuple(float(x) for x in args.split.split(","))
        if len(ratios) != 3:
            raise DataError(f"--split needs three ratios, got {args.split!r}")
        train, valid, test = split_corpus(corpus, ratios, args.seed)
        for name, part in (("train", train), ("valid", valid), ("test", test)):
            write_corpus(part, args.out, prefix=name, detach_markers=args.split_markers)
        manifest["split"] = {"ratios": ratios, "sizes": [len(train), len(valid), len(test)]}
    (Path(args.out) / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    return 0


def _cmd_transform(args) -> int:
    config = {}
    if args.config:
        config = json.loads(args.config.read_text(encoding="utf-8"))
    if args.order is not None:
        config["order"] = args.order
    if args.case is not None:
        config["case"] = args.case
    if args.style is not None:
        config["style"] = args.style
    if args.seed is not None:
        config["seed"] = args.seed
    if args.keep_agreement:
        config["agreement_removal"] = False
    spec = TransformSpec.from_dict(config)
    pipeline.transform_file(
        source_path=args.source,
        spec=spec,
        target_path=args.target,
        out_dir=args.out,
        corpus_name=args.name,
        declension_path=args.declension_map,
    )
    return 0


def _cmd_challenge(args) -> int:
    items = challenge_mod.generate_challenge()
    challenge_mod.write_challenge(items, args.out, conllu=args.conllu)
    return 0


def _cmd_subset(args) -> int:
    sources = args.source.read_text(encoding="utf-8").splitlines()
    targets = args.target.read_text(encoding="utf-8").splitlines()
    if len(sources) != len(targets):
        raise DataError(f"misaligned files: {len(sources)} vs {len(targets)} lines")
    train, heldout = pipeline.subset(
        list(zip(sources, targets)), size=args.size, heldout=args.heldout, seed=args.seed
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, part in (("train", train), ("heldout", heldout)):
        srcs = [s for s, _ in part]
        tgts = [t for _, t in part]
        (out / f"{name}.source.txt").write_text(
            "\n".join(srcs) + "\n" if srcs else "", encoding="utf-8"
        )
        (out / f"{name}.target.txt").write_text(
            "\n".join(tgts) + "\n" if tgts else "", encoding="utf-8"
        )
    return 0


def _cmd_score(args) -> int:
    report = pipeline.score(args.hyp, args.ref)
    payload = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.out:
        args.out.write_text(payload, encoding="utf-8")
    sys.stdout.write(payload)
    if args.per_sentence:
        rows = ["sentence\tribes"]
        rows += [f"{i}\t{v:.6f}" for i, v in enumerate(report.per_sentence_ribes)]
        args.per_sentence.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return 0


_COMMANDS = {
    "toy": _cmd_toy,
    "transform": _cmd_transform,
    "challenge": _cmd_challenge,
    "subset": _cmd_subset,
    "score": _cmd_score,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DataError, FileNotFoundError, ValueError) as exc:
        print(f"synthlang: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
