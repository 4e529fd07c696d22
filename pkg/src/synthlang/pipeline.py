"""End-to-end corpus transformation, subsetting and scoring.

A TransformSpec fully determines one synthetic source-language variant:
order scheme x case system x morphology style x seed. Transforming composes
agreement removal, reordering (or shuffling) and case marking per sentence;
the target side passes through byte-identical. Every stochastic draw is keyed
to (seed, corpus name, sentence ordinal), so reruns and parallel execution
cannot change the output, and the manifest records enough to audit a run.

Sentences that fail validation are never dropped: they pass through untouched
and are counted, keeping the two sides line-aligned.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import metrics
from .morphology import CaseSystem, DeclensionMap, MorphStyle, assign_declensions, mark_case
from .permuter import (
    OrderScheme,
    TransformedSentence,
    linearize,
    remove_agreement,
    reorder,
    shuffle_all,
)
from .seeding import derive_seed, sentence_rng
from .treebank import DepSentence, parse_conllu, validate


class DataError(ValueError):
    """Inconsistent or insufficient input data."""


@dataclass(frozen=True)
class TransformSpec:
    order: OrderScheme
    case: CaseSystem = CaseSystem.NONE
    style: MorphStyle = MorphStyle.OVERT
    seed: int = 0
    agreement_removal: bool = True

    def __post_init__(self):
        if self.case is CaseSystem.SYNCRETIC and self.style is not MorphStyle.OVERT:
            raise ValueError("syncretic case marking exists only in the overt style")

    def to_dict(self) -> dict:
        return {
            "order": self.order.label,
            "case": self.case.value,
            "style": self.style.value,
            "seed": self.seed,
            "agreement_removal": self.agreement_removal,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TransformSpec":
        known = {"order", "case", "style", "seed", "agreement_removal"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown TransformSpec fields: {sorted(unknown)}")
        return cls(
            order=OrderScheme.parse(data.get("order", "original")),
            case=CaseSystem(data.get("case", "none")),
            style=MorphStyle(data.get("style", "overt")),
            seed=int(data.get("seed", 0)),
            agreement_removal=bool(data.get("agreement_removal", True)),
        )

    @property
    def is_identity(self) -> bool:
        return (
            self.order.kind == "original"
            and self.case is CaseSystem.NONE
            and not self.agreement_removal
        )


@dataclass
class Manifest:
    spec: dict
    corpus: str
    input_digests: dict
    counts: dict
    draws: list  # per-sentence random order, None where no draw happened
    vocabulary: dict

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=False) + "\n"


@dataclass
class TransformResult:
    source_lines: list[str]
    target_lines: list[str] | None
    manifest: Manifest
    declensions: DeclensionMap | None


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def training_lexicon(sentences: Sequence[DepSentence]) -> set[str]:
    return {tok.lemma for sent in sentences for tok in sent.tokens}


def run_transform(
    sentences: Sequence[DepSentence],
    spec: TransformSpec,
    targets: Sequence[str] | None = None,
    corpus_name: str = "corpus",
    declensions: DeclensionMap | None = None,
) -> TransformResult:
    """Apply one TransformSpec to a parsed corpus.

    With the implicit-declensions style and no precomputed map, declension
    classes are drawn from this corpus's lemmas; pass the training map in when
    transforming held-out data so train and test agree.
    """
    if targets is not None and len(targets) != len(sentences):
        raise DataError(
            f"misaligned corpora: {len(sentences)} source sentences vs {len(targets)} target lines"
        )

    if spec.case is not CaseSystem.NONE and spec.style is MorphStyle.IMPLICIT_DECLENSIONS:
        if declensions is None:
            rng = random.Random(derive_seed(spec.seed, corpus_name, "declensions"))
            declensions = assign_declensions(training_lexicon(sentences), rng)
    else:
        declensions = None

    source_lines: list[str] = []
    draws: list[str | None] = []
    passthrough = 0
    defaulted_numbers = 0
    types_in: set[str] = set()
    types_out: set[str] = set()

    for ordinal, sent in enumerate(sentences):
        types_in.update(sent.forms)
        if validate(sent):
            line = " ".join(sent.forms)
            source_lines.append(line)
            types_out.update(sent.forms)
            draws.append(None)
            passthrough += 1
            continue
        ts = _transform_sentence(sent, spec, corpus_name, ordinal, declensions)
        defaulted_numbers += sum(
            1 for m in ts.marks.values() if getattr(m, "number_defaulted", False)
        )
        types_out.update(ts.tokens)
        source_lines.append(linearize(ts))
        draws.append(ts.drawn_order)

    source_text = "\n".join(source_lines) + "\n" if source_lines else ""
    digests = {"source": _sha256(source_text)}
    target_lines = list(targets) if targets is not None else None
    if target_lines is not None:
        digests["target"] = _sha256("\n".join(target_lines) + "\n" if target_lines else "")

    manifest = Manifest(
        spec=spec.to_dict(),
        corpus=corpus_name,
        input_digests=digests,
        counts={
            "sentences": len(sentences),
            "passthrough": passthrough,
            "number_defaulted": defaulted_numbers,
        },
        draws=draws,
        vocabulary={"types_in": len(types_in), "types_out": len(types_out)},
    )
    return TransformResult(
        source_lines=source_lines,
        target_lines=target_lines,
        manifest=manifest,
        declensions=declensions,
    )


def _transform_sentence(
    sent: DepSentence,
    spec: TransformSpec,
    corpus_name: str,
    ordinal: int,
    declensions: DeclensionMap | None,
) -> TransformedSentence:
    if spec.agreement_removal:
        sent = remove_agreement(sent)
    rng = sentence_rng(spec.seed, corpus_name, ordinal)
    if spec.order.kind == "shuffle":
        ts = shuffle_all(sent, rng)
    else:
        ts = reorder(sent, spec.order, rng)
    if spec.case is not CaseSystem.NONE:
        ts = mark_case(ts, spec.case, spec.style, declensions)
    return ts


def transform_file(
    source_path: str | Path,
    spec: TransformSpec,
    target_path: str | Path | None = None,
    out_dir: str | Path = ".",
    corpus_name: str | None = None,
    declension_path: str | Path | None = None,
) -> TransformResult:
    """File-level wrapper: CoNLL-U source (+ optional plain-text target) in,
    transformed text + manifest (+ declension table) out."""
    source_path = Path(source_path)
    corpus_name = corpus_name or source_path.stem
    sentences = parse_conllu(source_path.read_text(encoding="utf-8"))
    targets = None
    if target_path is not None:
        targets = Path(target_path).read_text(encoding="utf-8").splitlines()
    declensions = DeclensionMap.load(declension_path) if declension_path else None

    result = run_transform(sentences, spec, targets, corpus_name, declensions)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "source.txt").write_text(
        "\n".join(result.source_lines) + "\n" if result.source_lines else "", encoding="utf-8"
    )
    if result.target_lines is not None:
        (out / "target.txt").write_text(
            "\n".join(result.target_lines) + "\n" if result.target_lines else "",
            encoding="utf-8",
        )
    (out / "manifest.json").write_text(result.manifest.to_json(), encoding="utf-8")
    if result.declensions is not None and declension_path is None:
        result.declensions.save(out / "declensions.tsv")
    return result


def subset(
    pairs: Sequence[tuple[str, str]],
    size: int,
    heldout: int = 5000,
    seed: int = 0,
) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    """Disjoint (train, heldout) subsets of a parallel corpus.

    The held-out block is drawn first from the seeded shuffle, so for a fixed
    seed it is identical across training sizes; training subsets of different
    sizes are nested. Original corpus order is preserved within each side.
    """
    if size < 0 or heldout < 0:
        raise DataError("sizes must be non-negative")
    if len(pairs) < size + heldout:
        raise DataError(
            f"corpus has {len(pairs)} pairs, need {size} train + {heldout} held-out"
        )
    indices = list(range(len(pairs)))
    random.Random(derive_seed(seed, "subset")).shuffle(indices)
    heldout_idx = sorted(indices[:heldout])
    train_idx = sorted(indices[heldout : heldout + size])
    return [pairs[i] for i in train_idx], [pairs[i] for i in heldout_idx]


def score(hyp_path: str | Path, ref_path: str | Path) -> metrics.MetricReport:
    hyps = Path(hyp_path).read_text(encoding="utf-8").splitlines()
    refs = Path(ref_path).read_text(encoding="utf-8").splitlines()
    if len(hyps) != len(refs):
        raise DataError(f"misaligned files: {len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise DataError("empty corpus")
    return metrics.evaluate(hyps, refs)
