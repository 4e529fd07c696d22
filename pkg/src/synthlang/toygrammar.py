"""Tiny synchronous grammar producing English-like/Dutch-like parallel toys.

Every sentence is a transitive clause: verb, subject NP, object NP, with each
NP optionally carrying one adjective. The source side is realized verb-first
(VSO or VOS); the target side is always SVO. In the mixed variant the order
is drawn per sentence and the argument head nouns carry #S / #O markers, so
role recovery is possible only through the markers.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .seeding import derive_seed

SUBJECT_MARKER = "#S"
OBJECT_MARKER = "#O"


class ToyVariant(enum.Enum):
    FIXED_VSO = "fixed-vso"
    FIXED_VOS = "fixed-vos"
    MIXED_CASE = "mixed-case"


class DecodeError(ValueError):
    """Source string cannot be decoded back to argument roles."""


@dataclass(frozen=True)
class LexEntry:
    src: str
    tgt: str


@dataclass(frozen=True)
class ToyLexicon:
    nouns: tuple[LexEntry, ...]
    verbs: tuple[LexEntry, ...]
    adjectives: tuple[LexEntry, ...]
    determiner: LexEntry

    def __post_init__(self):
        for name, entries in (
            ("nouns", self.nouns),
            ("verbs", self.verbs),
            ("adjectives", self.adjectives),
        ):
            if len(entries) != 6:
                raise ValueError(f"lexicon needs exactly 6 {name}, got {len(entries)}")
        src = [e.src for e in self.nouns + self.verbs + self.adjectives] + [self.determiner.src]
        tgt = [e.tgt for e in self.nouns + self.verbs + self.adjectives] + [self.determiner.tgt]
        if len(set(src)) != len(src):
            raise ValueError("source forms must be distinct")
        if len(set(tgt)) != len(tgt):
            raise ValueError("target forms must be distinct")


DEFAULT_LEXICON = ToyLexicon(
    nouns=(
        LexEntry("cat", "kat"),
        LexEntry("dog", "hond"),
        LexEntry("bird", "vogel"),
        LexEntry("horse", "paard"),
        LexEntry("mouse", "muis"),
        LexEntry("rabbit", "konijn"),
    ),
    verbs=(
        LexEntry("follows", "volgt"),
        LexEntry("sees", "ziet"),
        LexEntry("hears", "hoort"),
        LexEntry("finds", "vindt"),
        LexEntry("bites", "bijt"),
        LexEntry("helps", "helpt"),
    ),
    adjectives=(
        LexEntry("little", "kleine"),
        LexEntry("friendly", "vriendelijke"),
        LexEntry("big", "grote"),
        LexEntry("old", "oude"),
        LexEntry("young", "jonge"),
        LexEntry("quiet", "stille"),
    ),
    determiner=LexEntry("the", "de"),
)


@dataclass(frozen=True)
class ToySentence:
    """Abstract sentence (lexicon indices); order/case fields are set at
    realization time."""

    verb: int
    subj_noun: int
    subj_adj: int | None
    obj_noun: int
    obj_adj: int | None
    order: str | None = None  # "VSO" | "VOS" once realized
    case_marked: bool = False

    @property
    def key(self) -> tuple:
        return (self.verb, self.subj_noun, self.subj_adj, self.obj_noun, self.obj_adj)


@dataclass(frozen=True)
class ToyPair:
    source: str
    target: str
    sentence: ToySentence  # realized, carries the drawn order


@dataclass(frozen=True)
class ToyCorpus:
    variant: ToyVariant
    seed: int
    pairs: tuple[ToyPair, ...]
    lexicon: "ToyLexicon" = None  # set by generate_corpus

    def __len__(self) -> int:
        return len(self.pairs)


def enumerate_sentences(lex: ToyLexicon) -> list[ToySentence]:
    """All verb x subjNP x objNP combinations: 6 * 42 * 42 = 10,584."""
    adj_options: list[int | None] = [None] + list(range(len(lex.adjectives)))
    out = []
    for verb in range(len(lex.verbs)):
        for subj_adj in adj_options:
            for subj_noun in range(len(lex.nouns)):
                for obj_adj in adj_options:
                    for obj_noun in range(len(lex.nouns)):
                        out.append(
                            ToySentence(
                                verb=verb,
                                subj_noun=subj_noun,
                                subj_adj=subj_adj,
                                obj_noun=obj_noun,
                                obj_adj=obj_adj,
                            )
                        )
    return out


def _np_tokens(lex: ToyLexicon, noun: int, adj: int | None, marker: str = "") -> list[str]:
    tokens = [lex.determiner.src]
    if adj is not None:
        tokens.append(lex.adjectives[adj].src)
    tokens.append(lex.nouns[noun].src + marker)
    return tokens


def draw_realization(
    s: ToySentence, variant: ToyVariant, rng: random.Random | None = None
) -> ToySentence:
    if variant is ToyVariant.FIXED_VSO:
        return replace(s, order="VSO", case_marked=False)
    if variant is ToyVariant.FIXED_VOS:
        return replace(s, order="VOS", case_marked=False)
    if rng is None:
        raise ValueError("mixed-case variant needs a seeded rng")
    return replace(s, order=rng.choice(("VSO", "VOS")), case_marked=True)


def realize_source(lex: ToyLexicon, s: ToySentence) -> str:
    if s.order not in ("VSO", "VOS"):
        raise ValueError(f"sentence has no drawn order: {s.order!r}")
    subj = _np_tokens(lex, s.subj_noun, s.subj_adj, SUBJECT_MARKER if s.case_marked else "")
    obj = _np_tokens(lex, s.obj_noun, s.obj_adj, OBJECT_MARKER if s.case_marked else "")
    first, second = (subj, obj) if s.order == "VSO" else (obj, subj)
    return " ".join([lex.verbs[s.verb].src] + first + second)


def realize_target(lex: ToyLexicon, s: ToySentence) -> str:
    """Target side is always SVO and ignores order/case of the source."""

    def np(noun: int, adj: int | None) -> list[str]:
        tokens = [lex.determiner.tgt]
        if adj is not None:
            tokens.append(lex.adjectives[adj].tgt)
        tokens.append(lex.nouns[noun].tgt)
        return tokens

    return " ".join(np(s.subj_noun, s.subj_adj) + [lex.verbs[s.verb].tgt] + np(s.obj_noun, s.obj_adj))


def realize_pair(
    s: ToySentence, variant: ToyVariant, rng: random.Random | None = None, lex: ToyLexicon = DEFAULT_LEXICON
) -> tuple[str, str]:
    drawn = draw_realization(s, variant, rng)
    return realize_source(lex, drawn), realize_target(lex, drawn)


def generate_corpus(
    lex: ToyLexicon, variant: ToyVariant, n: int, seed: int
) -> ToyCorpus:
    """Sample n distinct abstract sentences and realize them.

    The abstract sample depends only on (lexicon, n, seed), so corpora built
    with the same seed share their sentences across variants and differ only
    in source realization.
    """
    population = enumerate_sentences(lex)
    if n > len(population):
        raise ValueError(f"requested {n} sentences but the language has only {len(population)}")
    sample_rng = random.Random(derive_seed(seed, "toy-sample"))
    order_rng = random.Random(derive_seed(seed, "toy-orders"))
    sample = sample_rng.sample(population, n)
    pairs = []
    for s in sample:
        drawn = draw_realization(s, variant, order_rng)
        pairs.append(
            ToyPair(
                source=realize_source(lex, drawn),
                target=realize_target(lex, drawn),
                sentence=drawn,
            )
        )
    return ToyCorpus(variant=variant, seed=seed, pairs=tuple(pairs), lexicon=lex)


def split_corpus(
    corpus: ToyCorpus, ratios: tuple[float, float, float], seed: int
) -> tuple[ToyCorpus, ToyCorpus, ToyCorpus]:
    """Disjoint train/valid/test split, computed on sentence positions.

    Corpora generated with the same seed list the same abstract sentences in
    the same order, so the split carries over identically to every variant.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"split ratios must sum to 1, got {ratios}")
    n = len(corpus.pairs)
    indices = list(range(n))
    random.Random(derive_seed(seed, "toy-split")).shuffle(indices)
    n_train = round(ratios[0] * n)
    n_valid = round(ratios[1] * n)
    n_valid = min(n_valid, n - n_train)
    buckets = (
        sorted(indices[:n_train]),
        sorted(indices[n_train : n_train + n_valid]),
        sorted(indices[n_train + n_valid :]),
    )
    return tuple(
        replace(corpus, pairs=tuple(corpus.pairs[i] for i in bucket)) for bucket in buckets
    )


@dataclass(frozen=True)
class RecoveredRoles:
    subject: str
    object: str


def _parse_np(lex: ToyLexicon, tokens: list[str], at: int) -> tuple[str, int]:
    """Consume one noun phrase starting at `at`; return (noun token, next)."""
    adjectives = {e.src for e in lex.adjectives}
    nouns = {e.src for e in lex.nouns}
    if at >= len(tokens) or tokens[at] != lex.determiner.src:
        raise DecodeError(f"expected determiner at position {at}")
    at += 1
    if at < len(tokens) and tokens[at] in adjectives:
        at += 1
    if at >= len(tokens):
        raise DecodeError("noun phrase ends before its noun")
    noun = tokens[at]
    bare = noun.removesuffix(SUBJECT_MARKER).removesuffix(OBJECT_MARKER)
    if bare not in nouns:
        raise DecodeError(f"unknown noun {noun!r}")
    return noun, at + 1


def recover_roles(
    source: str, variant: ToyVariant, lex: ToyLexicon = DEFAULT_LEXICON
) -> RecoveredRoles:
    """Decode subject/object head nouns: positionally for the fixed variants,
    from the #S/#O markers for the mixed one (where position is uninformative)."""
    tokens = source.split()
    if not tokens or tokens[0] not in {e.src for e in lex.verbs}:
        raise DecodeError("sentence is not verb-initial")
    first, at = _parse_np(lex, tokens, 1)
    second, at = _parse_np(lex, tokens, at)
    if at != len(tokens):
        raise DecodeError(f"trailing tokens after the second noun phrase: {tokens[at:]}")

    if variant is ToyVariant.FIXED_VSO:
        return RecoveredRoles(subject=first, object=second)
    if variant is ToyVariant.FIXED_VOS:
        return RecoveredRoles(subject=second, object=first)

    by_marker = {}
    for noun in (first, second):
        if noun.endswith(SUBJECT_MARKER):
            by_marker["subject"] = noun.removesuffix(SUBJECT_MARKER)
        elif noun.endswith(OBJECT_MARKER):
            by_marker["object"] = noun.removesuffix(OBJECT_MARKER)
    if set(by_marker) != {"subject", "object"}:
        raise DecodeError("case markers missing or duplicated; roles are ambiguous")
    return RecoveredRoles(subject=by_marker["subject"], object=by_marker["object"])


def split_markers(line: str) -> str:
    """Detach #S/#O into separate tokens (optional post-processing)."""
    out = []
    for token in line.split():
        for marker in (SUBJECT_MARKER, OBJECT_MARKER):
            if token.endswith(marker):
                out.extend([token.removesuffix(marker), marker])
                break
        else:
            out.append(token)
    return " ".join(out)


def write_corpus(
    corpus: ToyCorpus,
    out_dir: str | Path,
    prefix: str = "full",
    detach_markers: bool = False,
) -> None:
    """Write line-aligned source/target files plus the role ground truth."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sources = [p.source for p in corpus.pairs]
    if detach_markers:
        sources = [split_markers(s) for s in sources]
    _write_lines(out / f"{prefix}.source.txt", sources)
    _write_lines(out / f"{prefix}.target.txt", (p.target for p in corpus.pairs))
    lex = corpus.lexicon or DEFAULT_LEXICON
    rows = ["ordinal\torder\tsubject\tobject"]
    for i, p in enumerate(corpus.pairs):
        s = p.sentence
        rows.append(
            f"{i}\t{s.order}\t{lex.nouns[s.subj_noun].src}\t{lex.nouns[s.obj_noun].src}"
        )
    _write_lines(out / f"{prefix}.roles.tsv", rows)


def _write_lines(path: Path, lines: Iterable[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
