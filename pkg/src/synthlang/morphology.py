"""Artificial case morphology.

Three suffix styles mark the heads of core arguments and their verbs:

* overt: separable role+number suffixes (``.nsubj.sg``), attached with a dot;
* implicit: fused suffixes with no internal structure (``kar``), attached bare;
* implicit with declensions: like implicit, but the suffix set depends on a
  lexically assigned inflection class.

The unambiguous system encodes role and number; the syncretic one encodes
number only (``.arg.sg``) and exists only in the overt style. Argument heads
receive the suffix for their own role and number; the verb receives one
agreement marker per nominal argument, object first, then subject, each in
that argument's number and declension. Under the syncretic system the verb
agrees with the subject's number alone.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .permuter import ArgMark, TransformedSentence, VerbMark

ROLES = ("nsubj", "dobj", "iobj")
NUMBERS = ("sg", "pl")
DECLENSIONS = (1, 2, 3)
DECLENSION_SHARES = (0.6, 0.3, 0.1)


class CaseSystem(enum.Enum):
    NONE = "none"
    UNAMBIGUOUS = "unambiguous"
    SYNCRETIC = "syncretic"


class MorphStyle(enum.Enum):
    OVERT = "overt"
    IMPLICIT = "implicit"
    IMPLICIT_DECLENSIONS = "implicit-declensions"


# (role, number) -> suffix, per declension. Row order: nsubj.sg, nsubj.pl,
# dobj.sg, dobj.pl, iobj.sg, iobj.pl.
_IMPLICIT_SUFFIXES: dict[int, dict[tuple[str, str], str]] = {
    1: {
        ("nsubj", "sg"): "kar",
        ("nsubj", "pl"): "kon",
        ("dobj", "sg"): "kin",
        ("dobj", "pl"): "ker",
        ("iobj", "sg"): "ken",
        ("iobj", "pl"): "kre",
    },
    2: {
        ("nsubj", "sg"): "par",
        ("nsubj", "pl"): "pon",
        ("dobj", "sg"): "it",
        ("dobj", "pl"): "et",
        ("iobj", "sg"): "kez",
        ("iobj", "pl"): "kr",
    },
    3: {
        ("nsubj", "sg"): "pa",
        ("nsubj", "pl"): "po",
        ("dobj", "sg"): "kit",
        ("dobj", "pl"): "ket",
        ("iobj", "sg"): "ke",
        ("iobj", "pl"): "re",
    },
}

_SYNCRETIC_SUFFIXES = {"sg": ".arg.sg", "pl": ".arg.pl"}

# Nominative base forms for marked pronoun argument heads.
PRONOUN_BASE = {
    "i": "I",
    "me": "I",
    "he": "he",
    "him": "he",
    "she": "she",
    "her": "she",
    "we": "we",
    "us": "we",
    "they": "they",
    "them": "they",
    "it": "it",
    "you": "you",
}


@dataclass(frozen=True)
class ParadigmTable:
    """The (role, number, declension) -> suffix mapping for one style/system."""

    style: MorphStyle
    system: CaseSystem
    entries: Mapping[tuple[str, str, int], str]
    syncretic: Mapping[str, str]

    def suffix(self, role: str, number: str, declension: int = 1) -> str:
        if self.system is CaseSystem.SYNCRETIC:
            return self.syncretic[number]
        return self.entries[(role, number, declension)]

    def decode(self, suffix: str, declension: int = 1) -> tuple[str, str]:
        """Recover (role, number) from an unambiguous suffix. Raises KeyError
        if the suffix does not belong to the given declension."""
        for (role, number, decl), s in self.entries.items():
            if decl == declension and s == suffix:
                return role, number
        raise KeyError(suffix)

    def suffixes(self) -> frozenset[str]:
        if self.system is CaseSystem.SYNCRETIC:
            return frozenset(self.syncretic.values())
        return frozenset(self.entries.values())


def build_paradigm(style: MorphStyle, system: CaseSystem) -> ParadigmTable:
    if system is CaseSystem.NONE:
        raise ValueError("no paradigm for an unmarked case system")
    if system is CaseSystem.SYNCRETIC:
        if style is not MorphStyle.OVERT:
            raise ValueError("the syncretic system exists only in the overt style")
        return ParadigmTable(style, system, entries={}, syncretic=dict(_SYNCRETIC_SUFFIXES))

    entries: dict[tuple[str, str, int], str] = {}
    if style is MorphStyle.OVERT:
        for role in ROLES:
            for number in NUMBERS:
                for decl in DECLENSIONS:
                    entries[(role, number, decl)] = f".{role}.{number}"
    elif style is MorphStyle.IMPLICIT:
        for key, suffix in _IMPLICIT_SUFFIXES[1].items():
            entries[(*key, 1)] = suffix
    else:
        for decl in DECLENSIONS:
            for key, suffix in _IMPLICIT_SUFFIXES[decl].items():
                entries[(*key, decl)] = suffix
    return ParadigmTable(style, system, entries=entries, syncretic={})


@dataclass(frozen=True)
class DeclensionMap:
    """Lexically assigned inflection classes. Unlisted lemmas default to 1."""

    assignment: Mapping[str, int]

    def declension_of(self, lemma: str) -> int:
        return self.assignment.get(lemma, 1)

    def class_sizes(self) -> dict[int, int]:
        sizes = Counter(self.assignment.values())
        return {d: sizes.get(d, 0) for d in DECLENSIONS}

    def save(self, path: str | Path) -> None:
        lines = [f"{lemma}\t{decl}" for lemma, decl in sorted(self.assignment.items())]
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DeclensionMap":
        assignment = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            lemma, _, decl = line.partition("\t")
            assignment[lemma] = int(decl)
        return cls(assignment)


def assign_declensions(lexicon: Iterable[str], rng: random.Random) -> DeclensionMap:
    """Random 60/30/10 partition of the training lexicon into three classes.

    The lexicon is sorted before shuffling so the result depends only on the
    seed, not on set iteration order. Rounding spillover goes to class 1.
    """
    lemmas = sorted(set(lexicon))
    rng.shuffle(lemmas)
    n = len(lemmas)
    n1 = round(DECLENSION_SHARES[0] * n)
    n2 = round(DECLENSION_SHARES[1] * n)
    n2 = min(n2, n - n1)
    assignment = {}
    for pos, lemma in enumerate(lemmas):
        if pos < n1:
            assignment[lemma] = 1
        elif pos < n1 + n2:
            assignment[lemma] = 2
        else:
            assignment[lemma] = 3
    return DeclensionMap(assignment)


def _normalize_form(form: str, upos: str) -> str:
    if upos != "PRON":
        return form
    base = PRONOUN_BASE.get(form.lower())
    if base is None:
        return form
    if form[:1].isupper() and base[:1].islower():
        base = base[0].upper() + base[1:]
    return base


def normalize_pronoun(tok) -> str:
    """Nominative base form for personal pronouns (her -> she); anything else
    is returned unchanged."""
    return _normalize_form(tok.form, tok.upos)


def mark_case(
    ts: TransformedSentence,
    system: CaseSystem,
    style: MorphStyle,
    declensions: DeclensionMap | None = None,
) -> TransformedSentence:
    """Attach case/agreement suffixes to the annotated token positions.

    Pronoun argument heads are reduced to their nominative base first, since
    the suffix now carries the role. Surface forms are otherwise kept as-is;
    verbs have already lost their English number marking upstream.
    """
    if system is CaseSystem.NONE:
        return ts
    paradigm = build_paradigm(style, system)
    if style is MorphStyle.IMPLICIT_DECLENSIONS and declensions is None:
        raise ValueError("implicit-declensions style needs a declension map")

    def decl_of(mark: ArgMark) -> int:
        if style is MorphStyle.IMPLICIT_DECLENSIONS:
            return declensions.declension_of(mark.lemma)
        return 1

    def arg_suffix(mark: ArgMark) -> str:
        if mark.role not in ROLES:
            raise ValueError(f"unknown argument role {mark.role!r}")
        return paradigm.suffix(mark.role, mark.number, decl_of(mark))

    out = []
    for pos, form in enumerate(ts.tokens):
        mark = ts.marks.get(ts.provenance[pos])
        if isinstance(mark, ArgMark):
            out.append(_normalize_form(form, mark.upos) + arg_suffix(mark))
        elif isinstance(mark, VerbMark):
            if system is CaseSystem.SYNCRETIC:
                subj = next((a for a in mark.args if a.role == "nsubj"), None)
                out.append(form + (paradigm.syncretic[subj.number] if subj else ""))
            else:
                out.append(form + "".join(arg_suffix(a) for a in mark.args))
        else:
            out.append(form)
    return replace(ts, tokens=tuple(out))


@dataclass(frozen=True)
class VocabStat:
    name: str
    types: int
    tokens: int
    novel_types: int  # types absent from the first corpus in the comparison


def vocab_stats(corpora: Sequence[tuple[str, Iterable[Sequence[str]]]]) -> list[VocabStat]:
    """Distinct-token counts per corpus, with novelty relative to the first."""
    stats = []
    base_types: frozenset[str] | None = None
    for name, sentences in corpora:
        counts = Counter()
        for sent in sentences:
            counts.update(sent)
        types = frozenset(counts)
        if base_types is None:
            base_types = types
        stats.append(
            VocabStat(
                name=name,
                types=len(types),
                tokens=sum(counts.values()),
                novel_types=len(types - base_types),
            )
        )
    return stats
