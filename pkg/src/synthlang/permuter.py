"""Constituent reordering, word shuffling and verb agreement removal.

For each clause the three slots are the subject constituent, the object
constituent and the verb group (the verb plus its residue dependents, kept in
original relative order). Fixed and random schemes linearize the slots in the
requested subject/verb/object order, recursing into argument subtrees so that
nested clauses are reordered before being placed. Indirect objects travel
inside the verb group. Sentence-final punctuation is pinned in place for
every scheme except the full word shuffle.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from typing import Mapping

from .treebank import (
    Clause,
    DepSentence,
    NOMINAL_UPOS,
    Number,
    Token,
    detect_number,
    extract_clauses,
)

ORDERS = tuple("".join(p) for p in itertools.permutations("SVO"))

# Irregular finite forms whose number marking survives lemmatization.
SUPPLETIVE_NEUTRAL = {"is": "are", "was": "were", "has": "have", "does": "do"}


@dataclass(frozen=True)
class OrderScheme:
    """original | fixed(SVO-permutation) | random (one draw per sentence) | shuffle."""

    kind: str
    order: str | None = None

    def __post_init__(self):
        if self.kind not in ("original", "fixed", "random", "shuffle"):
            raise ValueError(f"unknown order scheme {self.kind!r}")
        if self.kind == "fixed":
            if self.order not in ORDERS:
                raise ValueError(f"fixed order must be a permutation of SVO, got {self.order!r}")
        elif self.order is not None:
            raise ValueError(f"{self.kind} scheme takes no order")

    @classmethod
    def original(cls) -> "OrderScheme":
        return cls("original")

    @classmethod
    def fixed(cls, order: str) -> "OrderScheme":
        return cls("fixed", order.upper())

    @classmethod
    def random_per_sentence(cls) -> "OrderScheme":
        return cls("random")

    @classmethod
    def shuffle_all(cls) -> "OrderScheme":
        return cls("shuffle")

    @classmethod
    def parse(cls, name: str) -> "OrderScheme":
        name = name.strip().lower()
        if name == "original":
            return cls.original()
        if name == "random":
            return cls.random_per_sentence()
        if name == "shuffle":
            return cls.shuffle_all()
        if name.upper() in ORDERS:
            return cls.fixed(name)
        raise ValueError(f"unknown order scheme {name!r}")

    @property
    def label(self) -> str:
        return self.order.lower() if self.kind == "fixed" else self.kind


@dataclass(frozen=True)
class ArgMark:
    """Case-marking annotation for a core-argument head."""

    role: str  # nsubj | dobj | iobj
    number: str  # sg | pl
    lemma: str
    upos: str
    number_defaulted: bool = False


@dataclass(frozen=True)
class VerbMark:
    """Agreement annotation for a clause verb: one entry per nominal core
    argument, in marker order (object, indirect object, subject)."""

    args: tuple[ArgMark, ...]


@dataclass(frozen=True)
class TransformedSentence:
    """Reordered surface tokens plus enough bookkeeping to audit and case-mark.

    `provenance[i]` is the 1-based input index of output token i (a bijection
    onto the input tokens). `marks` is keyed by input index and survives any
    reordering. `drawn_order` records the per-sentence draw under the random
    scheme, for the manifest.
    """

    tokens: tuple[str, ...]
    provenance: tuple[int, ...]
    marks: Mapping[int, ArgMark | VerbMark]
    drawn_order: str | None = None


def remove_agreement(sent: DepSentence) -> DepSentence:
    """Neutralize 3rd-singular verb inflection (says -> say, is -> are).

    Finite present-tense 3sg verbs are replaced by their lemma; the handful of
    suppletive forms keep tense but lose number. The Number feature is dropped
    from every modified token. Regular past and non-finite forms are left
    alone, since they carry no number marking.
    """
    new_tokens = []
    for tok in sent.tokens:
        new_tokens.append(_neutralize_verb(tok))
    return replace(sent, tokens=tuple(new_tokens))


def _neutralize_verb(tok: Token) -> Token:
    if tok.upos not in ("VERB", "AUX"):
        return tok
    lower = tok.form.lower()
    if lower in SUPPLETIVE_NEUTRAL:
        return _reform(tok, SUPPLETIVE_NEUTRAL[lower])
    feats = tok.feats
    third_sg_pres = (
        feats.get("Tense") == "Pres"
        and feats.get("Number") == "Sing"
        and feats.get("Person") == "3"
        and feats.get("VerbForm", "Fin") == "Fin"
    )
    if third_sg_pres or (not feats and tok.xpos == "VBZ"):
        return _reform(tok, tok.lemma)
    return tok


def _reform(tok: Token, new_form: str) -> Token:
    if tok.form[:1].isupper() and new_form[:1].islower():
        new_form = new_form[0].upper() + new_form[1:]
    feats = {k: v for k, v in tok.feats.items() if k != "Number"}
    return replace(tok, form=new_form, feats=feats)


def role_marks(sent: DepSentence, clauses: list[Clause]) -> dict[int, ArgMark | VerbMark]:
    """Case/agreement annotations keyed by input token index.

    Only nominal argument heads are marked; clausal arguments (e.g. a ccomp
    filling the object slot) contribute nothing to the verb's agreement.
    Unknown number defaults to singular and is flagged for the manifest.
    """
    marks: dict[int, ArgMark | VerbMark] = {}
    for clause in clauses:
        agreeing = []
        for role, cons in (
            ("dobj", clause.object),
            ("iobj", clause.iobject),
            ("nsubj", clause.subject),
        ):
            if cons is None:
                continue
            head = sent.token(cons.head)
            if head.upos not in NOMINAL_UPOS:
                continue
            number = detect_number(head)
            mark = ArgMark(
                role=role,
                number="pl" if number is Number.PL else "sg",
                lemma=head.lemma,
                upos=head.upos,
                number_defaulted=number is Number.UNKNOWN,
            )
            marks[cons.head] = mark
            agreeing.append(mark)
        marks[clause.verb] = VerbMark(args=tuple(agreeing))
    return marks


def _final_punct(sent: DepSentence) -> int | None:
    if len(sent.tokens) < 2:
        return None
    last = sent.tokens[-1]
    if last.upos == "PUNCT" or last.base_deprel == "punct":
        return last.index
    return None


def reorder(
    sent: DepSentence, scheme: OrderScheme, rng: random.Random | None = None
) -> TransformedSentence:
    """Linearize each clause's subject/verb-group/object slots per the scheme.

    The random scheme draws one of the six orders uniformly per sentence and
    applies it to every clause. Tokens outside any clause keep their position.
    """
    if scheme.kind == "shuffle":
        raise ValueError("use shuffle_all() for the word-shuffling scheme")
    clauses = extract_clauses(sent)
    marks = role_marks(sent, clauses)

    drawn = None
    if scheme.kind == "original":
        order = None
    elif scheme.kind == "fixed":
        order = scheme.order
    else:
        if rng is None:
            raise ValueError("random scheme needs a seeded rng")
        drawn = rng.choice(ORDERS)
        order = drawn

    if order is None:
        indices = [t.index for t in sent.tokens]
    else:
        indices = _linearize_tree(sent, {c.verb: c for c in clauses}, order)

    return TransformedSentence(
        tokens=tuple(sent.token(i).form for i in indices),
        provenance=tuple(indices),
        marks=marks,
        drawn_order=drawn,
    )


def _linearize_tree(sent: DepSentence, clauses: dict[int, Clause], order: str) -> list[int]:
    pinned = _final_punct(sent)
    if pinned == sent.root_index:
        pinned = None

    def lin(idx: int) -> list[int]:
        kids = [d for d in sent.children(idx) if d != pinned]
        clause = clauses.get(idx)
        if clause is None:
            return _merge(idx, kids)
        slot_heads = set()
        parts = {"S": [], "O": []}
        for key, cons in (("S", clause.subject), ("O", clause.object)):
            if cons is not None and cons.head != pinned:
                slot_heads.add(cons.head)
                parts[key] = lin(cons.head)
        verb_kids = [d for d in kids if d not in slot_heads]
        parts["V"] = _merge(idx, verb_kids)
        out: list[int] = []
        for slot in order:
            out.extend(parts[slot])
        return out

    def _merge(idx: int, kids: list[int]) -> list[int]:
        out = []
        for unit in sorted(kids + [idx]):
            out.extend([idx] if unit == idx else lin(unit))
        return out

    result = lin(sent.root_index)
    if pinned is not None:
        result.append(pinned)
    return result


def shuffle_all(sent: DepSentence, rng: random.Random) -> TransformedSentence:
    """Uniform random permutation of all tokens, punctuation included."""
    indices = [t.index for t in sent.tokens]
    rng.shuffle(indices)
    clauses = extract_clauses(sent)
    return TransformedSentence(
        tokens=tuple(sent.token(i).form for i in indices),
        provenance=tuple(indices),
        marks=role_marks(sent, clauses),
    )


def linearize(ts: TransformedSentence) -> str:
    return " ".join(ts.tokens)
