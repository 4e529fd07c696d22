"""Dependency treebank ingestion: CoNLL-U parsing, validation, clause extraction.

Sentences are immutable once constructed; everything here is a pure function,
so corpora can be processed in parallel without shared state.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

NOMINAL_UPOS = frozenset({"NOUN", "PROPN", "PRON"})
VERBAL_UPOS = frozenset({"VERB", "AUX"})

# Relation-label mapping for clause slots (base labels, subtype-insensitive).
SUBJECT_RELS = frozenset({"nsubj"})
OBJECT_RELS = frozenset({"obj", "dobj", "ccomp", "xcomp"})
IOBJECT_RELS = frozenset({"iobj"})
# Verbal elements that belong to a governing predicate rather than heading
# their own clause.
CHAIN_RELS = frozenset({"aux", "cop"})

SINGULAR_XPOS = frozenset({"NN", "NNP"})
PLURAL_XPOS = frozenset({"NNS", "NNPS"})


class Number(enum.Enum):
    SG = "sg"
    PL = "pl"
    UNKNOWN = "unknown"


class ConlluError(ValueError):
    """Malformed CoNLL-U input."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class Token:
    """One syntactic word. `head` is the 1-based index of the governor, 0 for root."""

    index: int
    form: str
    lemma: str
    upos: str
    feats: Mapping[str, str]
    head: int
    deprel: str
    xpos: str = "_"

    @property
    def base_deprel(self) -> str:
        return self.deprel.split(":", 1)[0]


@dataclass(frozen=True)
class DepSentence:
    tokens: tuple[Token, ...]
    sent_id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, index: int) -> Token:
        """1-based access."""
        return self.tokens[index - 1]

    @property
    def forms(self) -> tuple[str, ...]:
        return tuple(t.form for t in self.tokens)

    @cached_property
    def _children(self) -> dict[int, tuple[int, ...]]:
        table: dict[int, list[int]] = {}
        for t in self.tokens:
            table.setdefault(t.head, []).append(t.index)
        return {head: tuple(sorted(deps)) for head, deps in table.items()}

    def children(self, index: int) -> tuple[int, ...]:
        return self._children.get(index, ())

    @property
    def root_index(self) -> int:
        roots = self.children(0)
        if len(roots) != 1:
            raise ValueError(f"sentence {self.sent_id!r} does not have exactly one root")
        return roots[0]

    def subtree(self, index: int) -> frozenset[int]:
        """All token indices reachable from `index` via head links, inclusive."""
        out = {index}
        stack = [index]
        while stack:
            for dep in self.children(stack.pop()):
                if dep not in out:
                    out.add(dep)
                    stack.append(dep)
        return frozenset(out)


@dataclass(frozen=True)
class Constituent:
    head: int
    indices: frozenset[int]


@dataclass(frozen=True)
class Clause:
    """A verbal head with its core-argument constituents.

    `residue` holds the remaining immediate dependents of the verb (their
    subtree roots), in surface order. Auxiliaries, adjuncts and punctuation
    land here and keep their position relative to the verb.
    """

    verb: int
    subject: Constituent | None
    object: Constituent | None
    iobject: Constituent | None
    residue: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    rule: str
    token_index: int | None
    message: str


def _parse_feats(field: str) -> dict[str, str]:
    if field in ("_", ""):
        return {}
    feats = {}
    for item in field.split("|"):
        key, sep, value = item.partition("=")
        if sep:
            feats[key] = value
    return feats


def _format_feats(feats: Mapping[str, str]) -> str:
    if not feats:
        return "_"
    return "|".join(f"{k}={v}" for k, v in feats.items())


def parse_conllu(stream: str | Iterable[str]) -> list[DepSentence]:
    """Read CoNLL-U text into sentences.

    Multiword-token ranges (`1-2`) and empty nodes (`1.1`) are skipped; the
    retained columns are FORM, LEMMA, UPOS, XPOS, FEATS, HEAD and DEPREL.
    Raises ConlluError with a line number on structural problems; tree-level
    defects (cycles, multiple roots) are left for validate().
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)

    sentences: list[DepSentence] = []
    tokens: list[Token] = []
    sent_id = ""

    def flush():
        nonlocal tokens, sent_id
        if tokens:
            sentences.append(
                DepSentence(tokens=tuple(tokens), sent_id=sent_id or str(len(sentences) + 1))
            )
        tokens = []
        sent_id = ""

    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            flush()
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep and key.strip() == "sent_id":
                sent_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluError(f"expected 10 tab-separated columns, got {len(cols)}", line_no)
        ident = cols[0]
        if "-" in ident or "." in ident:
            continue  # multiword range / empty node
        try:
            index = int(ident)
        except ValueError:
            raise ConlluError(f"non-numeric token id {ident!r}", line_no) from None
        try:
            head = int(cols[6])
        except ValueError:
            raise ConlluError(f"non-numeric HEAD {cols[6]!r}", line_no) from None
        if head < 0:
            raise ConlluError(f"negative HEAD {head}", line_no)
        tokens.append(
            Token(
                index=index,
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                xpos=cols[4],
                feats=_parse_feats(cols[5]),
                head=head,
                deprel=cols[7],
            )
        )
    flush()
    return sentences


def serialize_conllu(sentences: Iterable[DepSentence]) -> str:
    """Inverse of parse_conllu on the retained columns (DEPS/MISC are `_`)."""
    blocks = []
    for sent in sentences:
        lines = [f"# sent_id = {sent.sent_id}"] if sent.sent_id else []
        for t in sent.tokens:
            lines.append(
                "\t".join(
                    [
                        str(t.index),
                        t.form,
                        t.lemma,
                        t.upos,
                        t.xpos,
                        _format_feats(t.feats),
                        str(t.head),
                        t.deprel,
                        "_",
                        "_",
                    ]
                )
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def validate(sent: DepSentence) -> list[Violation]:
    """Check the single-root / acyclicity / contiguity invariants.

    Violations are data, not errors: noisy parser output is reported, never
    raised, so callers can pass bad sentences through untouched.
    """
    violations = []
    n = len(sent.tokens)
    indices = [t.index for t in sent.tokens]
    if indices != list(range(1, n + 1)):
        violations.append(
            Violation("contiguous-indices", None, f"token ids are not 1..{n} in order")
        )
        return violations  # positional reasoning below assumes contiguity

    roots = []
    for t in sent.tokens:
        if not t.form:
            violations.append(Violation("empty-form", t.index, "empty FORM"))
        if not t.lemma:
            violations.append(Violation("empty-lemma", t.index, "empty LEMMA"))
        if t.head == t.index:
            violations.append(Violation("self-head", t.index, "token is its own head"))
        elif t.head > n:
            violations.append(
                Violation("head-range", t.index, f"head {t.head} beyond sentence of {n}")
            )
        if t.head == 0:
            roots.append(t.index)

    if len(roots) == 0:
        violations.append(Violation("no-root", None, "no token has head 0"))
    elif len(roots) > 1:
        violations.append(
            Violation("multiple-roots", roots[1], f"{len(roots)} tokens have head 0")
        )

    if violations:
        return violations

    # cycle check: follow head links from every token
    for t in sent.tokens:
        seen = {t.index}
        cur = t.head
        while cur != 0:
            if cur in seen:
                violations.append(Violation("cycle", t.index, "head chain never reaches root"))
                break
            seen.add(cur)
            cur = sent.token(cur).head
        if violations:
            break
    return violations


def detect_number(tok: Token) -> Number:
    """Grammatical number from FEATS, falling back on the noun POS tag."""
    feat = tok.feats.get("Number")
    if feat == "Sing":
        return Number.SG
    if feat == "Plur":
        return Number.PL
    if tok.xpos in PLURAL_XPOS:
        return Number.PL
    if tok.xpos in SINGULAR_XPOS:
        return Number.SG
    return Number.UNKNOWN


def is_clause_head(tok: Token) -> bool:
    return tok.upos in VERBAL_UPOS and tok.base_deprel not in CHAIN_RELS


def _pick_slot(sent: DepSentence, deps: list[int], rels: frozenset[str]) -> int | None:
    # leftmost dependent bearing one of the slot relations
    for dep in deps:
        if sent.token(dep).base_deprel in rels:
            return dep
    return None


def extract_clauses(sent: DepSentence) -> list[Clause]:
    """One Clause per verbal head, outermost-first.

    The subject/object/indirect-object slots each take the leftmost dependent
    bearing a matching relation; its constituent is the full subtree. Spare
    candidates (e.g. coordinated objects) stay in the residue.
    """
    clauses = []
    stack = [sent.root_index]
    visit_order = []
    while stack:
        idx = stack.pop()
        visit_order.append(idx)
        stack.extend(reversed(sent.children(idx)))

    for idx in visit_order:
        if not is_clause_head(sent.token(idx)):
            continue
        deps = list(sent.children(idx))
        slots: dict[str, Constituent | None] = {}
        for name, rels in (
            ("subject", SUBJECT_RELS),
            ("object", OBJECT_RELS),
            ("iobject", IOBJECT_RELS),
        ):
            head = _pick_slot(sent, deps, rels)
            if head is None:
                slots[name] = None
            else:
                slots[name] = Constituent(head=head, indices=sent.subtree(head))
                deps.remove(head)
        clauses.append(
            Clause(
                verb=idx,
                subject=slots["subject"],
                object=slots["object"],
                iobject=slots["iobject"],
                residue=tuple(deps),
            )
        )
    return clauses
