"""English-French challenge set closed under subject-object swap.

7,200 present-tense sentences over a 10-noun / 10-verb vocabulary where every
noun can plausibly fill either argument slot: 20 subject forms (10 lemmas x
sg/pl) x 18 object forms (a different lemma) x 10 verbs x 2 polarities.
Because the cross product is symmetric in the two arguments, the set contains
the reverse of every sentence, which is what makes it diagnostic: role
assignment can only come from structure, never from word meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .treebank import DepSentence, Token, serialize_conllu

AFFIRMATIVE = "affirmative"
NEGATIVE = "negative"
POLARITIES = (AFFIRMATIVE, NEGATIVE)
NUMBERS = ("sg", "pl")

_FR_VOWELS = "aeiouàâéèêëîïôöùûü"


@dataclass(frozen=True)
class NounEntry:
    lemma: str  # English singular, used as the lemma key
    en_pl: str
    fr_sg: str
    fr_pl: str
    feminine: bool = False
    elides: bool = False  # takes l' in the singular


@dataclass(frozen=True)
class VerbEntry:
    lemma: str  # English base form
    en_3sg: str
    fr_3sg: str
    fr_3pl: str


# English/French noun pairs; French gender and elision are fixed lexical
# facts checked in here rather than computed per run.
NOUNS = (
    NounEntry("president", "presidents", "président", "présidents"),
    NounEntry("man", "men", "homme", "hommes", elides=True),
    NounEntry("woman", "women", "femme", "femmes", feminine=True),
    NounEntry("minister", "ministers", "ministre", "ministres"),
    NounEntry("candidate", "candidates", "candidat", "candidats"),
    NounEntry("secretary", "secretaries", "secrétaire", "secrétaires"),
    NounEntry("commissioner", "commissioners", "commissaire", "commissaires"),
    NounEntry("child", "children", "enfant", "enfants", elides=True),
    NounEntry("teacher", "teachers", "enseignant", "enseignants", elides=True),
    NounEntry("student", "students", "étudiant", "étudiants", elides=True),
)

VERBS = (
    VerbEntry("thank", "thanks", "remercie", "remercient"),
    VerbEntry("support", "supports", "soutient", "soutiennent"),
    VerbEntry("represent", "represents", "représente", "représentent"),
    VerbEntry("defend", "defends", "défend", "défendent"),
    VerbEntry("welcome", "welcomes", "salue", "saluent"),
    VerbEntry("invite", "invites", "invite", "invitent"),
    VerbEntry("attack", "attacks", "attaque", "attaquent"),
    VerbEntry("respect", "respects", "respecte", "respectent"),
    VerbEntry("replace", "replaces", "remplace", "remplacent"),
    VerbEntry("exploit", "exploits", "exploite", "exploitent"),
)

_NOUN_BY_LEMMA = {n.lemma: n for n in NOUNS}
_VERB_BY_LEMMA = {v.lemma: v for v in VERBS}


@dataclass(frozen=True)
class ChallengeItem:
    subj_lemma: str
    subj_number: str
    obj_lemma: str
    obj_number: str
    verb: str
    polarity: str
    english: str
    french: str

    @property
    def key(self) -> tuple:
        return (
            self.subj_lemma,
            self.subj_number,
            self.obj_lemma,
            self.obj_number,
            self.verb,
            self.polarity,
        )


def _en_noun(lemma: str, number: str) -> str:
    entry = _NOUN_BY_LEMMA[lemma]
    return entry.lemma if number == "sg" else entry.en_pl


def english_realize(
    subj_lemma: str, subj_number: str, obj_lemma: str, obj_number: str, verb: str, polarity: str
) -> str:
    v = _VERB_BY_LEMMA[verb]
    subj = _en_noun(subj_lemma, subj_number)
    obj = _en_noun(obj_lemma, obj_number)
    if polarity == AFFIRMATIVE:
        predicate = v.en_3sg if subj_number == "sg" else v.lemma
    else:
        aux = "does" if subj_number == "sg" else "do"
        predicate = f"{aux} not {v.lemma}"
    return f"The {subj} {predicate} the {obj}."


def _fr_np(lemma: str, number: str, capitalize: bool) -> str:
    entry = _NOUN_BY_LEMMA[lemma]
    if number == "pl":
        det, noun = "les", entry.fr_pl
    elif entry.elides:
        det, noun = "l'", entry.fr_sg
    elif entry.feminine:
        det, noun = "la", entry.fr_sg
    else:
        det, noun = "le", entry.fr_sg
    if capitalize:
        det = det[0].upper() + det[1:]
    return det + noun if det.endswith("'") else f"{det} {noun}"


def french_realize(
    subj_lemma: str, subj_number: str, obj_lemma: str, obj_number: str, verb: str, polarity: str
) -> str:
    v = _VERB_BY_LEMMA[verb]
    form = v.fr_3sg if subj_number == "sg" else v.fr_3pl
    if polarity == AFFIRMATIVE:
        predicate = form
    else:
        ne = "n'" if form[0] in _FR_VOWELS else "ne "
        predicate = f"{ne}{form} pas"
    subj = _fr_np(subj_lemma, subj_number, capitalize=True)
    obj = _fr_np(obj_lemma, obj_number, capitalize=False)
    return f"{subj} {predicate} {obj}."


def _make_item(
    subj_lemma: str, subj_number: str, obj_lemma: str, obj_number: str, verb: str, polarity: str
) -> ChallengeItem:
    return ChallengeItem(
        subj_lemma=subj_lemma,
        subj_number=subj_number,
        obj_lemma=obj_lemma,
        obj_number=obj_number,
        verb=verb,
        polarity=polarity,
        english=english_realize(subj_lemma, subj_number, obj_lemma, obj_number, verb, polarity),
        french=french_realize(subj_lemma, subj_number, obj_lemma, obj_number, verb, polarity),
    )


def generate_challenge() -> list[ChallengeItem]:
    """The full cross product in deterministic lexicographic order."""
    noun_lemmas = sorted(n.lemma for n in NOUNS)
    verb_lemmas = sorted(v.lemma for v in VERBS)
    items = []
    for subj_lemma in noun_lemmas:
        for subj_number in NUMBERS:
            for obj_lemma in noun_lemmas:
                if obj_lemma == subj_lemma:
                    continue
                for obj_number in NUMBERS:
                    for verb in verb_lemmas:
                        for polarity in POLARITIES:
                            items.append(
                                _make_item(
                                    subj_lemma, subj_number, obj_lemma, obj_number, verb, polarity
                                )
                            )
    return items


def reverse_of(item: ChallengeItem) -> ChallengeItem:
    """Swap subject and object (lemma and number); verb and polarity stay."""
    return _make_item(
        item.obj_lemma, item.obj_number, item.subj_lemma, item.subj_number, item.verb, item.polarity
    )


def to_dep_sentence(item: ChallengeItem, sent_id: str = "") -> DepSentence:
    """The known parse of the English side, for feeding the transform pipeline."""
    v = _VERB_BY_LEMMA[item.verb]
    subj = _en_noun(item.subj_lemma, item.subj_number)
    obj = _en_noun(item.obj_lemma, item.obj_number)
    subj_feats = {"Number": "Sing" if item.subj_number == "sg" else "Plur"}
    obj_feats = {"Number": "Sing" if item.obj_number == "sg" else "Plur"}
    noun_xpos = {"sg": "NN", "pl": "NNS"}

    def det(i: int, head: int, form: str = "the") -> Token:
        return Token(i, form, "the", "DET", {"Definite": "Def", "PronType": "Art"}, head, "det", "DT")

    tokens: list[Token]
    if item.polarity == AFFIRMATIVE:
        verb_form = v.en_3sg if item.subj_number == "sg" else v.lemma
        verb_feats = {"Mood": "Ind", "Tense": "Pres", "VerbForm": "Fin"}
        if item.subj_number == "sg":
            verb_feats = {"Mood": "Ind", "Number": "Sing", "Person": "3", "Tense": "Pres", "VerbForm": "Fin"}
        tokens = [
            det(1, 2, "The"),
            Token(2, subj, item.subj_lemma, "NOUN", subj_feats, 3, "nsubj", noun_xpos[item.subj_number]),
            Token(3, verb_form, v.lemma, "VERB", verb_feats, 0, "root",
                  "VBZ" if item.subj_number == "sg" else "VBP"),
            det(4, 5),
            Token(5, obj, item.obj_lemma, "NOUN", obj_feats, 3, "obj", noun_xpos[item.obj_number]),
            Token(6, ".", ".", "PUNCT", {}, 3, "punct", "."),
        ]
    else:
        aux = "does" if item.subj_number == "sg" else "do"
        aux_feats = {"Mood": "Ind", "Tense": "Pres", "VerbForm": "Fin"}
        if item.subj_number == "sg":
            aux_feats = {"Mood": "Ind", "Number": "Sing", "Person": "3", "Tense": "Pres", "VerbForm": "Fin"}
        tokens = [
            det(1, 2, "The"),
            Token(2, subj, item.subj_lemma, "NOUN", subj_feats, 5, "nsubj", noun_xpos[item.subj_number]),
            Token(3, aux, "do", "AUX", aux_feats, 5, "aux", "VBZ" if item.subj_number == "sg" else "VBP"),
            Token(4, "not", "not", "PART", {"Polarity": "Neg"}, 5, "advmod", "RB"),
            Token(5, v.lemma, v.lemma, "VERB", {"VerbForm": "Inf"}, 0, "root", "VB"),
            det(6, 7),
            Token(7, obj, item.obj_lemma, "NOUN", obj_feats, 5, "obj", noun_xpos[item.obj_number]),
            Token(8, ".", ".", "PUNCT", {}, 5, "punct", "."),
        ]
    return DepSentence(tokens=tuple(tokens), sent_id=sent_id)


def write_challenge(
    items: list[ChallengeItem], out_dir: str | Path, conllu: bool = False
) -> None:
    """challenge.en / challenge.fr line-aligned, plus a metadata TSV with the
    line index of each sentence's reverse."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    line_of = {item.key: i for i, item in enumerate(items)}
    _write(out / "challenge.en", (i.english for i in items))
    _write(out / "challenge.fr", (i.french for i in items))
    rows = ["subj\tsubj_number\tobj\tobj_number\tverb\tpolarity\treverse_line"]
    for item in items:
        rows.append(
            "\t".join(
                [
                    item.subj_lemma,
                    item.subj_number,
                    item.obj_lemma,
                    item.obj_number,
                    item.verb,
                    item.polarity,
                    str(line_of[reverse_of(item).key]),
                ]
            )
        )
    _write(out / "challenge.tsv", rows)
    if conllu:
        sentences = [to_dep_sentence(item, sent_id=str(i + 1)) for i, item in enumerate(items)]
        (out / "challenge.en.conllu").write_text(serialize_conllu(sentences), encoding="utf-8")


def _write(path: Path, lines: Iterable[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
