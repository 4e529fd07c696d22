import hashlib
import json
import math

import pytest

from corpusgen import generate_treebank
from synthlang.morphology import CaseSystem, DeclensionMap, MorphStyle
from synthlang.permuter import OrderScheme
from synthlang.pipeline import (
    DataError,
    TransformSpec,
    run_transform,
    score,
    subset,
    transform_file,
)
from synthlang.treebank import parse_conllu, serialize_conllu


def spec(order="original", case="none", style="overt", seed=0, agreement_removal=True):
    return TransformSpec(
        order=OrderScheme.parse(order),
        case=CaseSystem(case),
        style=MorphStyle(style),
        seed=seed,
        agreement_removal=agreement_removal,
    )


@pytest.fixture(scope="module")
def small_corpus():
    sentences, _ = generate_treebank(120, seed=21)
    targets = [f"cible {i}" for i in range(len(sentences))]
    return sentences, targets


class TestTransformSpec:
    def test_syncretic_requires_overt(self):
        with pytest.raises(ValueError):
            spec(case="syncretic", style="implicit")

    def test_roundtrip_dict(self):
        s = spec(order="sov", case="unambiguous", style="implicit-declensions", seed=9)
        assert TransformSpec.from_dict(s.to_dict()) == s

    def test_unknown_fields_rejected(self):
        with pytest.raises(ValueError):
            TransformSpec.from_dict({"order": "sov", "cheese": 1})


class TestRunTransform:
    def test_identity_spec_reproduces_input(self, small_corpus):
        sentences, targets = small_corpus
        result = run_transform(sentences, spec(agreement_removal=False), targets)
        assert result.source_lines == [" ".join(s.forms) for s in sentences]
        assert result.target_lines == targets

    def test_table2_sov(self, table2_sentence):
        result = run_transform([table2_sentence], spec(order="sov"))
        assert result.source_lines == [
            "The woman her sisters her often invited for dinner say ."
        ]

    def test_target_side_untouched_for_every_spec(self, small_corpus):
        sentences, targets = small_corpus
        digest = hashlib.sha256("\n".join(targets).encode()).hexdigest()
        for s in (
            spec(order="sov"),
            spec(order="random", case="unambiguous", style="implicit", seed=1),
            spec(order="shuffle", seed=2),
        ):
            result = run_transform(sentences, s, targets)
            assert hashlib.sha256("\n".join(result.target_lines).encode()).hexdigest() == digest

    def test_line_count_preserved(self, small_corpus):
        sentences, targets = small_corpus
        for s in (spec(), spec(order="vos"), spec(order="shuffle", seed=5)):
            result = run_transform(sentences, s, targets)
            assert len(result.source_lines) == len(sentences)

    def test_deterministic_reruns(self, small_corpus):
        sentences, targets = small_corpus
        s = spec(order="random", case="unambiguous", style="implicit-declensions", seed=42)
        a = run_transform(sentences, s, targets, corpus_name="c")
        b = run_transform(sentences, s, targets, corpus_name="c")
        assert a.source_lines == b.source_lines
        assert a.manifest.to_json() == b.manifest.to_json()

    def test_misaligned_inputs_rejected(self, small_corpus):
        sentences, targets = small_corpus
        with pytest.raises(DataError):
            run_transform(sentences, spec(), targets[:-1])

    def test_invalid_sentences_pass_through(self, table2_sentence):
        bad = parse_conllu(
            "1\tA\ta\tDET\tDT\t_\t2\tdet\t_\t_\n"
            "2\tB\tb\tNOUN\tNN\t_\t0\troot\t_\t_\n"
            "3\tC\tc\tVERB\tVBZ\t_\t0\troot\t_\t_\n"
        )[0]
        result = run_transform([table2_sentence, bad], spec(order="sov"))
        assert result.source_lines[1] == "A B C"
        assert result.manifest.counts["passthrough"] == 1
        assert len(result.source_lines) == 2

    def test_manifest_draws_recorded(self, small_corpus):
        sentences, targets = small_corpus
        result = run_transform(sentences, spec(order="random", seed=3), targets)
        assert len(result.manifest.draws) == len(sentences)
        orders = {d for d in result.manifest.draws if d is not None}
        assert orders <= {"SVO", "SOV", "VSO", "VOS", "OSV", "OVS"}
        fixed = run_transform(sentences, spec(order="sov"), targets)
        assert set(fixed.manifest.draws) == {None}

    def test_number_default_counted(self):
        # a featureless, untagged noun head forces the sg default
        text = (
            "1\tsheep\tsheep\tNOUN\t_\t_\t2\tnsubj\t_\t_\n"
            "2\truns\trun\tVERB\t_\t_\t0\troot\t_\t_\n"
        )
        result = run_transform(parse_conllu(text), spec(case="unambiguous"))
        assert result.manifest.counts["number_defaulted"] == 1
        assert result.source_lines == ["sheep.nsubj.sg runs.nsubj.sg"]

    def test_declension_map_reused(self, small_corpus):
        sentences, targets = small_corpus
        s = spec(order="sov", case="unambiguous", style="implicit-declensions", seed=8)
        first = run_transform(sentences, s, targets, corpus_name="train")
        again = run_transform(
            sentences, s, targets, corpus_name="test", declensions=first.declensions
        )
        # same map, same suffixes, even though the corpus name (and hence any
        # freshly drawn map) would differ
        fresh = run_transform(sentences, s, targets, corpus_name="test")
        assert again.source_lines == first.source_lines
        assert fresh.declensions != first.declensions


class TestTransformFile:
    def test_files_and_manifest(self, tmp_path, small_corpus):
        sentences, targets = small_corpus
        src = tmp_path / "in.conllu"
        tgt = tmp_path / "in.fr"
        src.write_text(serialize_conllu(sentences), encoding="utf-8")
        tgt.write_text("\n".join(targets) + "\n", encoding="utf-8")
        out = tmp_path / "out"
        s = spec(order="sov", case="unambiguous", style="implicit-declensions", seed=4)
        transform_file(src, s, target_path=tgt, out_dir=out, corpus_name="mini")
        assert (out / "source.txt").read_text(encoding="utf-8").count("\n") == len(sentences)
        assert (out / "target.txt").read_text(encoding="utf-8") == tgt.read_text(encoding="utf-8")
        manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["spec"]["order"] == "sov"
        assert manifest["counts"]["sentences"] == len(sentences)
        assert (out / "declensions.tsv").exists()

    def test_manifest_spec_replays_byte_identical(self, tmp_path, small_corpus):
        sentences, targets = small_corpus
        src = tmp_path / "in.conllu"
        src.write_text(serialize_conllu(sentences), encoding="utf-8")
        out1, out2 = tmp_path / "a", tmp_path / "b"
        transform_file(src, spec(order="random", seed=11), out_dir=out1, corpus_name="m")
        manifest = json.loads((out1 / "manifest.json").read_text(encoding="utf-8"))
        replay = TransformSpec.from_dict(manifest["spec"])
        transform_file(src, replay, out_dir=out2, corpus_name="m")
        assert (out1 / "source.txt").read_bytes() == (out2 / "source.txt").read_bytes()

    def test_declension_file_roundtrip(self, tmp_path, small_corpus):
        sentences, _ = small_corpus
        src = tmp_path / "in.conllu"
        src.write_text(serialize_conllu(sentences), encoding="utf-8")
        s = spec(order="sov", case="unambiguous", style="implicit-declensions", seed=4)
        out1 = tmp_path / "train"
        result = transform_file(src, s, out_dir=out1, corpus_name="train")
        out2 = tmp_path / "test"
        transform_file(
            src, s, out_dir=out2, corpus_name="test", declension_path=out1 / "declensions.tsv"
        )
        assert (out2 / "source.txt").read_bytes() == (out1 / "source.txt").read_bytes()
        assert DeclensionMap.load(out1 / "declensions.tsv") == result.declensions


class TestSubset:
    def _pairs(self, n):
        return [(f"src {i}", f"tgt {i}") for i in range(n)]

    def test_disjoint_sizes(self):
        train, heldout = subset(self._pairs(20000), size=10000, heldout=5000, seed=1)
        assert len(train) == 10000
        assert len(heldout) == 5000
        assert not (set(train) & set(heldout))

    def test_heldout_shared_across_sizes(self):
        pairs = self._pairs(30000)
        _, heldout_a = subset(pairs, size=10000, heldout=5000, seed=9)
        _, heldout_b = subset(pairs, size=20000, heldout=5000, seed=9)
        assert heldout_a == heldout_b

    def test_training_sets_nested(self):
        pairs = self._pairs(30000)
        train_small, _ = subset(pairs, size=5000, heldout=5000, seed=9)
        train_big, _ = subset(pairs, size=20000, heldout=5000, seed=9)
        assert set(train_small) <= set(train_big)

    def test_size_zero(self):
        train, heldout = subset(self._pairs(6000), size=0, heldout=5000, seed=2)
        assert train == []
        assert len(heldout) == 5000

    def test_same_seed_identical(self):
        pairs = self._pairs(7000)
        assert subset(pairs, 1000, 5000, seed=3) == subset(pairs, 1000, 5000, seed=3)

    def test_insufficient_corpus(self):
        with pytest.raises(DataError):
            subset(self._pairs(14999), size=10000, heldout=5000, seed=1)


GOLDEN_HYPS = [
    "the cat sat on the mat",
    "d c b a",
    "a b d c",
    "the dog chased the cat",
    "one two three four five extra",
    "alpha beta gamma",
    "x y z",
    "la la land is here",
    "he said hello to her",
    "the quick brown fox jumps over the lazy dog",
]
GOLDEN_REFS = [
    "the cat sat on the mat",
    "a b c d",
    "a b c d",
    "the cat chased the dog",
    "one two three four five",
    "alpha beta gamma delta",
    "p q r",
    "la la land was there",
    "he said goodbye to her",
    "the quick brown fox jumped over a lazy dog",
]
# frozen from the in-test oracle (pair enumeration + metric formula)
GOLDEN_REPORT = {
    "accuracy": 0.1,
    "bleu": 47.72199551239855,
    "ribes": 67.20949987570029,
    "n_sentences": 10,
}
GOLDEN_PER_SENTENCE = [
    1.0, 0.0, 0.833333, 0.2, 0.955443, 0.967216, 0.0, 0.880112, 0.945742, 0.939104,
]


def oracle_unique_word_ribes(hyp: str, ref: str) -> float:
    """Independent scorer for pairs whose overlapping words are unambiguous."""
    hyp_t, ref_t = hyp.split(), ref.split()
    pairs = [
        (i, ref_t.index(w))
        for i, w in enumerate(hyp_t)
        if hyp_t.count(w) == 1 and ref_t.count(w) == 1
    ]
    if len(pairs) < 2:
        return 0.0
    pos = [r for _, r in pairs]
    k = len(pos)
    concordant = sum(1 for a in range(k - 1) for b in range(a + 1, k) if pos[a] < pos[b])
    nkt = concordant / (k * (k - 1) / 2)
    bp = min(1.0, math.exp(1 - len(ref_t) / len(hyp_t)))
    return nkt * (k / len(hyp_t)) ** 0.25 * bp**0.10


class TestScore:
    def _write(self, tmp_path, hyps, refs):
        h = tmp_path / "hyp.txt"
        r = tmp_path / "ref.txt"
        h.write_text("\n".join(hyps) + "\n", encoding="utf-8")
        r.write_text("\n".join(refs) + "\n", encoding="utf-8")
        return h, r

    def test_identical_files(self, tmp_path):
        h, r = self._write(tmp_path, GOLDEN_REFS, GOLDEN_REFS)
        report = score(h, r)
        assert report.accuracy == 1.0
        assert report.bleu == pytest.approx(100.0)
        assert report.ribes == pytest.approx(100.0)

    def test_reversed_tokens_zero_ribes(self, tmp_path):
        refs = ["a b c d", "p q r s t"]
        hyps = [" ".join(reversed(x.split())) for x in refs]
        h, r = self._write(tmp_path, hyps, refs)
        assert score(h, r).ribes == 0.0

    def test_golden_mini_suite(self, tmp_path):
        h, r = self._write(tmp_path, GOLDEN_HYPS, GOLDEN_REFS)
        report = score(h, r)
        assert report.to_dict() == pytest.approx(GOLDEN_REPORT)
        assert list(report.per_sentence_ribes) == pytest.approx(GOLDEN_PER_SENTENCE, abs=1e-6)
        for hyp, ref, got in zip(GOLDEN_HYPS, GOLDEN_REFS, report.per_sentence_ribes):
            overlapping_unambiguous = all(
                hyp.split().count(w) == 1 and ref.split().count(w) <= 1 for w in hyp.split()
            )
            if overlapping_unambiguous:
                assert got == pytest.approx(oracle_unique_word_ribes(hyp, ref))

    def test_misaligned_files(self, tmp_path):
        h, r = self._write(tmp_path, ["a", "b"], ["a"])
        with pytest.raises(DataError):
            score(h, r)
