import random
from collections import Counter

import pytest

from synthlang.toygrammar import (
    DEFAULT_LEXICON,
    DecodeError,
    LexEntry,
    ToyLexicon,
    ToySentence,
    ToyVariant,
    draw_realization,
    enumerate_sentences,
    generate_corpus,
    realize_pair,
    realize_source,
    recover_roles,
    split_corpus,
    split_markers,
    write_corpus,
)

# the example sentence: subject "the little cat", object "the friendly dog",
# verb "follows"
EXAMPLE = ToySentence(verb=0, subj_noun=0, subj_adj=0, obj_noun=1, obj_adj=1)


@pytest.fixture(scope="module")
def corpora():
    return {
        variant: generate_corpus(DEFAULT_LEXICON, variant, 10000, seed=7)
        for variant in ToyVariant
    }


class TestLexicon:
    def test_counts_enforced(self):
        with pytest.raises(ValueError):
            ToyLexicon(
                nouns=DEFAULT_LEXICON.nouns[:5],
                verbs=DEFAULT_LEXICON.verbs,
                adjectives=DEFAULT_LEXICON.adjectives,
                determiner=DEFAULT_LEXICON.determiner,
            )

    def test_distinct_forms_enforced(self):
        dup = DEFAULT_LEXICON.nouns[:5] + (LexEntry("cat", "poes"),)
        with pytest.raises(ValueError):
            ToyLexicon(
                nouns=dup,
                verbs=DEFAULT_LEXICON.verbs,
                adjectives=DEFAULT_LEXICON.adjectives,
                determiner=DEFAULT_LEXICON.determiner,
            )


class TestEnumerate:
    def test_language_size(self):
        assert len(enumerate_sentences(DEFAULT_LEXICON)) == 10584
        assert 10584 == 6 * 42 * 42

    def test_no_adjective_floor(self):
        bare = [
            s
            for s in enumerate_sentences(DEFAULT_LEXICON)
            if s.subj_adj is None and s.obj_adj is None
        ]
        assert len(bare) == 6 * 6 * 6

    def test_all_have_both_arguments(self):
        for s in enumerate_sentences(DEFAULT_LEXICON):
            assert s.subj_noun is not None and s.obj_noun is not None

    def test_all_distinct(self):
        sentences = enumerate_sentences(DEFAULT_LEXICON)
        assert len({s.key for s in sentences}) == len(sentences)


class TestRealize:
    def test_fixed_vso(self):
        src, _ = realize_pair(EXAMPLE, ToyVariant.FIXED_VSO)
        assert src == "follows the little cat the friendly dog"

    def test_fixed_vos(self):
        src, _ = realize_pair(EXAMPLE, ToyVariant.FIXED_VOS)
        assert src == "follows the friendly dog the little cat"

    def test_mixed_case_vos_draw(self):
        rng = random.Random(0)
        drawn = None
        while drawn is None or drawn.order != "VOS":
            drawn = draw_realization(EXAMPLE, ToyVariant.MIXED_CASE, rng)
        assert realize_source(DEFAULT_LEXICON, drawn) == (
            "follows the friendly dog#O the little cat#S"
        )

    def test_mixed_case_vso_draw(self):
        rng = random.Random(0)
        drawn = None
        while drawn is None or drawn.order != "VSO":
            drawn = draw_realization(EXAMPLE, ToyVariant.MIXED_CASE, rng)
        assert realize_source(DEFAULT_LEXICON, drawn) == (
            "follows the little cat#S the friendly dog#O"
        )

    def test_target_always_svo(self):
        for variant in ToyVariant:
            _, tgt = realize_pair(EXAMPLE, variant, random.Random(1))
            assert tgt == "de kleine kat volgt de vriendelijke hond"

    def test_no_adjectives(self):
        bare = ToySentence(verb=0, subj_noun=0, subj_adj=None, obj_noun=1, obj_adj=None)
        src, tgt = realize_pair(bare, ToyVariant.FIXED_VSO)
        assert src == "follows the cat the dog"
        assert tgt == "de kat volgt de hond"


class TestGenerateCorpus:
    def test_sizes_and_uniqueness(self, corpora):
        for corpus in corpora.values():
            assert len(corpus) == 10000
            assert len({p.sentence.key for p in corpus.pairs}) == 10000

    def test_full_language(self):
        corpus = generate_corpus(DEFAULT_LEXICON, ToyVariant.FIXED_VSO, 10584, seed=1)
        assert len(corpus) == 10584

    def test_empty(self):
        assert len(generate_corpus(DEFAULT_LEXICON, ToyVariant.FIXED_VSO, 0, seed=1)) == 0

    def test_oversample_rejected(self):
        with pytest.raises(ValueError):
            generate_corpus(DEFAULT_LEXICON, ToyVariant.FIXED_VSO, 10585, seed=1)

    def test_same_abstract_sample_across_variants(self, corpora):
        keys = {
            variant: [p.sentence.key for p in corpus.pairs]
            for variant, corpus in corpora.items()
        }
        assert keys[ToyVariant.FIXED_VSO] == keys[ToyVariant.FIXED_VOS]
        assert keys[ToyVariant.FIXED_VSO] == keys[ToyVariant.MIXED_CASE]

    def test_targets_identical_across_variants(self, corpora):
        targets = {
            variant: [p.target for p in corpus.pairs] for variant, corpus in corpora.items()
        }
        assert targets[ToyVariant.FIXED_VSO] == targets[ToyVariant.FIXED_VOS]
        assert targets[ToyVariant.FIXED_VSO] == targets[ToyVariant.MIXED_CASE]

    def test_deterministic(self):
        a = generate_corpus(DEFAULT_LEXICON, ToyVariant.MIXED_CASE, 500, seed=3)
        b = generate_corpus(DEFAULT_LEXICON, ToyVariant.MIXED_CASE, 500, seed=3)
        assert a == b

    def test_mixed_order_draw_balance(self, corpora):
        counts = Counter(p.sentence.order for p in corpora[ToyVariant.MIXED_CASE].pairs)
        assert abs(counts["VSO"] / 10000 - 0.5) < 0.02
        assert abs(counts["VOS"] / 10000 - 0.5) < 0.02


class TestSplit:
    def test_80_10_10(self, corpora):
        train, valid, test = split_corpus(corpora[ToyVariant.FIXED_VSO], (0.8, 0.1, 0.1), seed=7)
        assert (len(train), len(valid), len(test)) == (8000, 1000, 1000)
        keys = lambda c: {p.sentence.key for p in c.pairs}
        assert not (keys(train) & keys(valid))
        assert not (keys(train) & keys(test))
        assert not (keys(valid) & keys(test))

    def test_ten_pairs(self):
        corpus = generate_corpus(DEFAULT_LEXICON, ToyVariant.FIXED_VSO, 10, seed=2)
        train, valid, test = split_corpus(corpus, (0.8, 0.1, 0.1), seed=2)
        assert (len(train), len(valid), len(test)) == (8, 1, 1)

    def test_same_seed_identical(self, corpora):
        corpus = corpora[ToyVariant.FIXED_VSO]
        a = split_corpus(corpus, (0.8, 0.1, 0.1), seed=5)
        b = split_corpus(corpus, (0.8, 0.1, 0.1), seed=5)
        assert a == b

    def test_split_shared_across_variants(self, corpora):
        split_keys = {}
        for variant, corpus in corpora.items():
            train, valid, test = split_corpus(corpus, (0.8, 0.1, 0.1), seed=7)
            split_keys[variant] = [
                {p.sentence.key for p in part.pairs} for part in (train, valid, test)
            ]
        assert split_keys[ToyVariant.FIXED_VSO] == split_keys[ToyVariant.FIXED_VOS]
        assert split_keys[ToyVariant.FIXED_VSO] == split_keys[ToyVariant.MIXED_CASE]

    def test_bad_ratios(self, corpora):
        with pytest.raises(ValueError):
            split_corpus(corpora[ToyVariant.FIXED_VSO], (0.8, 0.1, 0.2), seed=1)


class TestRecoverRoles:
    def test_example_vso_with_markers(self):
        roles = recover_roles(
            "follows the little cat#S the friendly dog#O", ToyVariant.MIXED_CASE
        )
        assert (roles.subject, roles.object) == ("cat", "dog")

    def test_example_vos_positional(self):
        roles = recover_roles("follows the friendly dog the little cat", ToyVariant.FIXED_VOS)
        assert (roles.subject, roles.object) == ("cat", "dog")

    def test_stripped_mixed_case_ambiguous(self):
        with pytest.raises(DecodeError):
            recover_roles("follows the little cat the friendly dog", ToyVariant.MIXED_CASE)

    def test_not_verb_initial(self):
        with pytest.raises(DecodeError):
            recover_roles("the cat follows the dog", ToyVariant.FIXED_VSO)

    def test_ground_truth_agreement_100_percent(self, corpora):
        for variant, corpus in corpora.items():
            lex = corpus.lexicon
            for p in corpus.pairs:
                roles = recover_roles(p.source, variant)
                assert roles.subject.removesuffix("#S") == lex.nouns[p.sentence.subj_noun].src
                assert roles.object.removesuffix("#O") == lex.nouns[p.sentence.obj_noun].src

    def test_swapped_pair_identical_when_stripped(self):
        # role-swapped sentences realized with opposite orders collapse to the
        # same string once the case markers are removed
        swapped = ToySentence(verb=0, subj_noun=1, subj_adj=1, obj_noun=0, obj_adj=0)
        a = realize_source(
            DEFAULT_LEXICON, ToySentence(**{**EXAMPLE.__dict__, "order": "VSO", "case_marked": True})
        )
        b = realize_source(
            DEFAULT_LEXICON, ToySentence(**{**swapped.__dict__, "order": "VOS", "case_marked": True})
        )
        strip = lambda s: s.replace("#S", "").replace("#O", "")
        assert a != b
        assert strip(a) == strip(b)


class TestOutputFiles:
    def test_written_files_align(self, tmp_path):
        corpus = generate_corpus(DEFAULT_LEXICON, ToyVariant.MIXED_CASE, 50, seed=4)
        write_corpus(corpus, tmp_path, prefix="full")
        src = (tmp_path / "full.source.txt").read_text().splitlines()
        tgt = (tmp_path / "full.target.txt").read_text().splitlines()
        roles = (tmp_path / "full.roles.tsv").read_text().splitlines()
        assert len(src) == len(tgt) == 50
        assert roles[0] == "ordinal\torder\tsubject\tobject"
        assert len(roles) == 51
        ordinal, order, subj, obj = roles[1].split("\t")
        assert order in ("VSO", "VOS")
        recovered = recover_roles(src[0], ToyVariant.MIXED_CASE)
        assert (recovered.subject, recovered.object) == (subj, obj)

    def test_split_markers(self):
        assert split_markers("follows the cat#S the dog#O") == "follows the cat #S the dog #O"
        corpus = generate_corpus(DEFAULT_LEXICON, ToyVariant.MIXED_CASE, 5, seed=4)
        for p in corpus.pairs:
            detached = split_markers(p.source)
            assert "#S" in detached.split() and "#O" in detached.split()
