import itertools
import random
from pathlib import Path

import pytest
import torch

torch.set_num_threads(2)

# a miniature verb-initial language and its SVO counterpart, shaped like the
# real toy corpora but small enough for second-scale training in tests
VERBS = {"follows": "volgt", "sees": "ziet", "hears": "hoort", "finds": "vindt"}
NOUNS = {"cat": "kat", "dog": "hond", "bird": "vogel", "horse": "paard"}
ADJS = {"little": "kleine", "old": "oude"}


def _sentences():
    adj_options = [None] + sorted(ADJS)
    for verb, s_adj, s_noun, o_adj, o_noun in itertools.product(
        sorted(VERBS), adj_options, sorted(NOUNS), adj_options, sorted(NOUNS)
    ):
        def np_src(adj, noun):
            return ["the"] + ([adj] if adj else []) + [noun]

        def np_tgt(adj, noun):
            return ["de"] + ([ADJS[adj]] if adj else []) + [NOUNS[noun]]

        src = [verb] + np_src(s_adj, s_noun) + np_src(o_adj, o_noun)
        tgt = np_tgt(s_adj, s_noun) + [VERBS[verb]] + np_tgt(o_adj, o_noun)
        yield " ".join(src), " ".join(tgt)


def write_parallel(data_dir: Path, n_train=200, n_valid=40, n_test=40, seed=0):
    """Small patterned corpus directory in the generator's file layout."""
    rng = random.Random(seed)
    data_dir.mkdir(parents=True, exist_ok=True)
    pool = list(_sentences())
    sample = rng.sample(pool, n_train + n_valid + n_test)
    splits = (
        ("train", sample[:n_train]),
        ("valid", sample[n_train : n_train + n_valid]),
        ("test", sample[n_train + n_valid :]),
    )
    for prefix, pairs in splits:
        (data_dir / f"{prefix}.source.txt").write_text(
            "\n".join(s for s, _ in pairs) + "\n"
        )
        (data_dir / f"{prefix}.target.txt").write_text(
            "\n".join(t for _, t in pairs) + "\n"
        )
    return data_dir


@pytest.fixture()
def corpus_dir(tmp_path):
    return write_parallel(tmp_path / "mini")
