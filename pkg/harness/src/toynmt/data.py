"""Toy corpus loading and batching.

Consumes the plain-text corpus directories written by the corpus generator
CLI: `<prefix>.source.txt` / `<prefix>.target.txt` for the train/valid/test
prefixes. Word-level vocabulary, no subwords; the vocabulary is built from
the training split and the other splits must not introduce new words.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import torch

PAD, BOS, EOS = 0, 1, 2
SPECIALS = ("<pad>", "<bos>", "<eos>")


class Vocab:
    def __init__(self, sentences: list[list[str]]):
        words = sorted({w for sent in sentences for w in sent})
        self.itos = list(SPECIALS) + words
        self.stoi = {w: i for i, w in enumerate(self.itos)}

    def __len__(self) -> int:
        return len(self.itos)

    def encode(self, tokens: list[str]) -> list[int]:
        return [self.stoi[t] for t in tokens]

    def decode(self, ids: list[int]) -> list[str]:
        out = []
        for i in ids:
            if i == EOS:
                break
            if i not in (PAD, BOS):
                out.append(self.itos[i])
        return out

    def missing(self, sentences: list[list[str]]) -> set[str]:
        return {w for sent in sentences for w in sent if w not in self.stoi}


@dataclass
class Split:
    sources: list[list[str]]
    targets: list[list[str]]

    def __len__(self) -> int:
        return len(self.sources)


@dataclass
class Corpus:
    train: Split
    valid: Split
    test: Split
    src_vocab: Vocab
    tgt_vocab: Vocab


def _read_lines(path: Path) -> list[list[str]]:
    return [line.split() for line in path.read_text(encoding="utf-8").splitlines()]


def _read_split(data_dir: Path, prefix: str) -> Split:
    sources = _read_lines(data_dir / f"{prefix}.source.txt")
    targets = _read_lines(data_dir / f"{prefix}.target.txt")
    if len(sources) != len(targets):
        raise ValueError(f"{prefix}: {len(sources)} source vs {len(targets)} target lines")
    return Split(sources, targets)


def load_corpus(data_dir: str | Path) -> Corpus:
    data_dir = Path(data_dir)
    train = _read_split(data_dir, "train")
    valid = _read_split(data_dir, "valid")
    test = _read_split(data_dir, "test")
    src_vocab = Vocab(train.sources)
    tgt_vocab = Vocab(train.targets)
    for name, split in (("valid", valid), ("test", test)):
        unknown = src_vocab.missing(split.sources) | tgt_vocab.missing(split.targets)
        if unknown:
            raise ValueError(
                f"vocabulary mismatch: {name} split introduces {sorted(unknown)[:5]}"
            )
    return Corpus(train, valid, test, src_vocab, tgt_vocab)


def _pad_batch(rows: list[list[int]]) -> torch.Tensor:
    width = max(len(r) for r in rows)
    return torch.tensor([r + [PAD] * (width - len(r)) for r in rows], dtype=torch.long)


def encode_batch(split: Split, indices: list[int], src_vocab: Vocab, tgt_vocab: Vocab):
    """(source ids, target ids with BOS...EOS) for the given sentence indices."""
    src = _pad_batch([src_vocab.encode(split.sources[i]) for i in indices])
    tgt = _pad_batch([[BOS] + tgt_vocab.encode(split.targets[i]) + [EOS] for i in indices])
    return src, tgt


def batch_stream(n: int, batch_size: int, rng: random.Random):
    """Endless epoch-reshuffled index batches."""
    while True:
        order = list(range(n))
        rng.shuffle(order)
        for at in range(0, n - batch_size + 1, batch_size):
            yield order[at : at + batch_size]
