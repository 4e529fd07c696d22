"""Translation scoring: sentence accuracy, corpus BLEU and RIBES.

Inputs are whitespace-tokenized, single-reference. BLEU is the standard
corpus-level geometric mean of clipped 1..4-gram precisions with the
exp(1 - r/c) brevity penalty. RIBES combines a normalized Kendall's tau over
one-to-one word alignments with unigram precision and a brevity penalty:

    ribes = NKT * P**alpha * BP**beta        (alpha=0.25, beta=0.10)

where NKT = concordant-pairs / C(k, 2) over the aligned reference positions
read in hypothesis order. Sentences with fewer than two aligned words score 0.
Corpus RIBES is the arithmetic per-sentence mean, reported on a 0-100 scale.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

RIBES_ALPHA = 0.25
RIBES_BETA = 0.10
BLEU_MAX_ORDER = 4


@dataclass(frozen=True)
class Alignment:
    """One-to-one (hypothesis position, reference position) pairs, 0-based,
    in hypothesis order. No position appears twice."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def ref_positions(self) -> tuple[int, ...]:
        return tuple(r for _, r in self.pairs)


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    bleu: float
    ribes: float
    n_sentences: int
    per_sentence_ribes: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "bleu": self.bleu,
            "ribes": self.ribes,
            "n_sentences": self.n_sentences,
        }


def _norm(line: str) -> str:
    return " ".join(line.split())


def sentence_accuracy(hyps: Sequence[str], refs: Sequence[str]) -> float:
    """Fraction of exact matches after whitespace normalization."""
    if len(hyps) != len(refs):
        raise ValueError(f"length mismatch: {len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise ValueError("empty corpus")
    hits = sum(_norm(h) == _norm(r) for h, r in zip(hyps, refs))
    return hits / len(hyps)


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def ngram_precisions(
    hyps: Iterable[Sequence[str]], refs: Iterable[Sequence[str]], max_order: int = BLEU_MAX_ORDER
) -> list[float]:
    """Corpus-level modified (clipped) n-gram precisions for n = 1..max_order."""
    matched = [0] * max_order
    total = [0] * max_order
    for hyp, ref in zip(hyps, refs):
        for n in range(1, max_order + 1):
            counts = _ngram_counts(hyp, n)
            ref_counts = _ngram_counts(ref, n)
            matched[n - 1] += sum(min(c, ref_counts[g]) for g, c in counts.items())
            total[n - 1] += max(len(hyp) - n + 1, 0)
    return [m / t if t else 0.0 for m, t in zip(matched, total)]


def bleu(hyps: Sequence[str], refs: Sequence[str]) -> float:
    """Corpus BLEU on a 0-100 scale (single reference, no smoothing)."""
    if len(hyps) != len(refs):
        raise ValueError(f"length mismatch: {len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise ValueError("empty corpus")
    hyp_tokens = [h.split() for h in hyps]
    ref_tokens = [r.split() for r in refs]
    precisions = ngram_precisions(hyp_tokens, ref_tokens)
    if any(p == 0.0 for p in precisions):
        return 0.0
    log_mean = sum(math.log(p) for p in precisions) / len(precisions)
    c = sum(len(h) for h in hyp_tokens)
    r = sum(len(t) for t in ref_tokens)
    bp = 1.0 if c >= r else math.exp(1.0 - r / c) if c > 0 else 0.0
    return 100.0 * bp * math.exp(log_mean)


def align_words(hyp: Sequence[str], ref: Sequence[str]) -> Alignment:
    """One-to-one word alignment used by RIBES.

    Hypothesis tokens are scanned left to right. A token aligns when it is the
    only unaligned occurrence of its word on both sides, or when a growing
    adjacent n-gram context (bigram first) pins down a unique occurrence.
    Consumed reference positions are excluded from later candidates, so a
    context match on one occurrence can disambiguate the remaining one.
    Tokens that stay ambiguous are skipped.
    """
    used_ref: set[int] = set()
    aligned_hyp: set[int] = set()
    pairs: list[tuple[int, int]] = []

    def ngram_positions(seq: Sequence[str], gram: tuple[str, ...]) -> list[int]:
        n = len(gram)
        return [i for i in range(len(seq) - n + 1) if tuple(seq[i : i + n]) == gram]

    for i, word in enumerate(hyp):
        candidates = [p for p in range(len(ref)) if ref[p] == word and p not in used_ref]
        if not candidates:
            continue
        competitors = [j for j in range(len(hyp)) if hyp[j] == word and j not in aligned_hyp]
        target: int | None = None
        if len(candidates) == 1 and len(competitors) == 1:
            target = candidates[0]
        else:
            for window in range(1, max(i + 1, len(hyp) - i)):
                if i - window >= 0:
                    gram = tuple(hyp[i - window : i + 1])
                    hyp_hits = ngram_positions(hyp, gram)
                    ref_hits = ngram_positions(ref, gram)
                    if len(hyp_hits) == 1 and len(ref_hits) == 1:
                        end = ref_hits[0] + window
                        if end not in used_ref:
                            target = end
                        break
                if i + window < len(hyp):
                    gram = tuple(hyp[i : i + window + 1])
                    hyp_hits = ngram_positions(hyp, gram)
                    ref_hits = ngram_positions(ref, gram)
                    if len(hyp_hits) == 1 and len(ref_hits) == 1:
                        if ref_hits[0] not in used_ref:
                            target = ref_hits[0]
                        break
        if target is not None:
            pairs.append((i, target))
            used_ref.add(target)
            aligned_hyp.add(i)
    return Alignment(pairs=tuple(pairs))


def normalized_kendall(ref_positions: Sequence[int]) -> float:
    """Fraction of concordant (ascending) pairs among the aligned positions."""
    k = len(ref_positions)
    if k < 2:
        return 0.0
    concordant = 0
    for a in range(k - 1):
        for b in range(a + 1, k):
            if ref_positions[a] < ref_positions[b]:
                concordant += 1
    return concordant / (k * (k - 1) / 2)


def ribes(hyp: Sequence[str], ref: Sequence[str]) -> float:
    """Sentence RIBES in [0, 1]."""
    if not hyp:
        return 0.0
    alignment = align_words(hyp, ref)
    k = len(alignment.pairs)
    if k < 2:
        return 0.0
    nkt = normalized_kendall(alignment.ref_positions)
    precision = k / len(hyp)
    bp = min(1.0, math.exp(1.0 - len(ref) / len(hyp)))
    return nkt * precision**RIBES_ALPHA * bp**RIBES_BETA


def corpus_ribes(hyps: Sequence[str], refs: Sequence[str]) -> tuple[float, list[float]]:
    """Corpus RIBES (0-100) and the per-sentence scores it averages."""
    if len(hyps) != len(refs):
        raise ValueError(f"length mismatch: {len(hyps)} hypotheses vs {len(refs)} references")
    if not hyps:
        raise ValueError("empty corpus")
    per_sentence = [ribes(h.split(), r.split()) for h, r in zip(hyps, refs)]
    return 100.0 * sum(per_sentence) / len(per_sentence), per_sentence


def evaluate(hyps: Sequence[str], refs: Sequence[str]) -> MetricReport:
    corpus, per_sentence = corpus_ribes(hyps, refs)
    return MetricReport(
        accuracy=sentence_accuracy(hyps, refs),
        bleu=bleu(hyps, refs),
        ribes=corpus,
        n_sentences=len(hyps),
        per_sentence_ribes=tuple(per_sentence),
    )
