"""Deterministic pseudo-word frequency corpus for full-scale tests.

Pronounceable CV-syllable words with Zipf-distributed counts stand in for a
natural word-frequency list, so the large end-to-end runs are reproducible
and need no external downloads.  A slice of the vocabulary carries accented
characters so accent-class errors occur naturally.
"""

from __future__ import annotations

import itertools
import random

from queryspell import FrequencyDictionary

CONSONANTS = "bcdfghjklmnprstvz"
VOWELS = "aeiou"
ACCENT_SWAPS = {"a": "àâä", "e": "éèê", "i": "î", "o": "ôö", "u": "ùü"}


def make_vocabulary(n_terms: int, seed: int) -> list[tuple[str, int]]:
    """(word, count) pairs, counts Zipf-distributed over the rank order."""
    rng = random.Random(seed)
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < n_terms:
        syllables = rng.choices((2, 3, 4), weights=(30, 50, 20))[0]
        parts = []
        for _ in range(syllables):
            onset = rng.choice(CONSONANTS)
            if rng.random() < 0.12:
                onset += rng.choice("lr")
            vowel = rng.choice(VOWELS)
            coda = rng.choice(CONSONANTS) if rng.random() < 0.18 else ""
            parts.append(onset + vowel + coda)
        word = "".join(parts)
        if rng.random() < 0.08:
            spots = [i for i, ch in enumerate(word) if ch in ACCENT_SWAPS]
            if spots:
                i = rng.choice(spots)
                word = word[:i] + rng.choice(ACCENT_SWAPS[word[i]]) + word[i + 1:]
        if word in seen or len(word) < 5:
            continue
        seen.add(word)
        words.append(word)
    return [(w, max(1, int(2_000_000 / rank ** 1.05)))
            for rank, w in enumerate(words, start=1)]


def build_dictionary(vocab: list[tuple[str, int]], seed: int) -> FrequencyDictionary:
    """Frequency dictionary with asset/download counters correlated with the
    word counts but noisy, as real behavioral statistics would be."""
    rng = random.Random(seed)
    d = FrequencyDictionary("en")
    for word, count in vocab:
        d.add(word,
              word_count=count,
              asset_frequency=int(count * (0.5 + rng.random())),
              download_count=int(count * rng.random() * 0.3))
    return d.freeze()


def make_queries(vocab: list[tuple[str, int]], n_queries: int, seed: int,
                 length_weights=(35, 45, 20)) -> list[str]:
    """1-3 word queries drawn frequency-weighted from the vocabulary."""
    words = [w for w, _ in vocab]
    cum = list(itertools.accumulate(c for _, c in vocab))
    rng = random.Random(seed)
    out = []
    for _ in range(n_queries):
        k = rng.choices((1, 2, 3), weights=length_weights)[0]
        out.append(" ".join(rng.choices(words, cum_weights=cum, k=k)))
    return out
