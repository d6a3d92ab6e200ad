"""Candidate feature extraction for the neural ranker.

Each candidate becomes a fixed-order numeric vector, all components in
[0, 1]: log-scaled behavioral counters, normalized edit distance, one-hot
locale and application blocks, and a phonetic-similarity score (English
only; neutral 0.5 elsewhere so the ranker cannot read "non-English" as
"phonetically dissimilar").
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dictionary import FrequencyDictionary
from .errors import ConfigError
from .metaphone import primary_code
from .suggest import Candidate, damerau_levenshtein

DEFAULT_LOCALES = ("en", "fr", "de")
DEFAULT_APPLICATIONS = ("stock", "express", "cchome")

MAX_EDIT_DISTANCE = 2


@dataclass(frozen=True)
class RequestContext:
    """Where a query came from: language locale and application scope."""

    locale: str
    application: str


@dataclass(frozen=True)
class FeatureSchema:
    """Feature order and one-hot set sizes; travels with the model artifact
    so training and serving cannot disagree on vector layout."""

    locales: tuple[str, ...] = DEFAULT_LOCALES
    applications: tuple[str, ...] = DEFAULT_APPLICATIONS

    @property
    def dimension(self) -> int:
        return 4 + len(self.locales) + len(self.applications) + 1

    def feature_names(self) -> list[str]:
        names = ["word_count", "asset_frequency", "download_count", "edit_distance"]
        names += [f"locale={tag}" for tag in self.locales]
        names += [f"application={tag}" for tag in self.applications]
        names.append("phonetic_similarity")
        return names

    def validate_context(self, context: RequestContext) -> None:
        if context.locale not in self.locales:
            raise ConfigError(f"unknown locale {context.locale!r}; "
                              f"configured: {', '.join(self.locales)}")
        if context.application not in self.applications:
            raise ConfigError(f"unknown application {context.application!r}; "
                              f"configured: {', '.join(self.applications)}")


@dataclass(frozen=True)
class FeatureVector:
    word_count_n: float
    asset_frequency_n: float
    download_count_n: float
    edit_distance_n: float
    locale_onehot: tuple[float, ...]
    application_onehot: tuple[float, ...]
    phonetic_similarity: float

    def as_array(self) -> np.ndarray:
        return np.array(
            (self.word_count_n, self.asset_frequency_n, self.download_count_n,
             self.edit_distance_n)
            + self.locale_onehot + self.application_onehot
            + (self.phonetic_similarity,),
            dtype=np.float64,
        )

    @property
    def dimension(self) -> int:
        return 5 + len(self.locale_onehot) + len(self.application_onehot)


def _log_norm(value: int, maximum: int) -> float:
    """log1p(value) / log1p(max), clamped to [0, 1]; 0 when the field has no
    signal anywhere (max == 0)."""
    if maximum <= 0:
        return 0.0
    return min(1.0, math.log1p(value) / math.log1p(maximum))


def _onehot(tag: str, members: tuple[str, ...]) -> tuple[float, ...]:
    return tuple(1.0 if tag == m else 0.0 for m in members)


def phonetic_similarity(a: str, b: str) -> float:
    """Similarity of the primary Double Metaphone codes, in [0, 1].

    1.0 for identical codes (also when both are empty); 0.0 when exactly one
    code is empty; otherwise 1 - edit_distance / max(code lengths).
    """
    code_a = primary_code(a)
    code_b = primary_code(b)
    if code_a == code_b:
        return 1.0
    if not code_a or not code_b:
        return 0.0
    longest = max(len(code_a), len(code_b))
    return 1.0 - damerau_levenshtein(code_a, code_b) / longest


def extract_features(candidate: Candidate, context: RequestContext,
                     dictionary: FrequencyDictionary, input_token: str,
                     schema: FeatureSchema = FeatureSchema()) -> FeatureVector:
    """Normalized feature vector for one candidate in one request context.

    Count features are scaled against the dictionary-wide maxima snapshot so
    training and serving use identical scaling.
    """
    schema.validate_context(context)
    maxima = dictionary.max_counts
    entry = candidate.entry
    if context.locale == "en":
        phonetic = phonetic_similarity(input_token, candidate.term)
    else:
        phonetic = 0.5  # neutral: the phonetic signal is English-only
    return FeatureVector(
        word_count_n=_log_norm(entry.word_count, maxima["word_count"]),
        asset_frequency_n=_log_norm(entry.asset_frequency, maxima["asset_frequency"]),
        download_count_n=_log_norm(entry.download_count, maxima["download_count"]),
        edit_distance_n=candidate.edit_distance / MAX_EDIT_DISTANCE,
        locale_onehot=_onehot(context.locale, schema.locales),
        application_onehot=_onehot(context.application, schema.applications),
        phonetic_similarity=phonetic,
    )
