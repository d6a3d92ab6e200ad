"""Frequency dictionary and its symmetric-delete permutation index.

The dictionary is the universe of "correct" terms, each carrying behavioral
statistics (query occurrences, associated assets, downloads).  The delete
index maps every string reachable from a term's prefix by up to
``max_edit_distance`` character deletions back to the originating terms, so
that runtime candidate lookup only has to generate deletes of the input
token instead of the full insert/replace/transpose neighborhood.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ConfigError, LoadError

DEFAULT_MAX_EDIT_DISTANCE = 2
DEFAULT_PREFIX_LENGTH = 7

_COUNT_FIELDS = ("word_count", "asset_frequency", "download_count")


def normalize_term(text: str) -> str:
    """NFC-normalize and lowercase. Applied to every term and lookup token."""
    return unicodedata.normalize("NFC", text).lower()


@dataclass
class DictionaryEntry:
    """Per-term statistics: occurrences in query logs, associated assets,
    downloads over first-page results."""

    term: str
    word_count: int = 0
    asset_frequency: int = 0
    download_count: int = 0

    def __post_init__(self):
        if not self.term:
            raise ValueError("dictionary term must be non-empty")
        if any(ch.isspace() for ch in self.term):
            raise ValueError(f"dictionary term contains whitespace: {self.term!r}")
        if self.term != normalize_term(self.term):
            raise ValueError(f"dictionary term is not NFC-lowercase: {self.term!r}")
        for name in _COUNT_FIELDS:
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def snapshot(self) -> "DictionaryEntry":
        return replace(self)


class FrequencyDictionary:
    """Map of term -> DictionaryEntry with cached per-field maxima.

    Built single-threaded, then frozen; a frozen instance is safe for
    concurrent reads.  Updates happen by building a new instance and
    swapping it in wholesale.
    """

    def __init__(self, locale: str = "en"):
        self.locale = locale
        self._entries: dict[str, DictionaryEntry] = {}
        self._max = {name: 0 for name in _COUNT_FIELDS}
        self._frozen = False

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def terms(self) -> Iterable[str]:
        return self._entries.keys()

    def entries(self) -> Iterable[DictionaryEntry]:
        return self._entries.values()

    @property
    def max_counts(self) -> dict[str, int]:
        """True field-wise maxima over all entries."""
        return dict(self._max)

    def freeze(self) -> "FrequencyDictionary":
        self._frozen = True
        return self

    def add(self, term: str, word_count: int = 0, asset_frequency: int = 0,
            download_count: int = 0) -> DictionaryEntry:
        """Insert a term or, on collision, sum its counters into the existing
        entry (multiple sources are frequency evidence, not authorities)."""
        if self._frozen:
            raise ConfigError("dictionary is frozen; rebuild instead of mutating")
        term = normalize_term(term)
        entry = self._entries.get(term)
        if entry is None:
            entry = DictionaryEntry(term, word_count, asset_frequency, download_count)
            self._entries[term] = entry
        else:
            entry.word_count += word_count
            entry.asset_frequency += asset_frequency
            entry.download_count += download_count
        for name in _COUNT_FIELDS:
            value = getattr(entry, name)
            if value > self._max[name]:
                self._max[name] = value
        return entry

    def get(self, term: str) -> DictionaryEntry | None:
        return self._entries.get(normalize_term(term))

    def contains(self, token: str) -> bool:
        """True iff the NFC-lowercased token is a stored term."""
        return normalize_term(token) in self._entries

    def copy(self) -> "FrequencyDictionary":
        """Unfrozen deep copy (entry objects are duplicated)."""
        dup = FrequencyDictionary(self.locale)
        for entry in self._entries.values():
            dup._entries[entry.term] = entry.snapshot()
        dup._max = dict(self._max)
        return dup


def generate_deletes(term: str, max_edit_distance: int) -> set[str]:
    """Every string reachable from term by 1..max_edit_distance single
    character deletions.  The empty string is permitted; term itself is not
    in the result.

    >>> sorted(generate_deletes("abc", 1))
    ['ab', 'ac', 'bc']
    """
    if not term:
        raise ValueError("term must be non-empty")
    if not 0 <= max_edit_distance <= 2:
        raise ValueError("max_edit_distance must be in 0..2")
    out: set[str] = set()
    frontier = {term}
    for _ in range(max_edit_distance):
        nxt: set[str] = set()
        for word in frontier:
            for i in range(len(word)):
                nxt.add(word[:i] + word[i + 1:])
        nxt -= out
        out |= nxt
        frontier = nxt
    return out


class DeleteIndex:
    """Immutable symmetric-delete index.

    Keys are the term itself plus every deletion variant (down to
    ``max_edit_distance`` deletions) of the term's first ``prefix_length``
    characters; values reference terms by id into ``terms``.  Candidate
    retrieval generates the same variants of the input token and unions the
    buckets; distance verification happens downstream on full strings.
    """

    def __init__(self, terms: tuple[str, ...], variants: dict[str, tuple[int, ...]],
                 max_edit_distance: int, prefix_length: int):
        self.terms = terms
        self.term_lengths = tuple(len(t) for t in terms)
        self.variants = variants
        self.max_edit_distance = max_edit_distance
        self.prefix_length = prefix_length

    def __len__(self) -> int:
        return len(self.variants)

    def lookup(self, variant: str) -> tuple[int, ...]:
        return self.variants.get(variant, ())

    def _candidate_keys(self, token: str, depth: int) -> set[str]:
        prefix = token[:self.prefix_length]
        keys = generate_deletes(prefix, depth) if prefix else set()
        keys.add(token)
        keys.add(prefix)
        return keys

    def candidate_ids(self, token: str, depth: int | None = None) -> set[int]:
        """Term ids whose stored variants intersect the token's variants.

        A complete superset of every term within ``depth`` true
        Damerau-Levenshtein edits of the token.
        """
        if depth is None:
            depth = self.max_edit_distance
        found: set[int] = set()
        get = self.variants.get
        for key in self._candidate_keys(token, depth):
            bucket = get(key)
            if bucket:
                found.update(bucket)
        return found


def build_delete_index(dictionary: FrequencyDictionary,
                       max_edit_distance: int = DEFAULT_MAX_EDIT_DISTANCE,
                       prefix_length: int = DEFAULT_PREFIX_LENGTH) -> DeleteIndex:
    """Precompute the delete-variant map for every dictionary term.

    Deterministic: identical inputs produce identical variant maps (terms are
    id-ordered lexicographically, buckets sorted).
    """
    if len(dictionary) == 0:
        raise ConfigError("cannot build a delete index over an empty dictionary")
    if prefix_length < 1:
        raise ConfigError("prefix_length must be >= 1")
    terms = tuple(sorted(dictionary.terms()))
    variants: dict[str, set[int]] = {}
    for tid, term in enumerate(terms):
        prefix = term[:prefix_length]
        keys = generate_deletes(prefix, max_edit_distance)
        keys.add(prefix)
        keys.add(term)
        for key in keys:
            bucket = variants.get(key)
            if bucket is None:
                variants[key] = {tid}
            else:
                bucket.add(tid)
    frozen = {key: tuple(sorted(bucket)) for key, bucket in variants.items()}
    return DeleteIndex(terms, frozen, max_edit_distance, prefix_length)


def _parse_count(raw: str, path, line_no: int, what: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise LoadError(f"{what} is not an integer: {raw!r}", path, line_no) from None
    if value < 0:
        raise LoadError(f"{what} is negative: {value}", path, line_no)
    return value


def _iter_tsv(path) -> Iterator[tuple[int, list[str]]]:
    """Yield (line_no, fields) for non-comment, non-blank lines."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(str(exc), path) from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        yield line_no, line.split("\t")


def _load_term_counts(path, dictionary: FrequencyDictionary) -> None:
    """Lexicon / custom-vocab TSV: ``term<TAB>word_count``."""
    for line_no, fields in _iter_tsv(path):
        if len(fields) != 2:
            raise LoadError(f"expected 2 tab-separated fields, got {len(fields)}",
                            path, line_no)
        term = normalize_term(fields[0].strip())
        if not term or any(ch.isspace() for ch in term):
            raise LoadError(f"bad term field: {fields[0]!r}", path, line_no)
        count = _parse_count(fields[1].strip(), path, line_no, "word_count")
        dictionary.add(term, word_count=count)


def _load_term_stats(path, dictionary: FrequencyDictionary) -> None:
    """Stats TSV: ``term<TAB>asset_frequency<TAB>download_count``."""
    for line_no, fields in _iter_tsv(path):
        if len(fields) != 3:
            raise LoadError(f"expected 3 tab-separated fields, got {len(fields)}",
                            path, line_no)
        term = normalize_term(fields[0].strip())
        if not term or any(ch.isspace() for ch in term):
            raise LoadError(f"bad term field: {fields[0]!r}", path, line_no)
        asset = _parse_count(fields[1].strip(), path, line_no, "asset_frequency")
        downloads = _parse_count(fields[2].strip(), path, line_no, "download_count")
        dictionary.add(term, asset_frequency=asset, download_count=downloads)


def load_dictionary(lexicon_file, custom_vocab_files: Iterable = (),
                    stats_file=None, locale: str = "en") -> FrequencyDictionary:
    """Build the frequency dictionary from the union of all sources.

    Terms are NFC-lowercased; counters are summed when the same term appears
    in several sources.  Returns a frozen dictionary.
    """
    dictionary = FrequencyDictionary(locale)
    _load_term_counts(lexicon_file, dictionary)
    for path in custom_vocab_files:
        _load_term_counts(path, dictionary)
    if stats_file is not None:
        _load_term_stats(stats_file, dictionary)
    if len(dictionary) == 0:
        raise ConfigError("dictionary sources contained no terms")
    return dictionary.freeze()


def write_dictionary(dictionary: FrequencyDictionary, lexicon_path, stats_path) -> None:
    """Write the dictionary back out in the canonical two-file TSV form.

    Output is byte-deterministic: terms sorted, stats rows emitted only for
    terms with nonzero asset/download counters.
    """
    terms = sorted(dictionary.terms())
    with open(lexicon_path, "w", encoding="utf-8", newline="\n") as fh:
        for term in terms:
            entry = dictionary.get(term)
            fh.write(f"{term}\t{entry.word_count}\n")
    with open(stats_path, "w", encoding="utf-8", newline="\n") as fh:
        for term in terms:
            entry = dictionary.get(term)
            if entry.asset_frequency or entry.download_count:
                fh.write(f"{term}\t{entry.asset_frequency}\t{entry.download_count}\n")
