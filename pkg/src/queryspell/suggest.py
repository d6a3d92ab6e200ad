"""Candidate generation: verified corrections for a misspelled token.

Lookup retrieves terms whose delete variants intersect the token's delete
variants, verifies each with full-string Damerau-Levenshtein distance, and
applies the escalation policy: distance-1 candidates first, distance-2 only
when fewer than ``min_candidates`` exist at distance 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dictionary import DeleteIndex, DictionaryEntry, FrequencyDictionary, normalize_term

DEFAULT_MIN_CANDIDATES = 3


def damerau_levenshtein(a: str, b: str) -> int:
    """Minimal number of insertions, deletions, substitutions and adjacent
    transpositions transforming a into b (unrestricted edit sequences, so
    e.g. an insertion inside a transposed pair is allowed).

    >>> damerau_levenshtein("change", "chnage")
    1
    >>> damerau_levenshtein("ca", "abc")
    2
    """
    if a == b:
        return 0
    # Strip shared affixes first; candidates usually differ in a small window.
    lo = 0
    hi_a, hi_b = len(a), len(b)
    while lo < hi_a and lo < hi_b and a[lo] == b[lo]:
        lo += 1
    while hi_a > lo and hi_b > lo and a[hi_a - 1] == b[hi_b - 1]:
        hi_a -= 1
        hi_b -= 1
    a = a[lo:hi_a]
    b = b[lo:hi_b]
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la

    # Lowrance-Wagner matrix with per-character last-match bookkeeping.
    inf = la + lb
    width = lb + 2
    score = [[inf] * width for _ in range(la + 2)]
    for i in range(la + 1):
        score[i + 1][1] = i
    for j in range(lb + 1):
        score[1][j + 1] = j
    last_row: dict[str, int] = {}
    for i in range(1, la + 1):
        ch_a = a[i - 1]
        last_col = 0
        row = score[i + 1]
        prev = score[i]
        for j in range(1, lb + 1):
            ch_b = b[j - 1]
            k = last_row.get(ch_b, 0)
            m = last_col
            if ch_a == ch_b:
                cost = 0
                last_col = j
            else:
                cost = 1
            row[j + 1] = min(
                prev[j] + cost,            # substitute or match
                row[j] + 1,                # insert
                prev[j + 1] + 1,           # delete
                score[k][m] + (i - k - 1) + 1 + (j - m - 1),  # transpose
            )
        last_row[ch_a] = i
    return score[la + 1][lb + 1]


@dataclass
class Candidate:
    """A proposed replacement for a misspelled token.

    ``score`` stays None until the ranker assigns a probability in [0, 1].
    """

    term: str
    edit_distance: int
    entry: DictionaryEntry
    score: float | None = field(default=None, compare=False)

    @property
    def word_count(self) -> int:
        return self.entry.word_count


def suggest(index: DeleteIndex, dictionary: FrequencyDictionary, token: str,
            min_candidates: int = DEFAULT_MIN_CANDIDATES) -> list[Candidate]:
    """Verified correction candidates for a token.

    Returns [] when the token is already a dictionary term.  Otherwise all
    terms at Damerau-Levenshtein distance exactly 1; if fewer than
    ``min_candidates`` exist, the distance-2 terms are added.  Order is
    deterministic (distance, then term) but carries no ranking meaning.
    """
    token = normalize_term(token)
    if not token or dictionary.contains(token):
        return []

    token_len = len(token)
    lengths = index.term_lengths
    terms = index.terms

    # Distance-1 pass over depth-1 variants only: complete for distance 1,
    # cheap because the fat depth-2 buckets are never touched.
    near_ids = index.candidate_ids(token, depth=1)
    ones: list[int] = []
    twos: list[int] = []
    for tid in near_ids:
        if abs(lengths[tid] - token_len) > 2:
            continue
        dist = damerau_levenshtein(token, terms[tid])
        if dist == 1:
            ones.append(tid)
        elif dist == 2:
            twos.append(tid)

    if len(ones) >= min_candidates:
        twos = []
    else:
        # Escalate: retrieve at full depth and verify the ids not yet seen.
        # The depth-1 pass already found every distance-1 term, so this only
        # ever adds distance-2 candidates.
        for tid in index.candidate_ids(token, depth=index.max_edit_distance):
            if tid in near_ids:
                continue
            if abs(lengths[tid] - token_len) > 2:
                continue
            if damerau_levenshtein(token, terms[tid]) == 2:
                twos.append(tid)

    picks = [(1, tid) for tid in ones] + [(2, tid) for tid in twos]
    picks.sort(key=lambda p: (p[0], terms[p[1]]))
    return [
        Candidate(terms[tid], dist, dictionary.get(terms[tid]).snapshot())
        for dist, tid in picks
    ]
