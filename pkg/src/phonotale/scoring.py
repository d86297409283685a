"""End-to-end scoring of recorded practice attempts.

One attempt flows: raw hypothesis IPA -> clean + rhotic-normalize ->
feature edit distance against the reference pronunciation -> PFER and
quality band -> an AttemptScore record. Sentence attempts first locate the
best-matching window of the utterance, and check the orthographic
transcript for the target token so omissions are flagged regardless of
how well some window happens to align.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .distance import (
    BandThresholds,
    DEFAULT_THRESHOLDS,
    QualityBand,
    band_of,
    feature_edit_distance,
)
from .errors import EmptyReference, PhonotaleError
from .features import FeatureTable
from .phonology import PhoneSeq, clean_transcription, normalize_rhotics

# Candidate windows may be up to this many segments shorter or longer than
# the reference: tolerates a couple of insertions/deletions while bounding
# the search.
WINDOW_SLACK = 2

# Transcript tokens within this letter edit distance count as the target
# word, so a transcriber's misspelling of a correct attempt is not punished.
TOKEN_FUZZ = 2


@dataclass(frozen=True)
class ScoringContext:
    table: FeatureTable
    thresholds: BandThresholds = DEFAULT_THRESHOLDS


@dataclass(frozen=True)
class ReferencePronunciation:
    """Ground-truth phones for one target word."""

    orthography: str
    phonemes: PhoneSeq

    def __post_init__(self):
        if len(self.phonemes) == 0:
            raise ValueError(f"{self.orthography!r}: reference phonemes must be non-empty")


@dataclass(frozen=True)
class AttemptScore:
    """One scored production of a target word."""

    attempt_id: str
    target: ReferencePronunciation
    hypothesis: PhoneSeq
    orthographic_transcript: str
    distance: float
    pfer: float
    band: QualityBand
    target_found: bool
    audio_ref: str
    timestamp: str
    thresholds: BandThresholds = field(default=DEFAULT_THRESHOLDS, compare=False)

    def __post_init__(self):
        if self.band is not band_of(self.distance, self.thresholds):
            raise ValueError("band does not match distance")


_BOUNDARIES = re.compile(r"[ \t\n|‖]+")


def normalize_hypothesis(hyp: str | PhoneSeq) -> PhoneSeq:
    """Clean and rhotic-normalize a hypothesis transcription.

    Rhotic rewriting is a within-word rule, so string input is split on word
    boundaries first; a schwa ending one word never merges with an r opening
    the next. Pre-segmented input is treated as a single word.
    """
    if isinstance(hyp, PhoneSeq):
        return normalize_rhotics(clean_transcription(hyp))
    segments = []
    for chunk in _BOUNDARIES.split(hyp):
        if chunk:
            segments.extend(normalize_rhotics(clean_transcription(chunk)))
    return PhoneSeq(segments)


def _score(
    target: ReferencePronunciation,
    hypothesis: PhoneSeq,
    distance: float,
    found: bool,
    context: ScoringContext,
    attempt_id: str,
    transcript: str,
    audio_ref: str,
    timestamp: str,
) -> AttemptScore:
    return AttemptScore(
        attempt_id=attempt_id,
        target=target,
        hypothesis=hypothesis,
        orthographic_transcript=transcript,
        distance=distance,
        pfer=distance / len(target.phonemes),
        band=band_of(distance, context.thresholds),
        target_found=found,
        audio_ref=audio_ref,
        timestamp=timestamp,
        thresholds=context.thresholds,
    )


def score_word_attempt(
    target: ReferencePronunciation,
    hyp: str | PhoneSeq,
    context: ScoringContext,
    *,
    attempt_id: str = "",
    orthographic_transcript: str = "",
    audio_ref: str = "",
    timestamp: str = "",
) -> AttemptScore:
    """Score an isolated-word production.

    An empty hypothesis (no speech detected) is valid and scores as one
    deletion per reference phone. The target counts as found only when the
    attempt lands in a strictly better band than that all-deletion worst
    case.
    """
    hypothesis = normalize_hypothesis(hyp)
    distance = feature_edit_distance(target.phonemes, hypothesis, context.table)
    worst = float(len(target.phonemes))
    found = band_of(distance, context.thresholds) < band_of(worst, context.thresholds)
    return _score(
        target, hypothesis, distance, found, context,
        attempt_id, orthographic_transcript, audio_ref, timestamp,
    )


@dataclass(frozen=True)
class LocatedWindow:
    start: int
    end: int  # exclusive
    window: PhoneSeq
    distance: float


def locate_target_in_sentence(
    target: ReferencePronunciation,
    utterance: PhoneSeq,
    context: ScoringContext,
) -> LocatedWindow:
    """Best-aligned contiguous window of the utterance for the target word.

    Considers windows within WINDOW_SLACK of the reference length; ties go
    to the earliest start, then the shortest window. An empty utterance
    scores the all-deletion distance.
    """
    n_target = len(target.phonemes)
    n = len(utterance)
    if n == 0:
        return LocatedWindow(0, 0, PhoneSeq(), float(n_target))
    lo = max(1, min(n, n_target - WINDOW_SLACK))
    hi = n_target + WINDOW_SLACK
    best: LocatedWindow | None = None
    for start in range(n):
        for width in range(lo, hi + 1):
            end = start + width
            if end > n:
                break
            window = utterance[start:end]
            d = feature_edit_distance(target.phonemes, window, context.table)
            if best is None or d < best.distance:
                best = LocatedWindow(start, end, window, d)
    assert best is not None
    return best


def _letter_edit_distance(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j - 1] + (ca != cb), prev[j] + 1, cur[j - 1] + 1))
        prev = cur
    return prev[-1]


def _tokens(text: str) -> list[str]:
    return ["".join(ch for ch in tok if ch.isalpha()) for tok in text.lower().split()]


def transcript_contains(transcript: str, word: str) -> bool:
    """Case/punctuation-insensitive fuzzy token match for the target word."""
    word = word.lower()
    return any(
        tok and _letter_edit_distance(tok, word) <= TOKEN_FUZZ
        for tok in _tokens(transcript)
    )


def score_sentence_attempt(
    target: ReferencePronunciation,
    utterance: str | PhoneSeq,
    context: ScoringContext,
    *,
    orthographic_transcript: str,
    attempt_id: str = "",
    audio_ref: str = "",
    timestamp: str = "",
) -> AttemptScore:
    """Score the target word inside a full-sentence production.

    The distance comes from the best-aligned utterance window, but omission
    detection is orthographic: if no transcript token fuzzily matches the
    target word, the attempt records the all-deletion distance and
    target_found=False regardless of the phonemes.
    """
    hypothesis = normalize_hypothesis(utterance)
    found = transcript_contains(orthographic_transcript, target.orthography)
    if found:
        distance = locate_target_in_sentence(target, hypothesis, context).distance
    else:
        distance = float(len(target.phonemes))
    return _score(
        target, hypothesis, distance, found, context,
        attempt_id, orthographic_transcript, audio_ref, timestamp,
    )


@dataclass(frozen=True)
class BatchItemResult:
    index: int
    word: str
    reference_ipa: str
    hypothesis_ipa: str
    distance: float | None
    pfer: float | None
    band: QualityBand | None
    error: str | None = None


@dataclass(frozen=True)
class BatchReport:
    items: tuple[BatchItemResult, ...]
    mean: float
    std: float  # population
    histogram: dict[QualityBand, int]
    scored: int
    failed: int

    def to_document(self) -> dict:
        """Machine-readable report with stable field order."""
        return {
            "items": [
                {
                    "index": it.index,
                    "word": it.word,
                    "reference_ipa": it.reference_ipa,
                    "hypothesis_ipa": it.hypothesis_ipa,
                    "distance": it.distance,
                    "pfer": it.pfer,
                    "band": it.band.value if it.band else None,
                    "error": it.error,
                }
                for it in self.items
            ],
            "summary": {
                "scored": self.scored,
                "failed": self.failed,
                "mean_distance": self.mean,
                "std_distance": self.std,
                "band_histogram": {b.value: self.histogram[b] for b in QualityBand},
            },
        }


def batch_score(
    pairs: Iterable[Sequence[str]],
    table: FeatureTable,
    thresholds: BandThresholds = DEFAULT_THRESHOLDS,
) -> BatchReport:
    """Score (reference, hypothesis) IPA pairs through the full pipeline.

    Pairs may be (reference, hypothesis) or (word, reference, hypothesis).
    Per-item failures (unknown symbols, empty reference) are recorded on the
    item and excluded from the summary statistics, not raised.
    """
    context = ScoringContext(table, thresholds)
    items: list[BatchItemResult] = []
    distances: list[float] = []
    histogram = {b: 0 for b in QualityBand}
    for index, pair in enumerate(pairs):
        if len(pair) == 3:
            word, ref_ipa, hyp_ipa = pair
        else:
            word, (ref_ipa, hyp_ipa) = "", pair
        try:
            ref = normalize_hypothesis(ref_ipa)
            if len(ref) == 0:
                raise EmptyReference(f"item {index}: empty reference")
            hyp = normalize_hypothesis(hyp_ipa)
            d = feature_edit_distance(ref, hyp, table)
            band = band_of(d, thresholds)
            items.append(BatchItemResult(index, word, ref_ipa, hyp_ipa, d, d / len(ref), band))
            distances.append(d)
            histogram[band] += 1
        except PhonotaleError as exc:
            items.append(
                BatchItemResult(index, word, ref_ipa, hyp_ipa, None, None, None, str(exc))
            )
    mean = sum(distances) / len(distances) if distances else 0.0
    variance = sum((d - mean) ** 2 for d in distances) / len(distances) if distances else 0.0
    return BatchReport(
        items=tuple(items),
        mean=mean,
        std=math.sqrt(variance),
        histogram=histogram,
        scored=len(distances),
        failed=len(items) - len(distances),
    )


def read_batch_csv(path: str | Path) -> list[tuple[str, str, str]]:
    """Read a batch input file with columns word, reference_ipa, hypothesis_ipa."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"word", "reference_ipa", "hypothesis_ipa"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"batch file must have columns {sorted(required)}")
        return [
            (row["word"], row["reference_ipa"], row["hypothesis_ipa"])
            for row in reader
        ]
