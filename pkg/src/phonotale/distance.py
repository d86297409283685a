"""Feature-weighted edit distance, the per-phone error rate, and quality bands.

Substituting one phone for another costs the fraction of articulatory
features on which the two disagree (1/24 per mismatch); insertions and
deletions cost exactly 1.0. The resulting alignment distance is always a
multiple of 1/24 and satisfies the metric axioms. Internally the dynamic
program runs on integer 1/24 units so equal costs compare exactly.

Indel cost is a module constant, not a parameter of the public functions:
the calibrated label thresholds assume it. It is exposed for research use
via ``feature_edit_distance_units``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import EmptyReference, NegativeDistance
from .features import FEATURE_COUNT, FeatureTable
from .phonology import PhoneSegment, PhoneSeq

INDEL_UNITS = FEATURE_COUNT  # one insertion or deletion == 24/24 == 1.0


def substitution_cost(a: PhoneSegment | str, b: PhoneSegment | str, table: FeatureTable) -> float:
    """Cost in [0, 1] of substituting phone ``b`` for phone ``a``.

    Symmetric; zero exactly when the two feature vectors are identical.
    Raises UnknownSymbol if either phone is missing from the table.
    """
    sa = a.symbol if isinstance(a, PhoneSegment) else a
    sb = b.symbol if isinstance(b, PhoneSegment) else b
    return table.mismatch_count(sa, sb) / FEATURE_COUNT


def feature_edit_distance_units(ref: PhoneSeq, hyp: PhoneSeq, table: FeatureTable,
                                indel_units: int = INDEL_UNITS) -> int:
    """Minimal alignment cost in integer 1/24 units."""
    ra = [seg.symbol for seg in ref]
    hb = [seg.symbol for seg in hyp]
    # validate up front so unknown phones fail even when a pure-indel path wins
    for sym in ra:
        table.vector(sym)
    for sym in hb:
        table.vector(sym)
    m, n = len(ra), len(hb)
    prev = [j * indel_units for j in range(n + 1)]
    cost = table.mismatch_count
    for i in range(1, m + 1):
        cur = [i * indel_units] + [0] * n
        a = ra[i - 1]
        for j in range(1, n + 1):
            best = prev[j - 1] + cost(a, hb[j - 1])
            up = prev[j] + indel_units
            if up < best:
                best = up
            left = cur[j - 1] + indel_units
            if left < best:
                best = left
            cur[j] = best
        prev = cur
    return prev[n]


def feature_edit_distance(ref: PhoneSeq, hyp: PhoneSeq, table: FeatureTable) -> float:
    """Minimal-cost alignment distance between two phone sequences.

    Substitutions are feature-weighted, insertions and deletions cost 1.0.
    Symmetric in its sequence arguments; an empty hypothesis against a
    reference of length n scores n.
    """
    return feature_edit_distance_units(ref, hyp, table) / FEATURE_COUNT


def pfer(ref: PhoneSeq, hyp: PhoneSeq, table: FeatureTable) -> float:
    """Phone feature error rate: alignment distance over reference length."""
    if len(ref) == 0:
        raise EmptyReference("reference sequence is empty")
    return feature_edit_distance(ref, hyp, table) / len(ref)


class QualityBand(enum.Enum):
    """Pronunciation quality label, best to worst."""

    EXCELLENT = "excellent"
    GOOD = "good"
    FAIR = "fair"
    NEEDS_PRACTICE = "needs_practice"

    @property
    def rank(self) -> int:
        return _BAND_ORDER[self]

    @property
    def display(self) -> str:
        return _BAND_DISPLAY[self]

    def __lt__(self, other: QualityBand) -> bool:
        return self.rank < other.rank

    def __le__(self, other: QualityBand) -> bool:
        return self.rank <= other.rank


_BAND_ORDER = {
    QualityBand.EXCELLENT: 0,
    QualityBand.GOOD: 1,
    QualityBand.FAIR: 2,
    QualityBand.NEEDS_PRACTICE: 3,
}

_BAND_DISPLAY = {
    QualityBand.EXCELLENT: "Excellent",
    QualityBand.GOOD: "Good",
    QualityBand.FAIR: "Fair",
    QualityBand.NEEDS_PRACTICE: "Need Practice",
}


@dataclass(frozen=True)
class BandThresholds:
    """Band upper bounds on the raw feature edit distance.

    Intervals are left-open/right-closed: a distance exactly on a boundary
    takes the better label (2.0 is Fair, anything above is Need Practice).
    """

    excellent_max: float = 0.1
    good_max: float = 1.0
    fair_max: float = 2.0

    def __post_init__(self):
        if not (0 < self.excellent_max < self.good_max < self.fair_max):
            raise ValueError("thresholds must be positive and strictly increasing")


DEFAULT_THRESHOLDS = BandThresholds()


def band_of(distance: float, thresholds: BandThresholds = DEFAULT_THRESHOLDS) -> QualityBand:
    """Map a raw feature edit distance (not PFER) to its quality band."""
    if distance < 0:
        raise NegativeDistance(f"distance must be non-negative, got {distance}")
    if distance <= thresholds.excellent_max:
        return QualityBand.EXCELLENT
    if distance <= thresholds.good_max:
        return QualityBand.GOOD
    if distance <= thresholds.fair_max:
        return QualityBand.FAIR
    return QualityBand.NEEDS_PRACTICE
