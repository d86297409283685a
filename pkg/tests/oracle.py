"""Independent oracles the tests check the production code against.

Everything here is deliberately separate from the package implementation:
the feature file is parsed with its own tiny reader, substitution costs are
recounted from raw rows, and the edit distance is a memoized top-down
recursion over integer 1/24 units rather than the production bottom-up DP.
"""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

FEATURE_TABLE = (
    Path(__file__).resolve().parents[1] / "src" / "phonotale" / "data" / "feature_table.tsv"
)

INDEL = 24


def read_raw_vectors(path: Path = FEATURE_TABLE) -> dict[str, tuple[str, ...]]:
    vectors: dict[str, tuple[str, ...]] = {}
    header_skipped = False
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        if not header_skipped:
            header_skipped = True
            continue
        cols = line.split("\t")
        vectors[cols[0]] = tuple(cols[1:])
    return vectors


_VECTORS = read_raw_vectors()


def mismatches(a: str, b: str) -> int:
    va, vb = _VECTORS[a], _VECTORS[b]
    return sum(1 for x, y in zip(va, vb) if x != y)


def recursive_distance_units(ref: tuple[str, ...], hyp: tuple[str, ...]) -> int:
    """Exhaustive recursive minimum alignment cost, in 1/24 units."""

    @lru_cache(maxsize=None)
    def rec(i: int, j: int) -> int:
        if i == 0:
            return j * INDEL
        if j == 0:
            return i * INDEL
        return min(
            rec(i - 1, j - 1) + mismatches(ref[i - 1], hyp[j - 1]),
            rec(i - 1, j) + INDEL,
            rec(i, j - 1) + INDEL,
        )

    result = rec(len(ref), len(hyp))
    rec.cache_clear()
    return result


def recursive_distance(ref, hyp) -> float:
    return recursive_distance_units(tuple(ref), tuple(hyp)) / 24


def brute_force_best_window(
    target: tuple[str, ...], utterance: tuple[str, ...], slack: int = 2
) -> tuple[int, int, float]:
    """Exhaustive window enumeration; returns (start, end, distance)."""
    if not utterance:
        return 0, 0, float(len(target))
    lo = max(1, min(len(utterance), len(target) - slack))
    hi = len(target) + slack
    best = None
    for start in range(len(utterance)):
        for end in range(start + lo, min(start + hi, len(utterance)) + 1):
            d = recursive_distance(target, utterance[start:end])
            key = (d, start, end - start)
            if best is None or key < best:
                best = key
    assert best is not None
    return best[1], best[1] + best[2], best[0]


def naive_group_by(attempt_rows: list[dict]) -> dict[str, dict]:
    """Full-scan aggregation oracle over attempt payload dicts."""
    grouped: dict[str, dict] = {}
    for row in attempt_rows:
        stats = grouped.setdefault(
            row["word"], {"count": 0, "distances": [], "bands": {}}
        )
        stats["count"] += 1
        stats["distances"].append(row["distance"])
        band = band_label(row["distance"])
        stats["bands"][band] = stats["bands"].get(band, 0) + 1
    return grouped


def band_label(distance: float) -> str:
    if distance <= 0.1:
        return "excellent"
    if distance <= 1.0:
        return "good"
    if distance <= 2.0:
        return "fair"
    return "needs_practice"
