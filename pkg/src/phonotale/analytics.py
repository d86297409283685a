"""Dashboard aggregation over the append-only session event logs.

Aggregates are computed on read by scanning the logs: simple, auditable,
and consistent with concurrent writers (a reader sees a prefix of each
log). Clinic-scale data makes this cheap; materialized counters are the
documented scaling seam if that ever changes.

Quality bands are re-derived from the stored distance at read time, so a
threshold change re-labels historical data consistently; the distance is
the source of truth.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .distance import BandThresholds, DEFAULT_THRESHOLDS, QualityBand, band_of
from .store import Store


@dataclass(frozen=True)
class WordProductionStats:
    orthography: str
    production_count: int
    band_histogram: dict[QualityBand, int]
    mean_distance: float


@dataclass(frozen=True)
class RecordingCard:
    attempt_id: str
    session_id: str
    ts: str
    word: str
    band: QualityBand
    band_label: str
    phonemic_transcript: str
    orthographic_transcript: str
    prompt_text: str
    distance: float
    audio_ref: str


def _child_attempts(child_id: str, store: Store) -> list[tuple[str, int, dict, str]]:
    """All attempt_scored payloads for a child: (session_id, seq, payload, ts)."""
    rows = []
    for session_id in store.session_ids():
        events = store.read_events(session_id)
        if not events or events[0].kind != "session_started":
            continue
        if events[0].payload.get("child_id") != child_id:
            continue
        for seq, event in enumerate(events):
            if event.kind == "attempt_scored":
                rows.append((session_id, seq, event.payload, event.ts))
    return rows


def _in_range(ts: str, time_range: tuple[str | None, str | None] | None) -> bool:
    if time_range is None:
        return True
    start, end = time_range
    if start is not None and ts < start:
        return False
    if end is not None and ts > end:
        return False
    return True


def aggregate_child(
    child_id: str,
    time_range: tuple[str | None, str | None] | None,
    store: Store,
    thresholds: BandThresholds = DEFAULT_THRESHOLDS,
) -> dict:
    """Per-word production statistics plus the overall band distribution.

    Counts every attempt_scored event in range; ordering is deterministic
    (words alphabetically). An empty range yields empty stats, not an error.
    """
    rows = [r for r in _child_attempts(child_id, store) if _in_range(r[3], time_range)]
    by_word: dict[str, list[dict]] = {}
    for _, _, payload, _ in rows:
        by_word.setdefault(payload["word"], []).append(payload)
    per_word: list[WordProductionStats] = []
    overall = {band: 0 for band in QualityBand}
    for word in sorted(by_word):
        payloads = by_word[word]
        histogram = {band: 0 for band in QualityBand}
        for p in payloads:
            histogram[band_of(p["distance"], thresholds)] += 1
        for band, count in histogram.items():
            overall[band] += count
        per_word.append(
            WordProductionStats(
                orthography=word,
                production_count=len(payloads),
                band_histogram=histogram,
                mean_distance=sum(p["distance"] for p in payloads) / len(payloads),
            )
        )
    return {
        "child_id": child_id,
        "total_attempts": len(rows),
        "per_word": per_word,
        "band_distribution": overall,
    }


def recording_cards(
    child_id: str,
    filters: dict | None,
    store: Store,
    thresholds: BandThresholds = DEFAULT_THRESHOLDS,
) -> list[RecordingCard]:
    """Per-recording detail cards, newest first.

    ``filters`` may contain ``word``, ``band`` (canonical id), and
    ``session``. Every card's band is recomputed from its stored distance.
    """
    filters = filters or {}
    want_word = filters.get("word")
    want_band = filters.get("band")
    want_session = filters.get("session")
    cards = []
    for session_id, seq, payload, ts in _child_attempts(child_id, store):
        if want_session is not None and session_id != want_session:
            continue
        if want_word is not None and payload["word"] != want_word:
            continue
        band = band_of(payload["distance"], thresholds)
        if want_band is not None and band.value != want_band:
            continue
        cards.append(
            (
                ts,
                session_id,
                seq,
                RecordingCard(
                    attempt_id=payload["attempt_id"],
                    session_id=session_id,
                    ts=ts,
                    word=payload["word"],
                    band=band,
                    band_label=band.display,
                    phonemic_transcript=payload["hypothesis_ipa"],
                    orthographic_transcript=payload["orthographic_transcript"],
                    prompt_text=payload["prompt_text"],
                    distance=payload["distance"],
                    audio_ref=payload["audio_ref"],
                ),
            )
        )
    cards.sort(key=lambda row: (row[0], row[1], row[2]), reverse=True)
    return [card for _, _, _, card in cards]


def export_report(
    child_id: str,
    period: tuple[str | None, str | None] | None,
    store: Store,
    thresholds: BandThresholds = DEFAULT_THRESHOLDS,
) -> dict:
    """Machine-readable progress report; re-export of unchanged data is
    byte-identical (no generation timestamp, stable field order)."""
    aggregate = aggregate_child(child_id, period, store, thresholds)
    cards = [
        card
        for card in recording_cards(child_id, None, store, thresholds)
        if _in_range(card.ts, period)
    ]
    return {
        "report_version": 1,
        "child_id": child_id,
        "period": {
            "from": period[0] if period else None,
            "to": period[1] if period else None,
        },
        "total_attempts": aggregate["total_attempts"],
        "band_distribution": {
            band.value: count for band, count in aggregate["band_distribution"].items()
        },
        "per_word": [
            {
                "word": stats.orthography,
                "production_count": stats.production_count,
                "band_histogram": {
                    band.value: count for band, count in stats.band_histogram.items()
                },
                "mean_distance": stats.mean_distance,
            }
            for stats in aggregate["per_word"]
        ],
        "recordings": [
            {
                "attempt_id": card.attempt_id,
                "session_id": card.session_id,
                "ts": card.ts,
                "word": card.word,
                "band": card.band.value,
                "band_label": card.band_label,
                "distance": card.distance,
                "phonemic_transcript": card.phonemic_transcript,
                "orthographic_transcript": card.orthographic_transcript,
                "prompt_text": card.prompt_text,
                "audio_ref": card.audio_ref,
            }
            for card in cards
        ],
    }


def render_report(report: dict) -> str:
    """Serialize a report document with frozen formatting."""
    return json.dumps(report, ensure_ascii=False, indent=2) + "\n"
