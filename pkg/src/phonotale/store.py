"""File-backed store: stories, append-only session event logs, audio blobs.

Everything is a human-inspectable file under one data directory:

    stories/<story_id>.json        one document per story
    sessions/<id>/events.log       append-only, one JSON record per line
    audio/<ref>                    opaque blobs, content-addressed
    audio/<ref>.txt / <ref>.ipa    stub transcription sidecars
    lexicon/                       optional overrides of the bundled data

Event lines are written with a stable field order ({ts, session_id, kind,
payload}) and fsynced before an append returns, so a crash never loses an
acknowledged event and a restarted process reads back byte-identical state.
"""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .errors import StoreUnavailable, StoryNotFound, UnresolvableAudio
from .session import SessionEvent
from .story import StoryConfig, dump_story, load_story


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            for sub in ("stories", "sessions", "audio", "lexicon"):
                (self.root / sub).mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreUnavailable(f"cannot initialize store at {self.root}: {exc}") from exc

    # --- stories -----------------------------------------------------------

    def story_path(self, story_id: str) -> Path:
        return self.root / "stories" / f"{story_id}.json"

    def save_story(self, config: StoryConfig) -> Path:
        path = self.story_path(config.story_id)
        path.write_text(dump_story(config), encoding="utf-8")
        return path

    def load_story(self, story_id: str) -> StoryConfig:
        path = self.story_path(story_id)
        if not path.is_file():
            raise StoryNotFound(story_id)
        return load_story(path.read_text(encoding="utf-8"))

    def list_stories(self) -> list[StoryConfig]:
        stories = []
        for path in sorted((self.root / "stories").glob("*.json")):
            stories.append(load_story(path.read_text(encoding="utf-8")))
        return stories

    # --- session event logs --------------------------------------------------

    def events_path(self, session_id: str) -> Path:
        return self.root / "sessions" / session_id / "events.log"

    def append_events(self, session_id: str, events: list[SessionEvent]) -> None:
        """Append event records and fsync before returning."""
        path = self.events_path(session_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = []
        for event in events:
            record = {
                "ts": event.ts,
                "session_id": event.session_id,
                "kind": event.kind,
                "payload": event.payload,
            }
            lines.append(json.dumps(record, ensure_ascii=False, separators=(",", ":")))
        with path.open("a", encoding="utf-8") as fh:
            fh.write("".join(line + "\n" for line in lines))
            fh.flush()
            os.fsync(fh.fileno())

    def read_events(self, session_id: str) -> list[SessionEvent]:
        path = self.events_path(session_id)
        if not path.is_file():
            return []
        events = []
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                events.append(
                    SessionEvent(
                        ts=record["ts"],
                        session_id=record["session_id"],
                        kind=record["kind"],
                        payload=record["payload"],
                    )
                )
        return events

    def session_ids(self) -> list[str]:
        base = self.root / "sessions"
        return sorted(p.name for p in base.iterdir() if (p / "events.log").is_file())

    # --- audio blobs ---------------------------------------------------------

    @property
    def audio_dir(self) -> Path:
        return self.root / "audio"

    def save_audio(self, data: bytes) -> str:
        """Store a blob verbatim under a content-addressed reference."""
        ref = "blob-" + hashlib.sha256(data).hexdigest()[:16]
        path = self.audio_dir / ref
        if not path.exists():
            path.write_bytes(data)
        return ref

    def audio_path(self, ref: str) -> Path:
        if "/" in ref or "\\" in ref or ref.startswith("."):
            raise UnresolvableAudio(ref)
        path = self.audio_dir / ref
        if not path.is_file():
            raise UnresolvableAudio(ref)
        return path

    def has_audio(self, ref: str) -> bool:
        try:
            self.audio_path(ref)
            return True
        except UnresolvableAudio:
            return False

    def purge_audio_older_than(self, max_age_days: float, *, now: float) -> int:
        """Retention stub: delete blobs older than the TTL. Returns count."""
        cutoff = now - max_age_days * 86400
        removed = 0
        for path in self.audio_dir.iterdir():
            if path.is_file() and path.stat().st_mtime < cutoff:
                path.unlink()
                removed += 1
        return removed
