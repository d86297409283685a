"""Platform service: wires scoring, stories, sessions, adapters, and storage.

One PracticeService instance backs both the HTTP API and the CLI, so both
surfaces score through the identical code path. Session mutation is
serialized per session id; distinct sessions run fully concurrently.

With ``clock: logical`` the whole service is deterministic: session ids are
sequential, timestamps are a counted epoch offset, and stub adapters are
pure lookups, which is what the scripted golden tests rely on.
"""
from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from .adapters import ExternalTranscriber, StubSynthesizer, StubTranscriber
from .analytics import aggregate_child, export_report, recording_cards
from .config import AppConfig
from .errors import SessionNotFound, UnsupportedMode
from .features import FeatureTable, bundled_feature_table, load_feature_table
from .lexicon import Lexicon, TargetSpec, bundled_lexicon, load_lexicon, recommend_words, to_ipa
from .scoring import ScoringContext
from .session import (
    LogicalClock,
    SessionState,
    WallClock,
    apply_choice,
    replay_recording,
    replay_session,
    start_session,
    submit_attempt,
)
from .store import Store
from .story import (
    GenerationSpec,
    StoryConfig,
    generate_story_from_template,
    marked_words,
    validate_story,
)

_TS_FORMATS = ("%Y-%m-%dT%H:%M:%S.%fZ", "%Y-%m-%dT%H:%M:%SZ")


def _parse_ts(ts: str):
    for fmt in _TS_FORMATS:
        try:
            return datetime.strptime(ts, fmt).replace(tzinfo=timezone.utc)
        except ValueError:
            continue
    return None


_MOUTH_CUES: dict | None = None


def mouth_cues() -> dict:
    global _MOUTH_CUES
    if _MOUTH_CUES is None:
        ref = resources.files("phonotale").joinpath("data/mouth_cues.json")
        _MOUTH_CUES = json.loads(ref.read_text(encoding="utf-8"))
    return _MOUTH_CUES


def cues_for(phonemes) -> list[dict]:
    cues = mouth_cues()
    out = []
    for p in phonemes:
        cue = cues.get(p)
        if cue is not None:
            out.append({"phoneme": p, **cue})
        else:
            out.append(
                {
                    "phoneme": p,
                    "image_ref": "cue-mouth-generic",
                    "placement": f"Watch a grown-up say /{p}/ and copy the mouth.",
                    "gesture_tip": f"Tap the table each time you say /{p}/.",
                }
            )
    return out


class PracticeService:
    def __init__(self, config: AppConfig):
        self.config = config
        self.store = Store(config.data_dir)
        self.table = self._load_table(config)
        self.lexicon = self._load_lexicon(config)
        self.context = ScoringContext(self.table, config.thresholds())
        self.synthesizer = StubSynthesizer()
        if config.adapter_mode == "external":
            self.transcriber = ExternalTranscriber(config.external_endpoint)
        else:
            self.transcriber = StubTranscriber(self.store.audio_dir)
        self._sessions: dict[str, tuple[SessionState, object, StoryConfig]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    @staticmethod
    def _load_table(config: AppConfig) -> FeatureTable:
        if config.lexicon_dir:
            path = Path(config.lexicon_dir) / "feature_table.tsv"
            if path.is_file():
                return load_feature_table(path)
        return bundled_feature_table()

    @staticmethod
    def _load_lexicon(config: AppConfig) -> Lexicon:
        if config.lexicon_dir:
            base = Path(config.lexicon_dir)
            dic = base / "lexicon.txt"
            mapping = base / "arpabet_ipa.tsv"
            if dic.is_file() and mapping.is_file():
                ranks = base / "word_ranks.txt"
                return load_lexicon(dic, mapping, ranks if ranks.is_file() else None)
        return bundled_lexicon()

    # --- deterministic plumbing ---------------------------------------------

    def _lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _new_clock(self, ticks: int = 0):
        if self.config.clock == "logical":
            return LogicalClock(ticks)
        return WallClock()

    def _new_session_id(self) -> str:
        with self._registry_lock:
            numbers = [0]
            for sid in self.store.session_ids():
                if sid.startswith("s-") and sid[2:].isdigit():
                    numbers.append(int(sid[2:]))
            return f"s-{max(numbers) + 1:04d}"

    # --- stories --------------------------------------------------------------

    def generate_story(self, spec: GenerationSpec) -> StoryConfig:
        return generate_story_from_template(spec, self.lexicon)

    def validate(self, story: StoryConfig):
        return validate_story(story, self.lexicon)

    def save_story(self, story: StoryConfig) -> None:
        self.store.save_story(story)

    def recommend(self, phoneme: str, position: str, count: int) -> list[str]:
        self.table.vector(phoneme)  # target phoneme must be a known phone
        return recommend_words(TargetSpec(phoneme, position, count), self.lexicon)

    def word_card(self, word: str) -> dict:
        seq = to_ipa(word, self.lexicon)
        symbols = seq.symbols()
        return {
            "word": word.lower(),
            "ipa": symbols,
            "audio_ref": self.synthesizer.synthesize(word.lower()),
            "mouth_cues": cues_for([s for s in symbols if s in mouth_cues()]),
        }

    # --- sessions ---------------------------------------------------------------

    def create_session(self, child_id: str, story_id: str, mode: str) -> dict:
        story = self.store.load_story(story_id)
        if mode not in ("word", "sentence"):
            raise UnsupportedMode(mode, story_id)
        session_id = self._new_session_id()
        clock = self._new_clock()
        state, events = start_session(
            child_id, story, mode, session_id=session_id, clock=clock
        )
        self.store.append_events(session_id, events)
        self._sessions[session_id] = (state, clock, story)
        return self.session_summary(session_id)

    def _get(self, session_id: str) -> tuple[SessionState, object, StoryConfig]:
        cached = self._sessions.get(session_id)
        if cached is not None:
            return cached
        events = self.store.read_events(session_id)
        if not events:
            raise SessionNotFound(session_id)
        story = self.store.load_story(events[0].payload["story_id"])
        state = replay_session(story, events, self.config.thresholds())
        clock = self._new_clock(ticks=len(events))
        self._sessions[session_id] = (state, clock, story)
        return state, clock, story

    def _status_at_read(self, state: SessionState, session_id: str) -> str:
        """Inactivity-based abandonment, computed on read (log untouched).

        Only meaningful under the wall clock; deterministic logical runs
        never abandon.
        """
        if state.status != "active" or self.config.clock == "logical":
            return state.status
        events = self.store.read_events(session_id)
        if not events:
            return state.status
        last = _parse_ts(events[-1].ts)
        if last is None:
            return state.status
        age_minutes = (datetime.now(timezone.utc) - last).total_seconds() / 60
        if age_minutes > self.config.inactivity_timeout_minutes:
            return "abandoned"
        return state.status

    def session_summary(self, session_id: str) -> dict:
        state, _, story = self._get(session_id)
        return {
            "session_id": state.session_id,
            "child_id": state.child_id,
            "story_id": state.story_id,
            "story_title": story.title,
            "mode": state.mode,
            "status": self._status_at_read(state, session_id),
            "cursor": {"scene_id": state.cursor[0], "turn_id": state.cursor[1]},
            "blank_index": state.blank_index,
            "retry_count": state.retry_count,
            "pending_choice": state.pending_choice,
            "attempt_count": len(state.attempts),
        }

    def current_turn(self, session_id: str) -> dict:
        state, _, story = self._get(session_id)
        scene = story.scene(state.cursor[0])
        turn = story.turn(*state.cursor)
        if state.status != "active" or scene is None or turn is None:
            return {"session_id": session_id, "status": state.status, "turn": None}
        highlighted = marked_words(turn.character_line)
        target_words = [w for w in highlighted if w in story.target_words] or list(
            story.target_words
        )
        payload = {
            "session_id": session_id,
            "status": state.status,
            "mode": state.mode,
            "scene_id": scene.scene_id,
            "image_ref": scene.image_ref,
            "turn": {
                "turn_id": turn.turn_id,
                "character_line": turn.character_line,
                "parent_tip": turn.parent_tip,
                "expected_response": turn.expected_response,
                "highlighted_words": highlighted,
                "bombardment_count": turn.bombardment_count,
                "blanks": [
                    {"slot": b.slot, "allowed_words": list(b.allowed_words)}
                    for b in sorted(turn.blanks, key=lambda b: b.slot)
                ],
                "blank_index": state.blank_index,
            },
            "target_words": target_words,
            "mouth_cues": cues_for(story.target_phonemes),
            "pending_choice": state.pending_choice,
            "choice": None,
            "retry_count": state.retry_count,
        }
        if state.pending_choice and scene.choice is not None:
            payload["choice"] = {
                "prompt": scene.choice.prompt,
                "options": [
                    {"option_id": o.option_id, "label": o.label}
                    for o in scene.choice.options
                ],
            }
        return payload

    def submit(self, session_id: str, audio_ref: str) -> dict:
        with self._lock(session_id):
            state, clock, story = self._get(session_id)
            transcription = self.transcriber.transcribe(audio_ref)
            state, outcome, events = submit_attempt(
                state,
                story,
                transcription,
                audio_ref,
                self.context,
                self.lexicon,
                self.synthesizer,
                clock,
            )
            self.store.append_events(session_id, events)
            self._sessions[session_id] = (state, clock, story)
        score = outcome.score
        return {
            "outcome": outcome.kind,
            "feedback": outcome.feedback,
            "readback_text": outcome.readback_text,
            "session_status": state.status,
            "pending_choice": state.pending_choice,
            "score": {
                "attempt_id": score.attempt_id,
                "word": score.target.orthography,
                "distance": score.distance,
                "pfer": score.pfer,
                "band": score.band.value,
                "band_label": score.band.display,
                "target_found": score.target_found,
                "orthographic_transcript": score.orthographic_transcript,
                "phonemic_transcript": " ".join(score.hypothesis.symbols()),
                "audio_ref": score.audio_ref,
            },
        }

    def submit_blob(self, session_id: str, data: bytes) -> dict:
        return self.submit(session_id, self.store.save_audio(data))

    def choose(self, session_id: str, option_id: str) -> dict:
        with self._lock(session_id):
            state, clock, story = self._get(session_id)
            state, events = apply_choice(state, story, option_id, clock)
            self.store.append_events(session_id, events)
            self._sessions[session_id] = (state, clock, story)
        return self.session_summary(session_id)

    def replay(self, session_id: str, attempt_id: str) -> str:
        state, _, _ = self._get(session_id)
        return replay_recording(state, attempt_id)

    # --- dashboard ---------------------------------------------------------------

    def dashboard(self, child_id: str, time_range=None) -> dict:
        aggregate = aggregate_child(
            child_id, time_range, self.store, self.config.thresholds()
        )
        return {
            "child_id": aggregate["child_id"],
            "total_attempts": aggregate["total_attempts"],
            "band_distribution": {
                band.value: count
                for band, count in aggregate["band_distribution"].items()
            },
            "per_word": [
                {
                    "word": stats.orthography,
                    "production_count": stats.production_count,
                    "band_histogram": {
                        band.value: count
                        for band, count in stats.band_histogram.items()
                    },
                    "mean_distance": stats.mean_distance,
                }
                for stats in aggregate["per_word"]
            ],
        }

    def cards(self, child_id: str, filters: dict | None = None) -> list[dict]:
        return [
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
            for card in recording_cards(
                child_id, filters, self.store, self.config.thresholds()
            )
        ]

    def report(self, child_id: str, period=None) -> dict:
        return export_report(child_id, period, self.store, self.config.thresholds())
