"""Practice session state machine.

One session walks a child through a story turn by turn. Every submitted
attempt is scored; a failed prompt may be retried up to RETRY_CAP times
(voice prompt first, then the transcription of the child's own recording as
a cue), after which the story proceeds with the attempt flagged rather than
stalling the child. Word mode fills madlib blanks and reads the finished
sentence back; sentence mode expects the whole sentence with the target
word in it.

The engine is deterministic and side-effect free: commands return the new
state plus the emitted events, and a session can be rebuilt by folding its
event log. Timestamps come from an injected clock so scripted runs are
byte-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Literal

from .adapters import Synthesizer, TranscriptionResult
from .errors import (
    InvalidOption,
    NoPendingChoice,
    SessionNotActive,
    UnknownAttempt,
    UnsupportedMode,
)
from .lexicon import Lexicon, to_ipa
from .scoring import (
    AttemptScore,
    ReferencePronunciation,
    ScoringContext,
    score_sentence_attempt,
    score_word_attempt,
)
from .distance import BandThresholds, DEFAULT_THRESHOLDS, QualityBand
from .story import StoryConfig, Scene, Turn, WORD_MODE, marked_words

RETRY_CAP = 2

# cue delivered for the attempt at each retry index
FEEDBACK_BY_RETRY = ("none", "voice_prompt", "transcription_cue")

EVENT_KINDS = (
    "session_started",
    "turn_presented",
    "attempt_scored",
    "retry_prompted",
    "choice_made",
    "sentence_readback",
    "session_completed",
)

Mode = Literal["word", "sentence"]
OutcomeKind = Literal["advance", "retry", "proceed_flagged"]


class WallClock:
    def now(self) -> str:
        return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class LogicalClock:
    """Deterministic clock: a fixed epoch advanced one second per call."""

    EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)

    def __init__(self, ticks: int = 0):
        self.ticks = ticks

    def now(self) -> str:
        ts = self.EPOCH + timedelta(seconds=self.ticks)
        self.ticks += 1
        return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class SessionEvent:
    ts: str
    session_id: str
    kind: str
    payload: dict

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")


@dataclass(frozen=True)
class AttemptRecord:
    score: AttemptScore
    retry_index: int
    feedback_given: str
    proceeded_after_failure: bool
    scene_id: str
    turn_id: str
    blank_slot: int
    word: str
    outcome: OutcomeKind

    def __post_init__(self):
        if not 0 <= self.retry_index <= RETRY_CAP:
            raise ValueError(f"retry_index out of range: {self.retry_index}")
        if self.retry_index >= 1 and self.feedback_given == "none":
            raise ValueError("retries must carry feedback")


@dataclass
class SessionState:
    session_id: str
    child_id: str
    story_id: str
    mode: Mode
    cursor: tuple[str, str]  # (scene_id, turn_id)
    blank_index: int = 0
    retry_count: int = 0
    attempts: list[AttemptRecord] = field(default_factory=list)
    status: str = "active"  # active | completed | abandoned
    pending_choice: bool = False

    def next_attempt_id(self) -> str:
        return f"{self.session_id}-a{len(self.attempts) + 1:03d}"


@dataclass(frozen=True)
class Outcome:
    kind: OutcomeKind
    score: AttemptScore
    feedback: str  # cue to deliver before the next attempt, "none" otherwise
    readback_text: str = ""


def _first_cursor(story: StoryConfig) -> tuple[str, str]:
    scene = story.scenes[0]
    return scene.scene_id, scene.turns[0].turn_id


def _turn_presented(state: SessionState, story: StoryConfig, clock) -> SessionEvent:
    scene_id, turn_id = state.cursor
    turn = story.turn(scene_id, turn_id)
    assert turn is not None
    return SessionEvent(
        ts=clock.now(),
        session_id=state.session_id,
        kind="turn_presented",
        payload={
            "scene_id": scene_id,
            "turn_id": turn_id,
            "character_line": turn.character_line,
            "parent_tip": turn.parent_tip,
            "target_words": marked_words(turn.character_line),
            "expected_response": turn.expected_response,
            "blank_index": state.blank_index,
        },
    )


def start_session(
    child_id: str,
    story: StoryConfig,
    mode: Mode,
    *,
    session_id: str,
    clock,
) -> tuple[SessionState, list[SessionEvent]]:
    """Open a session at the story's first turn."""
    if not story.supports(mode):
        raise UnsupportedMode(mode, story.story_id)
    state = SessionState(
        session_id=session_id,
        child_id=child_id,
        story_id=story.story_id,
        mode=mode,
        cursor=_first_cursor(story),
    )
    started = SessionEvent(
        ts=clock.now(),
        session_id=session_id,
        kind="session_started",
        payload={"child_id": child_id, "story_id": story.story_id, "mode": mode},
    )
    return state, [started, _turn_presented(state, story, clock)]


def _current_turn(state: SessionState, story: StoryConfig) -> tuple[Scene, Turn]:
    scene = story.scene(state.cursor[0])
    turn = story.turn(*state.cursor) if scene else None
    if scene is None or turn is None:
        raise SessionNotActive(state.session_id, f"cursor {state.cursor} is invalid")
    return scene, turn


def _sorted_blanks(turn: Turn):
    return sorted(turn.blanks, key=lambda b: b.slot)


def _score_candidates(
    state: SessionState,
    turn: Turn,
    transcription: TranscriptionResult,
    audio_ref: str,
    context: ScoringContext,
    lexicon: Lexicon,
    attempt_id: str,
    timestamp: str,
) -> AttemptScore:
    """Score the prompt against each allowed word and keep the best match."""
    blanks = _sorted_blanks(turn)
    if state.mode == WORD_MODE and blanks:
        words = blanks[state.blank_index].allowed_words
    elif blanks:
        words = tuple(dict.fromkeys(w for b in blanks for w in b.allowed_words))
    else:
        words = tuple(marked_words(turn.character_line)[:1])
    if not words:
        raise ValueError(f"turn {turn.turn_id!r} declares no word to score")
    scored: list[AttemptScore] = []
    for word in words:
        target = ReferencePronunciation(word, to_ipa(word, lexicon))
        if state.mode == WORD_MODE:
            score = score_word_attempt(
                target,
                transcription.phonemic,
                context,
                attempt_id=attempt_id,
                orthographic_transcript=transcription.orthographic,
                audio_ref=audio_ref,
                timestamp=timestamp,
            )
        else:
            score = score_sentence_attempt(
                target,
                transcription.phonemic,
                context,
                orthographic_transcript=transcription.orthographic,
                attempt_id=attempt_id,
                audio_ref=audio_ref,
                timestamp=timestamp,
            )
        scored.append(score)
    # prefer a found target, then the smallest distance, then listed order
    return min(scored, key=lambda s: (not s.target_found, s.distance))


def _readback_text(state: SessionState, turn: Turn, current_word: str) -> str:
    """The finished madlib sentence, flagged slots filled with their target."""
    blanks = _sorted_blanks(turn)
    text = turn.expected_response
    for blank in blanks:
        word = blank.allowed_words[0]
        if blank.slot == blanks[state.blank_index].slot:
            word = current_word
        else:
            for rec in reversed(state.attempts):
                if (
                    rec.turn_id == turn.turn_id
                    and rec.blank_slot == blank.slot
                    and rec.outcome == "advance"
                ):
                    word = rec.word
                    break
        text = text.replace("{" + str(blank.slot) + "}", word)
    return text


def _advance(
    state: SessionState, story: StoryConfig, events: list[SessionEvent], clock
) -> None:
    """Move past the current turn: next turn, pending choice, or completion."""
    scene, turn = _current_turn(state, story)
    turn_ids = [t.turn_id for t in scene.turns]
    idx = turn_ids.index(turn.turn_id)
    state.retry_count = 0
    state.blank_index = 0
    if idx + 1 < len(scene.turns):
        state.cursor = (scene.scene_id, scene.turns[idx + 1].turn_id)
        events.append(_turn_presented(state, story, clock))
        return
    if scene.choice is not None:
        state.pending_choice = True
        return
    scene_ids = [s.scene_id for s in story.scenes]
    s_idx = scene_ids.index(scene.scene_id)
    if s_idx + 1 < len(story.scenes):
        nxt = story.scenes[s_idx + 1]
        state.cursor = (nxt.scene_id, nxt.turns[0].turn_id)
        events.append(_turn_presented(state, story, clock))
        return
    state.status = "completed"
    events.append(
        SessionEvent(
            ts=clock.now(),
            session_id=state.session_id,
            kind="session_completed",
            payload={"status": "completed", "attempt_count": len(state.attempts)},
        )
    )


def submit_attempt(
    state: SessionState,
    story: StoryConfig,
    transcription: TranscriptionResult,
    audio_ref: str,
    context: ScoringContext,
    lexicon: Lexicon,
    synthesizer: Synthesizer,
    clock,
) -> tuple[SessionState, Outcome, list[SessionEvent]]:
    """Score one recorded attempt and step the state machine.

    Success (target found, band better than Need Practice) advances; failure
    retries up to RETRY_CAP times with escalating feedback; a third failure
    proceeds with the record flagged so the child is never stalled.
    """
    if state.status != "active":
        raise SessionNotActive(state.session_id, state.status)
    if state.pending_choice:
        raise SessionNotActive(state.session_id, "waiting on a choice")
    scene, turn = _current_turn(state, story)
    attempt_id = state.next_attempt_id()
    timestamp = clock.now()
    score = _score_candidates(
        state, turn, transcription, audio_ref, context, lexicon, attempt_id, timestamp
    )
    success = score.target_found and score.band is not QualityBand.NEEDS_PRACTICE

    blanks = _sorted_blanks(turn)
    blank_slot = blanks[state.blank_index].slot if blanks else 0
    retry_index = state.retry_count
    feedback_given = FEEDBACK_BY_RETRY[retry_index]

    if success:
        outcome_kind: OutcomeKind = "advance"
    elif state.retry_count < RETRY_CAP:
        outcome_kind = "retry"
    else:
        outcome_kind = "proceed_flagged"

    last_blank = not blanks or state.blank_index == len(blanks) - 1
    next_blank_index = None
    if outcome_kind in ("advance", "proceed_flagged") and not last_blank:
        next_blank_index = state.blank_index + 1

    record = AttemptRecord(
        score=score,
        retry_index=retry_index,
        feedback_given=feedback_given,
        proceeded_after_failure=outcome_kind == "proceed_flagged",
        scene_id=scene.scene_id,
        turn_id=turn.turn_id,
        blank_slot=blank_slot,
        word=score.target.orthography,
        outcome=outcome_kind,
    )

    events = [
        SessionEvent(
            ts=timestamp,
            session_id=state.session_id,
            kind="attempt_scored",
            payload=_attempt_payload(record, turn, next_blank_index),
        )
    ]

    readback_text = ""
    if outcome_kind == "retry":
        state.attempts.append(record)
        state.retry_count += 1
        feedback = FEEDBACK_BY_RETRY[state.retry_count]
        events.append(
            SessionEvent(
                ts=clock.now(),
                session_id=state.session_id,
                kind="retry_prompted",
                payload={
                    "attempt_id": attempt_id,
                    "retry_index": state.retry_count,
                    "feedback": feedback,
                    "transcription_cue": score.orthographic_transcript
                    if feedback == "transcription_cue"
                    else "",
                },
            )
        )
        return state, Outcome("retry", score, feedback), events

    # advance or proceed_flagged
    state.attempts.append(record)
    if (
        outcome_kind == "advance"
        and state.mode == WORD_MODE
        and blanks
        and last_blank
    ):
        readback_text = _readback_text(state, turn, score.target.orthography)
        events.append(
            SessionEvent(
                ts=clock.now(),
                session_id=state.session_id,
                kind="sentence_readback",
                payload={
                    "scene_id": scene.scene_id,
                    "turn_id": turn.turn_id,
                    "text": readback_text,
                    "audio_ref": synthesizer.synthesize(readback_text),
                },
            )
        )
    if next_blank_index is not None:
        state.blank_index = next_blank_index
        state.retry_count = 0
    else:
        _advance(state, story, events, clock)
    return state, Outcome(outcome_kind, score, "none", readback_text), events


def _attempt_payload(record: AttemptRecord, turn: Turn, next_blank_index: int | None) -> dict:
    score = record.score
    return {
        "attempt_id": score.attempt_id,
        "scene_id": record.scene_id,
        "turn_id": record.turn_id,
        "blank_slot": record.blank_slot,
        "word": record.word,
        "retry_index": record.retry_index,
        "feedback_given": record.feedback_given,
        "outcome": record.outcome,
        "next_blank_index": next_blank_index,
        "proceeded_after_failure": record.proceeded_after_failure,
        "distance": score.distance,
        "pfer": score.pfer,
        "band": score.band.value,
        "target_found": score.target_found,
        "target_ipa": " ".join(score.target.phonemes.symbols()),
        "hypothesis_ipa": " ".join(score.hypothesis.symbols()),
        "orthographic_transcript": score.orthographic_transcript,
        "prompt_text": turn.expected_response,
        "audio_ref": score.audio_ref,
    }


def apply_choice(
    state: SessionState, story: StoryConfig, option_id: str, clock
) -> tuple[SessionState, list[SessionEvent]]:
    """Branch to the chosen scene and present its first turn."""
    if state.status != "active":
        raise SessionNotActive(state.session_id, state.status)
    if not state.pending_choice:
        raise NoPendingChoice(state.session_id)
    scene = story.scene(state.cursor[0])
    assert scene is not None and scene.choice is not None
    option = next((o for o in scene.choice.options if o.option_id == option_id), None)
    if option is None:
        raise InvalidOption(option_id)
    target_scene = story.scene(option.next_scene_id)
    assert target_scene is not None
    state.pending_choice = False
    state.cursor = (target_scene.scene_id, target_scene.turns[0].turn_id)
    state.retry_count = 0
    state.blank_index = 0
    events = [
        SessionEvent(
            ts=clock.now(),
            session_id=state.session_id,
            kind="choice_made",
            payload={
                "scene_id": scene.scene_id,
                "option_id": option_id,
                "next_scene_id": option.next_scene_id,
            },
        ),
        _turn_presented(state, story, clock),
    ]
    return state, events


def replay_recording(state: SessionState, attempt_id: str) -> str:
    """Audio reference of one of this session's attempts; read-only."""
    for record in state.attempts:
        if record.score.attempt_id == attempt_id:
            return record.score.audio_ref
    raise UnknownAttempt(attempt_id)


# --- event-log replay ------------------------------------------------------

def replay_session(
    story: StoryConfig,
    events: list[SessionEvent],
    thresholds: BandThresholds = DEFAULT_THRESHOLDS,
) -> SessionState:
    """Rebuild session state by folding its event log.

    Events produced by one engine command are appended atomically, so any
    transiently stale fields are corrected by later events in the same log.
    """
    state: SessionState | None = None
    for event in events:
        p = event.payload
        if event.kind == "session_started":
            state = SessionState(
                session_id=event.session_id,
                child_id=p["child_id"],
                story_id=p["story_id"],
                mode=p["mode"],
                cursor=_first_cursor(story),
            )
            continue
        assert state is not None, "log must start with session_started"
        if event.kind == "turn_presented":
            state.cursor = (p["scene_id"], p["turn_id"])
            state.blank_index = p.get("blank_index", 0)
            state.retry_count = 0
            state.pending_choice = False
        elif event.kind == "attempt_scored":
            state.attempts.append(_record_from_payload(p, thresholds, event.ts))
            if p["outcome"] == "retry":
                state.retry_count = p["retry_index"] + 1
            else:
                state.retry_count = 0
                if p.get("next_blank_index") is not None:
                    state.blank_index = p["next_blank_index"]
                else:
                    scene = story.scene(p["scene_id"])
                    if (
                        scene is not None
                        and scene.choice is not None
                        and scene.turns[-1].turn_id == p["turn_id"]
                    ):
                        state.pending_choice = True
        elif event.kind == "choice_made":
            state.pending_choice = False
        elif event.kind == "session_completed":
            state.status = p.get("status", "completed")
    if state is None:
        raise ValueError("empty event log")
    return state


def _record_from_payload(p: dict, thresholds: BandThresholds, ts: str) -> AttemptRecord:
    from .phonology import PhoneSeq

    target = ReferencePronunciation(
        p["word"], PhoneSeq.from_symbols(p["target_ipa"].split())
    )
    hyp_syms = p["hypothesis_ipa"].split()
    score = AttemptScore(
        attempt_id=p["attempt_id"],
        target=target,
        hypothesis=PhoneSeq.from_symbols(hyp_syms),
        orthographic_transcript=p["orthographic_transcript"],
        distance=p["distance"],
        pfer=p["pfer"],
        band=QualityBand(p["band"]),
        target_found=p["target_found"],
        audio_ref=p["audio_ref"],
        timestamp=ts,
        thresholds=thresholds,
    )
    return AttemptRecord(
        score=score,
        retry_index=p["retry_index"],
        feedback_given=p["feedback_given"],
        proceeded_after_failure=p["proceeded_after_failure"],
        scene_id=p["scene_id"],
        turn_id=p["turn_id"],
        blank_slot=p["blank_slot"],
        word=p["word"],
        outcome=p["outcome"],
    )
