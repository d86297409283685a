import random

import pytest

from phonotale.adapters import StubSynthesizer, TranscriptionResult
from phonotale.errors import (
    InvalidOption,
    NoPendingChoice,
    SessionNotActive,
    UnknownAttempt,
    UnsupportedMode,
)
from phonotale.session import (
    LogicalClock,
    apply_choice,
    replay_recording,
    replay_session,
    start_session,
    submit_attempt,
)

from conftest import DATA
from golden_script import event_log_bytes, run_golden_session

SYNTH = StubSynthesizer()


def stub_result(text, ipa):
    return TranscriptionResult(text, ipa, "stub", 0)


GOOD = {  # clean productions per golden-story word
    "rabbit": ("rabbit", "ræbɪt"),
    "river": ("river", "rɪvɚ"),
    "lake": ("lake", "leɪk"),
    "lion": ("lion", "laɪən"),
    "rocket": ("rocket", "rɑkɪt"),
    "leaf": ("leaf", "lif"),
}
SILENT = ("", "")


def drive(state, story, context, lexicon, result, clock, audio_ref="blob-x"):
    return submit_attempt(
        state, story, stub_result(*result), audio_ref, context, lexicon, SYNTH, clock
    )


def test_start_session(golden_story, context):
    clock = LogicalClock()
    state, events = start_session(
        "c1", golden_story, "word", session_id="s-0001", clock=clock
    )
    assert state.status == "active"
    assert state.cursor == ("s1", "s1t1")
    assert [e.kind for e in events] == ["session_started", "turn_presented"]
    assert events[1].payload["parent_tip"]


def test_start_session_unsupported_mode(golden_story):
    from phonotale.story import StoryConfig

    word_only = StoryConfig(**{**golden_story.__dict__, "mode_support": ("word",)})
    with pytest.raises(UnsupportedMode):
        start_session("c1", word_only, "sentence", session_id="s", clock=LogicalClock())


def test_perfect_attempt_advances_and_reads_back(golden_story, context, lexicon):
    clock = LogicalClock()
    state, _ = start_session("c1", golden_story, "word", session_id="s", clock=clock)
    state, outcome, events = drive(state, golden_story, context, lexicon, GOOD["rabbit"], clock)
    assert outcome.kind == "advance"
    assert state.retry_count == 0
    assert state.cursor == ("s1", "s1t2")
    kinds = [e.kind for e in events]
    assert kinds == ["attempt_scored", "sentence_readback", "turn_presented"]
    assert outcome.readback_text == "I see the rabbit!"


def test_retry_escalation_to_proceed_flagged(golden_story, context, lexicon):
    clock = LogicalClock()
    state, _ = start_session("c1", golden_story, "word", session_id="s", clock=clock)
    state, o1, e1 = drive(state, golden_story, context, lexicon, SILENT, clock)
    assert o1.kind == "retry" and o1.feedback == "voice_prompt"
    state, o2, e2 = drive(state, golden_story, context, lexicon, SILENT, clock)
    assert o2.kind == "retry" and o2.feedback == "transcription_cue"
    assert e2[-1].payload["feedback"] == "transcription_cue"
    state, o3, _ = drive(state, golden_story, context, lexicon, SILENT, clock)
    assert o3.kind == "proceed_flagged"
    assert state.cursor == ("s1", "s1t2")
    records = state.attempts
    assert [r.retry_index for r in records] == [0, 1, 2]
    assert [r.feedback_given for r in records] == ["none", "voice_prompt", "transcription_cue"]
    assert [r.proceeded_after_failure for r in records] == [False, False, True]


def test_success_on_retry_records_feedback(golden_story, context, lexicon):
    clock = LogicalClock()
    state, _ = start_session("c1", golden_story, "word", session_id="s", clock=clock)
    state, _, _ = drive(state, golden_story, context, lexicon, SILENT, clock)
    state, outcome, _ = drive(state, golden_story, context, lexicon, GOOD["rabbit"], clock)
    assert outcome.kind == "advance"
    assert state.attempts[-1].retry_index == 1
    assert state.attempts[-1].feedback_given == "voice_prompt"


def test_choice_flow(golden_story, context, lexicon):
    clock = LogicalClock()
    state, _ = start_session("c1", golden_story, "word", session_id="s", clock=clock)
    for word in ("rabbit", "river", "lake"):
        state, outcome, _ = drive(state, golden_story, context, lexicon, GOOD[word], clock)
        assert outcome.kind == "advance"
    assert state.pending_choice
    with pytest.raises(SessionNotActive):
        drive(state, golden_story, context, lexicon, GOOD["lion"], clock)
    with pytest.raises(InvalidOption):
        apply_choice(state, golden_story, "mountain", clock)
    state, events = apply_choice(state, golden_story, "forest", clock)
    assert [e.kind for e in events] == ["choice_made", "turn_presented"]
    assert state.cursor == ("s2", "s2t1")
    assert not state.pending_choice


def test_choice_requires_pending(golden_story, context):
    clock = LogicalClock()
    state, _ = start_session("c1", golden_story, "word", session_id="s", clock=clock)
    with pytest.raises(NoPendingChoice):
        apply_choice(state, golden_story, "forest", clock)


def test_completion(golden_story, context, lexicon):
    clock = LogicalClock()
    state, _ = start_session("c1", golden_story, "word", session_id="s", clock=clock)
    for word in ("rabbit", "river", "lake"):
        state, _, _ = drive(state, golden_story, context, lexicon, GOOD[word], clock)
    state, _ = apply_choice(state, golden_story, "forest", clock)
    for word in ("lion", "rocket"):
        state, _, _ = drive(state, golden_story, context, lexicon, GOOD[word], clock)
    state, outcome, events = drive(state, golden_story, context, lexicon, GOOD["leaf"], clock)
    assert state.status == "completed"
    assert events[-1].kind == "session_completed"
    with pytest.raises(SessionNotActive):
        drive(state, golden_story, context, lexicon, GOOD["leaf"], clock)


def test_replay_recording(golden_story, context, lexicon):
    clock = LogicalClock()
    state, _ = start_session("c1", golden_story, "word", session_id="s", clock=clock)
    state, outcome, _ = drive(
        state, golden_story, context, lexicon, GOOD["rabbit"], clock, audio_ref="blob-42"
    )
    assert replay_recording(state, outcome.score.attempt_id) == "blob-42"
    with pytest.raises(UnknownAttempt):
        replay_recording(state, "someone-elses")


def test_golden_event_log_is_byte_identical(golden_story, context, lexicon):
    events, outcomes = run_golden_session(
        golden_story, context, lexicon, DATA / "golden_audio"
    )
    assert outcomes.count("proceed_flagged") == 1
    got = event_log_bytes(events)
    want = (DATA / "golden_events.log").read_bytes()
    assert got == want


def test_identical_scripts_yield_identical_logs(golden_story, context, lexicon):
    runs = [
        event_log_bytes(
            run_golden_session(golden_story, context, lexicon, DATA / "golden_audio")[0]
        )
        for _ in range(2)
    ]
    assert runs[0] == runs[1]


def test_every_turn_presented_carries_a_tip(golden_story, context, lexicon):
    events, _ = run_golden_session(golden_story, context, lexicon, DATA / "golden_audio")
    presented = [e for e in events if e.kind == "turn_presented"]
    assert presented
    assert all(e.payload["parent_tip"].strip() for e in presented)


def test_replayed_state_matches_live_state(golden_story, context, lexicon):
    events, _ = run_golden_session(golden_story, context, lexicon, DATA / "golden_audio")
    state = replay_session(golden_story, events)
    assert state.status == "completed"
    assert len(state.attempts) == 11
    assert [r.word for r in state.attempts if r.outcome == "proceed_flagged"] == ["lion"]


def random_script_attempts(rng):
    """Random pass/fail script; returns transcription results per submit."""
    def result(word):
        if rng.random() < 0.5:
            return GOOD[word]
        return SILENT
    return result


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_retry_cap_never_exceeded_under_random_scripts(golden_story, context, lexicon, seed):
    rng = random.Random(seed)
    for _ in range(40):
        clock = LogicalClock()
        state, _ = start_session("c1", golden_story, "word", session_id="s", clock=clock)
        pick = random_script_attempts(rng)
        while state.status == "active":
            if state.pending_choice:
                option = rng.choice(["forest", "beach"])
                state, _ = apply_choice(state, golden_story, option, clock)
                continue
            word = golden_story.turn(*state.cursor).blanks[0].allowed_words[0]
            state, outcome, _ = drive(state, golden_story, context, lexicon, pick(word), clock)
        per_prompt: dict = {}
        for record in state.attempts:
            key = (record.scene_id, record.turn_id, record.blank_slot)
            per_prompt[key] = per_prompt.get(key, 0) + 1
            assert record.retry_index <= 2
        assert all(count <= 3 for count in per_prompt.values())
        assert state.status == "completed"
