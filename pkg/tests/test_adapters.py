import pytest

from phonotale.adapters import StubSynthesizer, StubTranscriber, TranscriptionResult
from phonotale.errors import UnresolvableAudio

from conftest import DATA


@pytest.fixture()
def transcriber():
    return StubTranscriber(DATA / "golden_audio")


def test_stub_returns_sidecar_contents(transcriber):
    result = transcriber.transcribe("g-a01")
    assert result.orthographic == "rabbit"
    assert result.phonemic == "ɹæbɪt"
    assert result.engine_id == "stub"
    assert result.latency_ms == 0


def test_stub_is_pure(transcriber):
    assert transcriber.transcribe("g-a05") == transcriber.transcribe("g-a05")


def test_stub_missing_sidecar(transcriber):
    with pytest.raises(UnresolvableAudio):
        transcriber.transcribe("no-such-ref")


def test_stub_silence_sidecars_are_empty(transcriber):
    result = transcriber.transcribe("g-a02")
    assert result.orthographic == "" and result.phonemic == ""


def test_transcription_result_requires_engine_id():
    with pytest.raises(ValueError):
        TranscriptionResult("a", "ə", "", 0)


def test_synthesizer_is_content_addressed():
    synth = StubSynthesizer()
    a = synth.synthesize("Try again!")
    assert a == synth.synthesize("Try again!")
    assert a != synth.synthesize("try again!")
    assert a != synth.synthesize("Try again!", voice_profile="narrator")


def test_synthesizer_rejects_empty_text():
    with pytest.raises(ValueError):
        StubSynthesizer().synthesize("")


def test_synthesizer_distinct_texts_distinct_ids():
    synth = StubSynthesizer()
    texts = [f"sentence number {i}" for i in range(200)]
    refs = {synth.synthesize(t) for t in texts}
    assert len(refs) == len(texts)
