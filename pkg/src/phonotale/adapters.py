"""Speech adapter contracts and their deterministic offline stubs.

Transcription and synthesis run behind small interfaces so the platform can
swap engines by configuration. The stub implementations are pure functions
of their inputs: transcription reads sidecar fixture files keyed by the
audio reference, synthesis returns a content-addressed id. The whole test
suite runs on stubs with no network access.

Stub fixture layout (one directory):
    <audio_ref>.txt   orthographic transcript
    <audio_ref>.ipa   phonemic transcript (raw IPA)
"""
from __future__ import annotations

import hashlib
import json
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .errors import AdapterFailure, UnresolvableAudio


@dataclass(frozen=True)
class TranscriptionResult:
    orthographic: str
    phonemic: str  # raw IPA, tokenizable by the phonology layer
    engine_id: str
    latency_ms: int

    def __post_init__(self):
        if not self.engine_id:
            raise ValueError("engine_id must be non-empty")


class Transcriber(Protocol):
    def transcribe(self, audio_ref: str) -> TranscriptionResult: ...


class Synthesizer(Protocol):
    def synthesize(self, text: str, voice_profile: str = "default") -> str: ...


class StubTranscriber:
    """Returns committed sidecar fixtures; byte-deterministic, zero latency."""

    engine_id = "stub"

    def __init__(self, fixture_dir: str | Path):
        self.fixture_dir = Path(fixture_dir)

    def transcribe(self, audio_ref: str) -> TranscriptionResult:
        txt = self.fixture_dir / f"{audio_ref}.txt"
        ipa = self.fixture_dir / f"{audio_ref}.ipa"
        if not txt.is_file() or not ipa.is_file():
            raise UnresolvableAudio(audio_ref)
        return TranscriptionResult(
            orthographic=txt.read_text(encoding="utf-8").strip(),
            phonemic=ipa.read_text(encoding="utf-8").strip(),
            engine_id=self.engine_id,
            latency_ms=0,
        )


class StubSynthesizer:
    """Content-addresses the text so identical prompts share one reference."""

    engine_id = "stub"

    def synthesize(self, text: str, voice_profile: str = "default") -> str:
        if not text:
            raise ValueError("cannot synthesize empty text")
        digest = hashlib.sha256(f"{voice_profile}\x00{text}".encode()).hexdigest()
        return f"tts-{digest[:16]}"


class ExternalTranscriber:
    """Thin HTTP client for a hosted transcription engine.

    Posts the audio reference and expects {"orthographic", "phonemic"} back.
    One retry on failure, then AdapterFailure. Never used by tests.
    """

    def __init__(self, endpoint: str, engine_id: str = "external", timeout_s: float = 10.0):
        self.endpoint = endpoint
        self.engine_id = engine_id
        self.timeout_s = timeout_s

    def transcribe(self, audio_ref: str) -> TranscriptionResult:
        payload = json.dumps({"audio_ref": audio_ref}).encode()
        request = urllib.request.Request(
            self.endpoint, data=payload, headers={"Content-Type": "application/json"}
        )
        last_error: Exception | None = None
        for _ in range(2):  # initial call + single retry
            try:
                with urllib.request.urlopen(request, timeout=self.timeout_s) as resp:
                    body = json.loads(resp.read().decode())
                return TranscriptionResult(
                    orthographic=body["orthographic"],
                    phonemic=body["phonemic"],
                    engine_id=self.engine_id,
                    latency_ms=int(body.get("latency_ms", 0)),
                )
            except (urllib.error.URLError, KeyError, ValueError, TimeoutError) as exc:
                last_error = exc
        raise AdapterFailure(self.engine_id, str(last_error))
