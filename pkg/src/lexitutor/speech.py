"""Speech provider abstraction.

Real cloud speech services plug in behind this interface; the package ships
only a deterministic mock so the rest of the system is testable offline.
"""

from __future__ import annotations

import io
import wave
from typing import Protocol


class SpeechProviderError(Exception):
    """Raised by providers when transcription or synthesis fails."""


class SpeechProvider(Protocol):
    def transcribe(self, audio: bytes, format: str) -> str:
        """Turn an utterance into text."""

    def synthesize(self, text: str) -> bytes:
        """Turn text into playable audio."""


class MockSpeechProvider:
    """Offline stand-in: fixed transcription, silent WAV synthesis."""

    fixture_text = "i would like to practice my english"

    def transcribe(self, audio: bytes, format: str) -> str:
        return self.fixture_text

    def synthesize(self, text: str) -> bytes:
        """A valid 16 kHz mono WAV of silence, 10 ms per character."""
        buf = io.BytesIO()
        with wave.open(buf, "wb") as wav:
            wav.setnchannels(1)
            wav.setsampwidth(2)
            wav.setframerate(16000)
            wav.writeframes(b"\x00\x00" * (160 * max(1, len(text))))
        return buf.getvalue()
