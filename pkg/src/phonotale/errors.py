"""Exception hierarchy shared across the package."""
from __future__ import annotations


class PhonotaleError(Exception):
    """Base class for all package errors."""


class UnknownSymbol(PhonotaleError):
    """A character or segment is not covered by the tokenizer or feature table."""

    def __init__(self, symbol: str, index: int | None = None):
        self.symbol = symbol
        self.index = index
        where = f" at index {index}" if index is not None else ""
        super().__init__(f"unknown IPA symbol {symbol!r}{where}")


class EmptyReference(PhonotaleError):
    """PFER is undefined for an empty reference sequence."""


class NegativeDistance(PhonotaleError):
    """Quality bands are only defined for non-negative distances."""


class ParseError(PhonotaleError):
    """A data file line could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownPhoneCode(ParseError):
    """A pronouncing-dictionary phone code has no IPA mapping."""

    def __init__(self, code: str, line: int | None = None):
        self.code = code
        super().__init__(f"unknown phone code {code!r}", line)


class OutOfVocabulary(PhonotaleError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"word not in lexicon: {word!r}")


class NoMatch(PhonotaleError):
    """Word recommendation found zero candidates."""


class TemplateNotFound(PhonotaleError):
    def __init__(self, template_id: str):
        self.template_id = template_id
        super().__init__(f"no story template named {template_id!r}")


class InsufficientWords(PhonotaleError):
    def __init__(self, needed: int, got: int):
        self.needed = needed
        self.got = got
        super().__init__(f"template needs at least {needed} words, got {got}")


class StoryNotFound(PhonotaleError):
    def __init__(self, story_id: str):
        self.story_id = story_id
        super().__init__(f"no story with id {story_id!r}")


class UnsupportedMode(PhonotaleError):
    def __init__(self, mode: str, story_id: str):
        super().__init__(f"story {story_id!r} does not support mode {mode!r}")


class SessionNotActive(PhonotaleError):
    def __init__(self, session_id: str, status: str):
        super().__init__(f"session {session_id!r} is {status}, not active")


class SessionNotFound(PhonotaleError):
    def __init__(self, session_id: str):
        super().__init__(f"no session with id {session_id!r}")


class InvalidOption(PhonotaleError):
    def __init__(self, option_id: str):
        super().__init__(f"no such choice option: {option_id!r}")


class NoPendingChoice(PhonotaleError):
    def __init__(self, session_id: str):
        super().__init__(f"session {session_id!r} has no pending choice")


class UnknownAttempt(PhonotaleError):
    def __init__(self, attempt_id: str):
        super().__init__(f"no attempt {attempt_id!r} in this session")


class AdapterFailure(PhonotaleError):
    """An external transcription/synthesis adapter failed."""

    def __init__(self, engine_id: str, cause: str):
        self.engine_id = engine_id
        self.cause = cause
        super().__init__(f"adapter {engine_id!r} failed: {cause}")


class UnresolvableAudio(PhonotaleError):
    def __init__(self, audio_ref: str):
        self.audio_ref = audio_ref
        super().__init__(f"audio reference cannot be resolved: {audio_ref!r}")


class StoreUnavailable(PhonotaleError):
    """The data directory is missing or unreadable."""
