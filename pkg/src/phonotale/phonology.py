"""IPA segmentation and normalization.

A transcription string is segmented into phones: one segment per base IPA
character, with combining diacritics and modifier letters attached to the
preceding base, and tie-bar pairs (affricates) kept as a single segment.
Suprasegmental marks (stress, length, tone, syllable breaks, word boundaries)
carry no information for feature scoring and are dropped during segmentation.

Cleaning additionally strips every diacritic except the rhotic hook, and
rhotic normalization rewrites schwa+r sequences to the r-colored vowels, so
that downstream scoring sees bare citation-form phones.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import UnknownSymbol

# Suprasegmentals dropped during segmentation: stress, length, syllable and
# word boundaries, tone letters and tone/stress accents, linking marks.
# ASCII digits are treated as tone numbers.
_MARKS = frozenset(
    "ˈˌ'"        # stress
    "ːˑ:"        # length
    "."          # syllable break
    "|‖ \t\n\r "  # word boundaries
    "‿"          # linking
    "˥˦˧˨˩ꜛꜜ↑↓↗↘"  # tone letters and pitch arrows
    "̀́̂̄̆̋̌̏"  # tone/stress accents
    "᷄᷅᷆᷇᷈᷉"  # contour tone accents
    "0123456789"
)

# Tie bars bind the previous and next base character into one segment.
_TIES = frozenset("͜͡")

# Spacing modifier letters that attach to the preceding base.
_SPACING_MODIFIERS = frozenset(
    "ʰʱʲʳʴʵʶʷʸ"  # ʰʱʲʳʴʵʶʷʸ
    "ʼˀˁ"  # ʼˀˁ
    "˒˓˔˕˖˗"
    "ˠˡˢˣˤ"  # ˠˡˢˣˤ
    "ⁿ"  # ⁿ
)

# The rhotic hook is the one diacritic cleaning keeps.
RHOTIC_HOOK = "˞"  # ˞

# Base letters outside the IPA Extensions block.
_EXTRA_BASES = frozenset("æðøŋçœħθβχ")


def _is_modifier(ch: str) -> bool:
    if ch in _SPACING_MODIFIERS or ch == RHOTIC_HOOK:
        return True
    # combining diacritics, minus tie bars and the accents classed as marks
    return "̀" <= ch <= "ͯ" and ch not in _TIES and ch not in _MARKS


def _is_base(ch: str) -> bool:
    if ch.isascii():
        return ch.isalpha()
    return "ɐ" <= ch <= "ʯ" or ch in _EXTRA_BASES


@dataclass(frozen=True)
class PhoneSegment:
    """One phone: a base IPA character with its retained modifiers.

    ``features`` is the 24-entry ternary articulatory vector, populated once
    the segment has been resolved against a :class:`FeatureTable`; it is
    ``None`` for segments that have only been tokenized.
    """

    symbol: str
    features: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.symbol or any(ch in _MARKS for ch in self.symbol):
            raise ValueError(f"invalid segment symbol {self.symbol!r}")
        if self.features is not None and len(self.features) != 24:
            raise ValueError("feature vector must have exactly 24 entries")

    def __str__(self) -> str:
        return self.symbol


class PhoneSeq:
    """Ordered, immutable sequence of phone segments. May be empty."""

    __slots__ = ("segments",)

    def __init__(self, segments: Iterable[PhoneSegment] = ()):
        self.segments: tuple[PhoneSegment, ...] = tuple(segments)

    @classmethod
    def from_symbols(cls, symbols: Iterable[str]) -> PhoneSeq:
        return cls(PhoneSegment(s) for s in symbols)

    def symbols(self) -> list[str]:
        return [seg.symbol for seg in self.segments]

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self) -> Iterator[PhoneSegment]:
        return iter(self.segments)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return PhoneSeq(self.segments[i])
        return self.segments[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhoneSeq):
            return NotImplemented
        return self.symbols() == other.symbols()

    def __hash__(self) -> int:
        return hash(tuple(self.symbols()))

    def __repr__(self) -> str:
        return "[" + " ".join(self.symbols()) + "]"


def tokenize_ipa(raw: str) -> PhoneSeq:
    """Segment an IPA string into phones.

    One segment per base character; combining diacritics and modifier letters
    attach to the preceding base; a tie bar binds two bases into one segment;
    diphthongs written without a tie bar come out as two segments.
    Suprasegmental marks are dropped.

    Raises UnknownSymbol for any character that is neither a known base, a
    modifier, nor a strippable mark, or for a modifier with no base to
    attach to.
    """
    text = unicodedata.normalize("NFD", raw)
    segments: list[PhoneSegment] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _MARKS:
            i += 1
            continue
        if not _is_base(ch):
            raise UnknownSymbol(ch, index=i)
        chars = [ch]
        i += 1
        while i < n:
            ch = text[i]
            if ch in _MARKS:
                i += 1
                continue
            if ch in _TIES and i + 1 < n and _is_base(text[i + 1]):
                chars.append(ch)
                chars.append(text[i + 1])
                i += 2
                continue
            if _is_modifier(ch) or ch in _TIES:
                chars.append(ch)
                i += 1
                continue
            if not _is_base(ch):
                raise UnknownSymbol(ch, index=i)
            break
        segments.append(PhoneSegment("".join(chars)))
    return PhoneSeq(segments)


def clean_transcription(transcription: str | PhoneSeq) -> PhoneSeq:
    """Reduce a transcription to bare phones.

    Strips every diacritic except the rhotic hook; tie-bar groups survive
    intact. String input is tokenized first, which already drops stress,
    length, tone and boundary marks.
    """
    seq = tokenize_ipa(transcription) if isinstance(transcription, str) else transcription
    cleaned = []
    for seg in seq:
        kept = []
        chars = seg.symbol
        for j, ch in enumerate(chars):
            if _is_base(ch) or ch == RHOTIC_HOOK:
                kept.append(ch)
            elif ch in _TIES and j + 1 < len(chars) and _is_base(chars[j + 1]):
                kept.append(ch)
        cleaned.append(PhoneSegment("".join(kept)))
    return PhoneSeq(cleaned)


# schwa+r and open-mid central+r collapse to the r-colored vowels
_RHOTIC_PAIRS = {"ə": "ɚ", "ɜ": "ɝ"}
_RHOTIC_CODAS = frozenset("ɹr")
_HOOKED = {"ə" + RHOTIC_HOOK: "ɚ", "ɜ" + RHOTIC_HOOK: "ɝ"}


def normalize_rhotics(seq: PhoneSeq) -> PhoneSeq:
    """Rewrite r-colored vowel sequences in one left-to-right pass.

    (ə, ɹ|r) becomes ɚ and (ɜ, ɹ|r) becomes ɝ; hook-written ə˞/ɜ˞ are
    canonicalized to the single-codepoint vowels. Everything else is kept
    unchanged, so the pass is idempotent.
    """
    out: list[PhoneSegment] = []
    segs = seq.segments
    i = 0
    while i < len(segs):
        sym = segs[i].symbol
        if (
            sym in _RHOTIC_PAIRS
            and i + 1 < len(segs)
            and segs[i + 1].symbol in _RHOTIC_CODAS
        ):
            out.append(PhoneSegment(_RHOTIC_PAIRS[sym]))
            i += 2
            continue
        if sym in _HOOKED:
            out.append(PhoneSegment(_HOOKED[sym]))
            i += 1
            continue
        out.append(segs[i])
        i += 1
    return PhoneSeq(out)
