"""Dictionary-based grapheme-to-phoneme conversion and target-word lookup.

The shipped dictionary uses the standard two-column pronouncing-dictionary
format (word, then space-separated phone codes with optional stress digits);
a committed code-to-IPA mapping file makes the conversion auditable. Word
frequency ranks come from a separate committed wordlist and stand in for
age-appropriateness, which has no principled criterion here.

Out-of-vocabulary words are an explicit error surfaced to the configuration
flow; there is no statistical fallback.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Literal

from .errors import NoMatch, OutOfVocabulary, ParseError, UnknownPhoneCode
from .phonology import PhoneSeq, clean_transcription, normalize_rhotics, tokenize_ipa

Position = Literal["initial", "final", "any"]

POSITIONS: tuple[Position, ...] = ("initial", "final", "any")


@dataclass(frozen=True)
class LexiconEntry:
    orthography: str
    pronunciations: tuple[PhoneSeq, ...]  # primary first
    frequency_rank: int | None = None

    def __post_init__(self):
        if not self.orthography:
            raise ValueError("orthography must be non-empty")
        if not self.pronunciations:
            raise ValueError(f"{self.orthography!r}: at least one pronunciation required")

    @property
    def primary(self) -> PhoneSeq:
        return self.pronunciations[0]


@dataclass(frozen=True)
class TargetSpec:
    """Request for practice words containing a phoneme at a position."""

    phoneme: str
    position: Position
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.position not in POSITIONS:
            raise ValueError(f"position must be one of {POSITIONS}")


class Lexicon:
    """Immutable word-to-pronunciation map; shareable across threads."""

    def __init__(self, entries: dict[str, LexiconEntry]):
        self._entries = dict(entries)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def words(self) -> list[str]:
        return sorted(self._entries)

    def entry(self, word: str) -> LexiconEntry:
        try:
            return self._entries[word.lower()]
        except KeyError:
            raise OutOfVocabulary(word) from None


def _strip_stress(code: str) -> str:
    return code.rstrip("0123456789")


def load_code_map(path: str | Path) -> dict[str, str]:
    """Parse the phone-code-to-IPA mapping file (code<TAB>ipa, # comments)."""
    mapping: dict[str, str] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ParseError(f"expected code<TAB>ipa, got {line!r}", lineno)
            mapping[cols[0]] = cols[1]
    return mapping


def load_word_ranks(path: str | Path) -> dict[str, int]:
    """Parse the frequency wordlist (word<TAB>rank, # comments)."""
    ranks: dict[str, int] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ParseError(f"expected word<TAB>rank, got {line!r}", lineno)
            try:
                rank = int(cols[1])
            except ValueError:
                raise ParseError(f"bad rank {cols[1]!r}", lineno) from None
            if rank < 1:
                raise ParseError(f"rank must be positive, got {rank}", lineno)
            ranks[cols[0].lower()] = rank
    return ranks


def load_lexicon(
    dictionary_path: str | Path,
    mapping_path: str | Path,
    ranks_path: str | Path | None = None,
) -> Lexicon:
    """Parse a pronouncing dictionary into IPA phone sequences.

    Stress digits are stripped from phone codes before mapping; alternate
    pronunciations may be listed either as repeated words or with a ``(n)``
    suffix, and keep their listed order after the primary.
    """
    code_map = load_code_map(mapping_path)
    ranks = load_word_ranks(ranks_path) if ranks_path else {}
    prons: dict[str, list[PhoneSeq]] = {}
    order: list[str] = []
    with Path(dictionary_path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith((";;;", "#")):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ParseError(f"missing pronunciation: {line!r}", lineno)
            word = parts[0].lower()
            if "(" in word:  # alternate marker, e.g. read(2)
                word = word.split("(", 1)[0]
            ipa_chunks = []
            for code in parts[1:]:
                bare = _strip_stress(code)
                if bare not in code_map:
                    raise UnknownPhoneCode(code, lineno)
                ipa_chunks.append(code_map[bare])
            seq = clean_transcription(tokenize_ipa("".join(ipa_chunks)))
            if word not in prons:
                prons[word] = []
                order.append(word)
            prons[word].append(seq)
    entries = {
        word: LexiconEntry(word, tuple(prons[word]), ranks.get(word))
        for word in order
    }
    return Lexicon(entries)


def to_ipa(word: str, lexicon: Lexicon) -> PhoneSeq:
    """Primary pronunciation of a word, cleaned and rhotic-normalized."""
    return normalize_rhotics(lexicon.entry(word).primary)


def _matches(seq: PhoneSeq, phoneme: str, position: Position) -> bool:
    symbols = seq.symbols()
    if not symbols:
        return False
    if position == "initial":
        return symbols[0] == phoneme
    if position == "final":
        return symbols[-1] == phoneme
    return phoneme in symbols


def recommend_words(spec: TargetSpec, lexicon: Lexicon) -> list[str]:
    """Up to ``spec.count`` practice words with the phoneme at the position.

    Ordered by ascending frequency rank (unranked words last), ties broken
    alphabetically, so results are deterministic. Raises NoMatch when no
    word qualifies.
    """
    candidates = [
        word
        for word in lexicon.words()
        if _matches(to_ipa(word, lexicon), spec.phoneme, spec.position)
    ]
    if not candidates:
        raise NoMatch(f"no word with /{spec.phoneme}/ in {spec.position} position")
    def sort_key(word: str):
        rank = lexicon.entry(word).frequency_rank
        return (rank if rank is not None else float("inf"), word)
    candidates.sort(key=sort_key)
    return candidates[: spec.count]


_BUNDLED: Lexicon | None = None


def bundled_lexicon() -> Lexicon:
    """The lexicon shipped with the package (loaded once)."""
    global _BUNDLED
    if _BUNDLED is None:
        data = resources.files("phonotale").joinpath("data")
        with resources.as_file(data.joinpath("lexicon.txt")) as dic, \
             resources.as_file(data.joinpath("arpabet_ipa.tsv")) as mapping, \
             resources.as_file(data.joinpath("word_ranks.txt")) as ranks:
            _BUNDLED = load_lexicon(dic, mapping, ranks)
    return _BUNDLED
