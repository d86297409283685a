"""Articulatory feature table: per-phone ternary vectors over 24 features.

The table ships as a versioned tab-separated data file (one phone per row,
values ``+``/``-``/``0``) and is immutable after load, so a single instance
can be shared freely across threads. Phones missing from the table are a
hard error; nothing is silently costed.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import ParseError, UnknownSymbol
from .phonology import PhoneSegment, PhoneSeq

FEATURE_NAMES = (
    "syl", "son", "cons", "cont", "delrel", "lat", "nas", "strid",
    "voi", "sg", "cg", "ant", "cor", "distr", "lab", "hi",
    "lo", "back", "round", "velaric", "tense", "long", "hitone", "hireg",
)

FEATURE_COUNT = len(FEATURE_NAMES)

_VALUES = {"+": 1, "0": 0, "-": -1, "−": -1}


class FeatureTable:
    """Immutable map from IPA segment symbol to its 24-entry feature vector."""

    def __init__(self, entries: dict[str, tuple[int, ...]], version: str):
        for symbol, vec in entries.items():
            if len(vec) != FEATURE_COUNT:
                raise ValueError(f"{symbol!r}: expected {FEATURE_COUNT} features, got {len(vec)}")
            if any(v not in (-1, 0, 1) for v in vec):
                raise ValueError(f"{symbol!r}: feature values must be ternary")
        self._entries = dict(entries)
        self.version = version
        self._cost_cache: dict[tuple[str, str], int] = {}

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def symbols(self) -> list[str]:
        return sorted(self._entries)

    def vector(self, symbol: str) -> tuple[int, ...]:
        try:
            return self._entries[symbol]
        except KeyError:
            raise UnknownSymbol(symbol) from None

    def segment(self, symbol: str) -> PhoneSegment:
        return PhoneSegment(symbol, self.vector(symbol))

    def resolve(self, seq: PhoneSeq) -> PhoneSeq:
        """Return the sequence with feature vectors attached to every segment."""
        return PhoneSeq(self.segment(seg.symbol) for seg in seq)

    def mismatch_count(self, a: str, b: str) -> int:
        """Number of differing feature entries between two phones (0..24)."""
        if a == b:
            return 0
        key = (a, b) if a <= b else (b, a)
        cached = self._cost_cache.get(key)
        if cached is None:
            va, vb = self.vector(a), self.vector(b)
            cached = sum(1 for x, y in zip(va, vb) if x != y)
            self._cost_cache[key] = cached
        return cached


def load_feature_table(path: str | Path) -> FeatureTable:
    """Parse a feature table file.

    Format: UTF-8, tab-separated; ``#`` starts a comment (a ``# version:``
    comment names the data file revision); a header row lists the 24 feature
    names; every following row is a phone symbol plus 24 ternary values.
    """
    path = Path(path)
    version = "unversioned"
    entries: dict[str, tuple[int, ...]] = {}
    header_seen = False
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.lstrip().startswith("#"):
                comment = line.lstrip("# ").strip()
                if comment.lower().startswith("version:"):
                    version = comment.split(":", 1)[1].strip()
                continue
            cols = line.split("\t")
            if not header_seen:
                if tuple(cols[1:]) != FEATURE_NAMES:
                    raise ParseError(
                        f"header must list the {FEATURE_COUNT} feature names", lineno
                    )
                header_seen = True
                continue
            if len(cols) != FEATURE_COUNT + 1:
                raise ParseError(
                    f"expected symbol plus {FEATURE_COUNT} values, got {len(cols)} columns",
                    lineno,
                )
            symbol = cols[0]
            if symbol in entries:
                raise ParseError(f"duplicate phone {symbol!r}", lineno)
            try:
                vec = tuple(_VALUES[c] for c in cols[1:])
            except KeyError as exc:
                raise ParseError(f"bad feature value {exc.args[0]!r}", lineno) from None
            entries[symbol] = vec
    if not header_seen:
        raise ParseError(f"{path}: missing header row")
    return FeatureTable(entries, version)


_BUNDLED: FeatureTable | None = None


def bundled_feature_table() -> FeatureTable:
    """The feature table shipped with the package (loaded once)."""
    global _BUNDLED
    if _BUNDLED is None:
        ref = resources.files("phonotale").joinpath("data/feature_table.tsv")
        with resources.as_file(ref) as path:
            _BUNDLED = load_feature_table(path)
    return _BUNDLED
