from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from phonotale.config import AppConfig
from phonotale.features import bundled_feature_table
from phonotale.lexicon import bundled_lexicon, load_lexicon
from phonotale.scoring import ScoringContext
from phonotale.service import PracticeService
from phonotale.story import load_story

DATA = Path(__file__).resolve().parent / "data"
PACKAGE_DATA = Path(__file__).resolve().parents[1] / "src" / "phonotale" / "data"


@pytest.fixture(scope="session")
def table():
    return bundled_feature_table()


@pytest.fixture(scope="session")
def lexicon():
    return bundled_lexicon()


@pytest.fixture(scope="session")
def context(table):
    return ScoringContext(table)


@pytest.fixture(scope="session")
def fixture_lexicon():
    """The small five-word lexicon used by the recommendation examples."""
    return load_lexicon(
        DATA / "fixture_lexicon.txt",
        PACKAGE_DATA / "arpabet_ipa.tsv",
        DATA / "fixture_ranks.txt",
    )


@pytest.fixture(scope="session")
def golden_story():
    return load_story((DATA / "golden_story.json").read_text(encoding="utf-8"))


@pytest.fixture()
def service(tmp_path, golden_story):
    """Deterministic service over a temp store seeded with the golden story
    and its stub audio sidecars."""
    config = AppConfig(data_dir=str(tmp_path / "store"), clock="logical")
    svc = PracticeService(config)
    svc.save_story(golden_story)
    for sidecar in (DATA / "golden_audio").iterdir():
        shutil.copy(sidecar, svc.store.audio_dir / sidecar.name)
    return svc


def load_json(name: str):
    return json.loads((DATA / name).read_text(encoding="utf-8"))
