"""Application configuration: one JSON file plus environment overrides."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .distance import BandThresholds


@dataclass
class AppConfig:
    data_dir: str = "data"
    adapter_mode: str = "stub"  # stub | external
    external_endpoint: str = ""
    clock: str = "wall"  # wall | logical (deterministic, for scripted runs)
    host: str = "127.0.0.1"
    port: int = 8077
    excellent_max: float = 0.1
    good_max: float = 1.0
    fair_max: float = 2.0
    retry_cap: int = 2
    inactivity_timeout_minutes: float = 10.0
    audio_ttl_days: float | None = None  # retention stub; None keeps forever
    lexicon_dir: str = ""  # override directory for lexicon/feature data files
    frontend_dir: str = ""  # serve the built web client from /app when set

    def thresholds(self) -> BandThresholds:
        return BandThresholds(self.excellent_max, self.good_max, self.fair_max)


_ENV_FIELDS = {
    "PHONOTALE_DATA_DIR": ("data_dir", str),
    "PHONOTALE_ADAPTER_MODE": ("adapter_mode", str),
    "PHONOTALE_EXTERNAL_ENDPOINT": ("external_endpoint", str),
    "PHONOTALE_CLOCK": ("clock", str),
    "PHONOTALE_HOST": ("host", str),
    "PHONOTALE_PORT": ("port", int),
    "PHONOTALE_RETRY_CAP": ("retry_cap", int),
    "PHONOTALE_LEXICON_DIR": ("lexicon_dir", str),
    "PHONOTALE_FRONTEND_DIR": ("frontend_dir", str),
}


def load_config(path: str | Path | None = None, env: dict | None = None) -> AppConfig:
    """Read the config file (if any), then apply environment overrides."""
    env = os.environ if env is None else env
    values: dict = {}
    if path is not None:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        known = set(AppConfig.__dataclass_fields__)
        values = {k: v for k, v in doc.items() if k in known}
    config = AppConfig(**values)
    for var, (name, cast) in _ENV_FIELDS.items():
        if var in env:
            setattr(config, name, cast(env[var]))
    return config
