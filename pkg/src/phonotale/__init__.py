"""Story-based speech-sound practice platform."""

__version__ = "0.1.0"
