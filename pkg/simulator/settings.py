"""Tunables shared by the engine, the analyzer and the command line, read from settings.json."""
import json
import logging
from dataclasses import dataclass, fields
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 100_000
DEFAULT_OR_JOIN_BOUND = 10_000
DEFAULT_STEP_LIMIT = 10_000
DEFAULT_MAX_TRACES = 1_000
DEFAULT_CASE_ID = "c1"
DEFAULT_LOG_LEVEL = "WARNING"

SETTINGS_PATH = Path(__file__).resolve().parent.parent / "settings.json"


@dataclass(frozen=True)
class Settings:
    max_states: int = DEFAULT_MAX_STATES
    or_join_bound: int = DEFAULT_OR_JOIN_BOUND
    step_limit: int = DEFAULT_STEP_LIMIT
    max_traces: int = DEFAULT_MAX_TRACES
    case_id: str = DEFAULT_CASE_ID
    log_level: str = DEFAULT_LOG_LEVEL

    def __post_init__(self):
        for name in ("max_states", "or_join_bound", "step_limit", "max_traces"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"setting {name} must be a positive integer, got {value!r}")
        if not self.case_id:
            raise ValueError("setting case_id must be non-empty")


def load_settings(path=None) -> Settings:
    """
    Read settings from a JSON object file. Missing file or keys fall back to
    the defaults; unknown keys are ignored with a warning.
    """
    path = Path(path) if path is not None else SETTINGS_PATH
    if not path.exists():
        logger.info("no settings file at %s, using defaults", path)
        return Settings()
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    raw = json.loads(text) if text.strip() else {}
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: settings must be a JSON object")
    known = {f.name for f in fields(Settings)}
    for key in sorted(set(raw) - known):
        logger.warning("%s: ignoring unknown setting %r", path, key)
    return Settings(**{k: v for k, v in raw.items() if k in known})
