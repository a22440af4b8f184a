"""Service configuration: canonical JSON file plus environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

# Decoy prompt: steers an automated answerer toward a confident wrong
# answer while a human, having seen the number, types it anyway.
DEFAULT_PROMPT_TEXT = (
    "Watch the animation carefully in full screen, then enter your favorite number below."
)
# Shown before any media loads; flicker can trigger photosensitive seizures.
DEFAULT_WARNING_TEXT = (
    "Warning: this check shows rapidly flickering black-and-white noise. "
    "If you are photosensitive or prone to seizures, do not continue and "
    "request an alternative verification instead."
)

ENV_PREFIX = "DOTDRIFT_"


@dataclass(frozen=True)
class ServiceConfig:
    bind_host: str = "127.0.0.1"
    bind_port: int = 8321
    pool_path: str | None = None
    ttl_seconds: float = 300.0
    max_attempts: int = 3
    rate_limit_per_minute: int = 10
    generation_enabled: bool = False
    journal_path: str | None = None
    max_records: int = 10000
    value_length: int = 3
    prompt_text: str = DEFAULT_PROMPT_TEXT
    warning_text: str = DEFAULT_WARNING_TEXT
    widget_script: str | None = None
    ignore_leading_zeros: bool = False

    def to_json_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_BOOL_FIELDS = {"generation_enabled", "ignore_leading_zeros"}
_INT_FIELDS = {"bind_port", "max_attempts", "rate_limit_per_minute", "max_records", "value_length"}
_FLOAT_FIELDS = {"ttl_seconds"}


def _coerce(name: str, raw: str):
    if name in _BOOL_FIELDS:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if name in _INT_FIELDS:
        return int(raw)
    if name in _FLOAT_FIELDS:
        return float(raw)
    return raw


def load_config(path=None, env: dict | None = None) -> ServiceConfig:
    """Build a config from an optional JSON file, then apply env overrides.

    Every field can be overridden by ``DOTDRIFT_<FIELD_UPPERCASE>``.
    """
    data = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        unknown = set(data) - {f.name for f in fields(ServiceConfig)}
        if unknown:
            raise ValueError(f"unknown config fields in {path}: {sorted(unknown)}")
    config = ServiceConfig(**data)
    env = os.environ if env is None else env
    overrides = {}
    for f in fields(ServiceConfig):
        raw = env.get(ENV_PREFIX + f.name.upper())
        if raw is not None:
            overrides[f.name] = _coerce(f.name, raw)
    return replace(config, **overrides) if overrides else config
