"""Caps for exhaustive scans, overridable from a TOML file or the environment.

Environment variables use the prefix ``ATVLTD_`` and the upper-cased key,
e.g. ``ATVLTD_MAX_PARTITION_NODES=20``.  Environment overrides win over the
file.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

ENV_PREFIX = "ATVLTD_"


class CapExceeded(ValueError):
    """An exhaustive scan was asked for more nodes than the configured cap."""


@dataclass(frozen=True)
class Settings:
    max_partition_nodes: int = 24
    max_subset_nodes: int = 20
    max_enumeration_nodes: int = 20
    seed: int = 0


_settings = Settings()


def get_settings() -> Settings:
    return _settings


def set_settings(settings: Settings) -> None:
    global _settings
    _settings = settings


def load_settings(path: str | Path | None = None, environ: dict[str, str] | None = None) -> Settings:
    values: dict[str, int] = {}
    if path is not None:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        data = data.get("atvltd", data)
        known = {f.name for f in fields(Settings)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update({k: int(v) for k, v in data.items()})
    env = os.environ if environ is None else environ
    for f in fields(Settings):
        key = ENV_PREFIX + f.name.upper()
        if key in env:
            values[f.name] = int(env[key])
    return replace(Settings(), **values)


def require_cap(n: int, cap: int | None, what: str, default_attr: str) -> None:
    limit = getattr(_settings, default_attr) if cap is None else cap
    if n > limit:
        raise CapExceeded(f"{what} needs {n} nodes but the cap is {limit} ({default_attr})")
