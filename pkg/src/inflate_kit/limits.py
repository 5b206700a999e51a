"""Size bounds shared by the exponential or memory-heavy operations.

Defaults can be overridden with ``INFLATE_KIT_LIMITS="opens=24,faces=100000"``
or temporarily with :func:`override`.
"""
from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass, replace

from .errors import ParseError

ENV_VAR = "INFLATE_KIT_LIMITS"


@dataclass(frozen=True)
class Limits:
    max_open_elements: int = 20
    max_faces: int = 50_000

    @classmethod
    def unlimited(cls) -> "Limits":
        return cls(max_open_elements=10**9, max_faces=10**12)


_KEYS = {"opens": "max_open_elements", "faces": "max_faces"}


def parse_limits(text: str, base: Limits | None = None) -> Limits:
    out = base or Limits()
    for item in filter(None, (t.strip() for t in text.split(","))):
        key, _, value = item.partition("=")
        if key.strip() not in _KEYS or not value.strip().isdigit():
            raise ParseError(f"bad limit entry {item!r}; expected opens=N or faces=N", path=ENV_VAR)
        out = replace(out, **{_KEYS[key.strip()]: int(value)})
    return out


_current = parse_limits(os.environ.get(ENV_VAR, ""))


def current() -> Limits:
    return _current


@contextlib.contextmanager
def override(limits: Limits):
    global _current
    saved, _current = _current, limits
    try:
        yield limits
    finally:
        _current = saved
