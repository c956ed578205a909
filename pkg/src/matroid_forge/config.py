"""Exhaustive-search thresholds.

Defaults can be overridden with the ``MATROID_FORGE_THRESHOLDS`` environment
variable (``"brute=14,theta=12"``) or per-call / per-CLI-invocation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "MATROID_FORGE_THRESHOLDS"


@dataclass(frozen=True)
class Thresholds:
    axioms: int = 8
    circuits: int = 16
    classify: int = 16
    brute: int = 20
    theta: int = 14
    theta_restarts: int = 64
    rank_cache: int = 1 << 20

    def with_overrides(self, **kwargs) -> "Thresholds":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def parse_overrides(text: str) -> dict[str, int]:
    names = {f.name for f in fields(Thresholds)}
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in names:
            raise ValueError(f"bad threshold override {item!r}")
        out[key] = int(value)
    return out


def load_thresholds(environ=None) -> Thresholds:
    environ = os.environ if environ is None else environ
    text = environ.get(ENV_VAR, "")
    return Thresholds().with_overrides(**parse_overrides(text)) if text else Thresholds()


DEFAULTS = Thresholds()
