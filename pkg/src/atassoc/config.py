"""Shared conventions, defaults and configuration handling.

Every numeric result records the convention version; bumping it
invalidates all cache entries at once.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

# Version of the orientation / ordering / path conventions baked into the
# integrand.  Part of every cache key.
CONVENTION_VERSION = "v1"

# Global orientation of the fiber-integral determinant, calibrated once
# against the degree-2 coefficient (+1/24) and frozen.  With rows ordered
# (augmenting edge, then graph edges lexicographically) and columns
# (s, x1, y1, ..., xn, yn), the calibration gives +1.
ORIENTATION_SIGN = +1

DEFAULT_PATH_ID = "horiz"
DEFAULT_NODES = 32
DEFAULT_EASING = "smoothstep"
DEFAULT_SAMPLES = 200_000
DEFAULT_SEED = 20089

# Importance mixture defaults (see quad.Transform).
DEFAULT_TRANSFORM_ID = "cauchy-mix"
DEFAULT_SIGMA = 0.7
DEFAULT_BASE_WEIGHT = 0.4

# Fixed MC batch size; sample partitioning must not depend on worker count.
BATCH_SIZE = 1 << 16

CACHE_ENV_VAR = "ATASSOC_CACHE"


def default_cache_root() -> str:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "atassoc")


@dataclass(frozen=True)
class RunConfig:
    """Integrator defaults; file < flags precedence handled by the CLI."""

    path_id: str = DEFAULT_PATH_ID
    nodes: int = DEFAULT_NODES
    easing: str = DEFAULT_EASING
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    sigma: float = DEFAULT_SIGMA
    base_weight: float = DEFAULT_BASE_WEIGHT
    cache_root: str = field(default_factory=default_cache_root)
    workers: int = 1

    def with_overrides(self, **kwargs) -> "RunConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


_INT_KEYS = {"nodes", "samples", "seed", "workers"}
_FLOAT_KEYS = {"sigma", "base_weight"}
_STR_KEYS = {"path_id", "easing", "cache_root"}


def parse_config_file(path: str) -> dict:
    """Parse a key=value config file; unknown keys rejected."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _STR_KEYS:
                values[key] = val
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def load_config(path: str | None = None) -> RunConfig:
    cfg = RunConfig()
    if path is not None and os.path.exists(path):
        cfg = cfg.with_overrides(**parse_config_file(path))
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        cfg = cfg.with_overrides(cache_root=env)
    return cfg
