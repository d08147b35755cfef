"""Enumeration caps and their environment override.

Caps exist to surface runaway computations as explicit ``TooLarge`` errors
instead of open-ended memory/time consumption.  Library functions take a
``caps`` argument defaulting to ``DEFAULT_CAPS``; the CLI builds an effective
``Caps`` from the ``NOVIKOV_PI_CAPS`` environment variable (a JSON object
whose keys are field names) plus command-line flags and passes it down.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

ENV_VAR = "NOVIKOV_PI_CAPS"


@dataclass(frozen=True)
class Caps:
    # largest total degree for component enumeration / T-ideal spans
    max_total_degree: int = 7
    # largest number of monomials materialized for one component
    max_component_size: int = 600_000
    # largest n for codimension computations
    max_codim_n: int = 6
    # largest degree searched by identity-based separation
    max_separate_degree: int = 6


DEFAULT_CAPS = Caps()


def caps_from_env(base: Caps = DEFAULT_CAPS, environ=None) -> Caps:
    """Apply the NOVIKOV_PI_CAPS JSON override on top of `base`."""
    env = os.environ if environ is None else environ
    raw = env.get(ENV_VAR)
    if not raw:
        return base
    data = json.loads(raw)
    if not isinstance(data, dict):
        raise ValueError(f"{ENV_VAR} must hold a JSON object")
    unknown = set(data) - set(Caps.__dataclass_fields__)
    if unknown:
        raise ValueError(f"{ENV_VAR}: unknown cap names {sorted(unknown)}")
    return replace(base, **data)
