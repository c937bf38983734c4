"""Size bounds for exhaustive computations.

Every bound can be raised (or lowered) at once with the ``ORDERFORGE_MAX_N``
environment variable; the per-operation defaults below apply otherwise.
"""

from __future__ import annotations

import os

from .errors import BoundExceeded

DEFAULTS = {
    "enumerate": 7,
    "dimension": 8,
    "realizer_pairs": 8,
    "monomorphic": 10,
    "age": 6,
    "span": 4,
    "amalgam": 12,
}


def bound(name: str) -> int:
    override = os.environ.get("ORDERFORGE_MAX_N")
    if override:
        return int(override)
    return DEFAULTS[name]


def check(name: str, size: int, what: str | None = None, limit: int | None = None) -> None:
    """Raise BoundExceeded when ``size`` is above the bound (or an explicit ``limit``)."""
    if limit is None:
        limit = bound(name)
    if size > limit:
        raise BoundExceeded(what or name, size, limit)
