"""Global work/memory budget used by the sieves and local counters."""

from __future__ import annotations

import contextlib
import os

from .errors import CapacityError

# Number of array elements a single table may hold (~800 MB of int64).
_DEFAULT_MAX_ELEMENTS = int(os.environ.get("QUADCORR_MAX_ELEMENTS", 100_000_000))
# Number of lattice points / residues a brute-force enumeration may visit.
_DEFAULT_MAX_POINTS = int(os.environ.get("QUADCORR_MAX_POINTS", 50_000_000))

_limits = {"elements": _DEFAULT_MAX_ELEMENTS, "points": _DEFAULT_MAX_POINTS}


def check_elements(n: int, what: str = "table") -> None:
    if n > _limits["elements"]:
        raise CapacityError(
            f"{what} needs {n} elements, budget is {_limits['elements']}"
        )


def check_points(n: int, what: str = "enumeration") -> None:
    if n > _limits["points"]:
        raise CapacityError(f"{what} visits ~{n} points, budget is {_limits['points']}")


@contextlib.contextmanager
def limits(elements: int | None = None, points: int | None = None):
    """Temporarily override the budget (mainly for tests)."""
    saved = dict(_limits)
    if elements is not None:
        _limits["elements"] = elements
    if points is not None:
        _limits["points"] = points
    try:
        yield
    finally:
        _limits.update(saved)
