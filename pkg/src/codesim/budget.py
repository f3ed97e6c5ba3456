"""Cooperative wall-clock budgets for measure evaluation.

A Deadline is threaded through expensive loops; when it expires the
computation raises MeasureTimeout and the caller records a MISSING score
instead of aborting the whole vector.
"""

from __future__ import annotations

import time


class MeasureTimeout(Exception):
    """Raised inside a measure when its wall-clock budget is exhausted."""


class Deadline:
    __slots__ = ("expires_at",)

    def __init__(self, seconds: float | None):
        self.expires_at = None if seconds is None else time.perf_counter() + seconds

    @classmethod
    def unlimited(cls) -> "Deadline":
        return cls(None)

    def expired(self) -> bool:
        return self.expires_at is not None and time.perf_counter() >= self.expires_at

    def check(self) -> None:
        if self.expired():
            raise MeasureTimeout


def check(deadline: Deadline | None) -> None:
    if deadline is not None:
        deadline.check()
