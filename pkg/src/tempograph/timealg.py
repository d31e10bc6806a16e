"""Time-interval selection, window extension and overlap testing."""

from __future__ import annotations

import bisect
from enum import Enum
from typing import Sequence

from .relmodel import RelationInstance, TimeInterval


class TimeSource(Enum):
    TIMEX_ONLY = "timexOnly"
    DOC_DATE_ONLY = "docDateOnly"
    TIMEX_AND_DOC_DATE = "timexAndDocDate"

    @property
    def short(self) -> str:
        return _SHORT[self]

    @classmethod
    def parse(cls, name: str) -> "TimeSource":
        for src in cls:
            if name in (src.value, src.short, src.name):
                return src
        raise ValueError(f"unknown time source {name!r}; use one of timex, docdate, both")


_SHORT = {
    TimeSource.TIMEX_ONLY: "timex",
    TimeSource.DOC_DATE_ONLY: "docdate",
    TimeSource.TIMEX_AND_DOC_DATE: "both",
}


class WindowMode(Enum):
    BOTH = "both"      # each interval grows by N days: point events match within 2N
    SINGLE = "single"  # only one side grows: point events match within N


def resolve_intervals(inst: RelationInstance, src: TimeSource) -> tuple[TimeInterval, ...]:
    """Intervals grounding ``inst`` under ``src``; empty when none is available."""
    doc = () if inst.doc_date is None else (TimeInterval.day(inst.doc_date),)
    if src is TimeSource.TIMEX_ONLY:
        return tuple(inst.timex_intervals)
    if src is TimeSource.DOC_DATE_ONLY:
        return doc
    return tuple(inst.timex_intervals) or doc


def extend(iv: TimeInterval, window: int) -> TimeInterval:
    if window < 0:
        raise ValueError("window must be non-negative")
    return TimeInterval(iv.start - window, iv.end + window)


def tolerance(window: int, mode: WindowMode = WindowMode.BOTH) -> int:
    """Largest gap in days between two intervals that still counts as overlap."""
    if window < 0:
        raise ValueError("window must be non-negative")
    return 2 * window if mode is WindowMode.BOTH else window


def overlaps(a: TimeInterval, b: TimeInterval, window: int = 0,
             mode: WindowMode = WindowMode.BOTH) -> bool:
    tol = tolerance(window, mode)
    return a.start - tol <= b.end and b.start - tol <= a.end


class IntervalProbe:
    """Answers "does anything in this interval set overlap [s, e] within tol days?".

    Intervals are sorted by start with a running maximum of ends, so a query is
    one bisection: candidates are those starting no later than ``e + tol`` and
    the query hits iff the largest end among them reaches ``s - tol``.
    """

    __slots__ = ("_starts", "_maxend", "_tol")

    def __init__(self, intervals: Sequence[TimeInterval], tol: int):
        ivs = sorted(intervals)
        self._starts = [iv.start for iv in ivs]
        maxend = []
        m = None
        for iv in ivs:
            m = iv.end if m is None or iv.end > m else m
            maxend.append(m)
        self._maxend = maxend
        self._tol = tol

    def hits(self, iv: TimeInterval) -> bool:
        k = bisect.bisect_right(self._starts, iv.end + self._tol)
        return k > 0 and self._maxend[k - 1] >= iv.start - self._tol

    def hits_any(self, intervals: Sequence[TimeInterval]) -> bool:
        return any(self.hits(iv) for iv in intervals)
