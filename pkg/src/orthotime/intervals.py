"""Open intervals and canonical finite unions of them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .exceptions import ValidationError


@dataclass(frozen=True, order=True)
class OpenInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValidationError(f"interval endpoints must be finite: ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise ValidationError(f"empty open interval ({self.lo}, {self.hi})")
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))

    def __contains__(self, t) -> bool:
        return self.lo < t < self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


class IntervalSet:
    """Disjoint, sorted union of open intervals.

    Overlapping intervals are merged. Intervals that only share an
    endpoint, such as ``(0, 1)`` and ``(1, 2)``, stay separate because the
    shared point belongs to neither.
    """

    __slots__ = ("_intervals",)

    def __init__(self, intervals: Iterable[OpenInterval] = ()):
        items = [iv for iv in intervals if iv is not None]
        if not items:
            self._intervals: tuple[OpenInterval, ...] = ()
            return
        lo = np.array([iv.lo for iv in items])
        hi = np.array([iv.hi for iv in items])
        self._intervals = _merge(lo, hi)

    @classmethod
    def from_endpoints(cls, lo, hi) -> "IntervalSet":
        """Build from endpoint arrays; pairs with ``lo >= hi`` are dropped as empty."""
        lo = np.asarray(lo, dtype=np.float64).ravel()
        hi = np.asarray(hi, dtype=np.float64).ravel()
        keep = lo < hi
        out = cls()
        out._intervals = _merge(lo[keep], hi[keep])
        return out

    @property
    def intervals(self) -> tuple[OpenInterval, ...]:
        return self._intervals

    def __iter__(self) -> Iterator[OpenInterval]:
        return iter(self._intervals)

    def __len__(self) -> int:
        return len(self._intervals)

    def __bool__(self) -> bool:
        return bool(self._intervals)

    def __contains__(self, t) -> bool:
        return any(t in iv for iv in self._intervals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._intervals == other._intervals

    def __repr__(self) -> str:
        body = " U ".join(f"({iv.lo:.17g}, {iv.hi:.17g})" for iv in self._intervals)
        return f"IntervalSet({body or 'empty'})"

    def union(self, other: "IntervalSet | OpenInterval") -> "IntervalSet":
        if isinstance(other, OpenInterval):
            other = IntervalSet([other])
        return IntervalSet(self._intervals + other._intervals)

    __or__ = union

    def add(self, interval: OpenInterval | None) -> "IntervalSet":
        if interval is None:
            return self
        return IntervalSet(self._intervals + (interval,))

    @property
    def inf(self) -> float:
        if not self._intervals:
            raise ValueError("empty interval set has no infimum")
        return self._intervals[0].lo

    @property
    def sup(self) -> float:
        if not self._intervals:
            raise ValueError("empty interval set has no supremum")
        return self._intervals[-1].hi

    @property
    def is_single(self) -> bool:
        return len(self._intervals) == 1


def _merge(lo: np.ndarray, hi: np.ndarray) -> tuple[OpenInterval, ...]:
    if lo.size == 0:
        return ()
    order = np.lexsort((hi, lo))
    lo, hi = lo[order], hi[order]
    reach = np.maximum.accumulate(hi)
    # a new component starts where the interval begins at or past everything before it
    starts = np.flatnonzero(np.concatenate(([True], lo[1:] >= reach[:-1])))
    ends = np.concatenate((starts[1:] - 1, [lo.size - 1]))
    return tuple(OpenInterval(float(lo[s]), float(reach[e])) for s, e in zip(starts, ends))
