"""Excision of abrupt events at the return level.

The series is differentiated, the returns inside the excision intervals
are removed, and the remaining returns are reintegrated from the
original first value. Retained returns pass through untouched and in
order, so the splice introduces no artificial jumps beyond the natural
return scale.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import OutOfRange, OverlappingIntervals
from .series import Series, integrate_returns, to_returns


@dataclass(frozen=True)
class ExcisionSpec:
    """Disjoint half-open index intervals over the return series."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        cleaned = []
        for start, end in self.intervals:
            start, end = int(start), int(end)
            if start < 0:
                raise OutOfRange(f"interval start {start} is negative")
            if end <= start:
                raise ValueError(f"empty interval [{start}, {end})")
            cleaned.append((start, end))
        cleaned.sort()
        for (_, prev_end), (next_start, _) in zip(cleaned, cleaned[1:]):
            if next_start < prev_end:
                raise OverlappingIntervals(
                    f"intervals overlap at index {next_start}"
                )
        object.__setattr__(self, "intervals", tuple(cleaned))

    @property
    def total_removed(self) -> int:
        return sum(end - start for start, end in self.intervals)

    def merge(self, other: "ExcisionSpec") -> "ExcisionSpec":
        """Union of two disjoint specs (both in original coordinates)."""
        return ExcisionSpec(self.intervals + other.intervals)


def _keep_mask(n_returns: int, spec: ExcisionSpec) -> np.ndarray:
    mask = np.ones(n_returns, dtype=bool)
    for start, end in spec.intervals:
        if end > n_returns:
            raise OutOfRange(
                f"interval [{start}, {end}) exceeds {n_returns} returns"
            )
        mask[start:end] = False
    return mask


def retained_returns(series: Series, spec: ExcisionSpec) -> np.ndarray:
    """The return values that survive excision, bit-identical in order."""
    returns = to_returns(series)
    return returns.values[_keep_mask(len(returns), spec)]


def excise(series: Series, spec: ExcisionSpec) -> Series:
    """Remove the specified return intervals and reintegrate.

    Output length is the input length minus the number of removed
    returns; an empty spec reproduces the input up to the
    differentiate/integrate round trip. Timestamps of removed samples
    are dropped.
    """
    returns = to_returns(series)
    mask = _keep_mask(len(returns), spec)
    kept = Series(returns.values[mask], "return", label=series.label)
    removed = int(np.count_nonzero(~mask))
    out = integrate_returns(
        kept,
        float(series.values[0]),
        representation=series.representation,
        label=(
            f"{series.label} [excised {removed} returns]".strip()
            if removed
            else series.label
        ),
    )
    if series.timestamps is not None:
        ts = (series.timestamps[0],) + tuple(
            series.timestamps[i + 1] for i in np.flatnonzero(mask)
        )
        out = dataclasses.replace(out, timestamps=ts)
    return out


def spec_from_dates(series: Series, date_ranges: list[tuple[date, date]]) -> ExcisionSpec:
    """Resolve inclusive date ranges to return-index intervals.

    A return is stamped with the date of its later endpoint; every
    return whose stamp falls inside a range is excised.
    """
    returns = to_returns(series)
    if returns.timestamps is None:
        raise ValueError("series carries no timestamps to resolve dates against")
    stamps = returns.timestamps
    intervals = []
    for lo, hi in date_ranges:
        if hi < lo:
            raise ValueError(f"date range {lo}..{hi} is reversed")
        idx = [i for i, ts in enumerate(stamps) if lo <= ts <= hi]
        if not idx:
            raise OutOfRange(f"no returns dated within {lo}..{hi}")
        intervals.append((idx[0], idx[-1] + 1))
    return ExcisionSpec(tuple(intervals))
