"""Estimate generalized Hurst exponents h(q) from a fluctuation surface.

F(s, q) ~ s^h(q), so h(q) is the slope of ln F against ln s over a
scaling range. Real data rarely scales over the whole window grid and
the usable range shrinks as |q| grows, so ranges are per-q: either
supplied manually or picked by a deterministic scan that looks for the
widest contiguous window fitting a straight line well.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidParams, NoAdmissibleRange, TooFewPoints
from .mfdfa import FluctuationSurface

MIN_FIT_POINTS = 4


@dataclass(frozen=True)
class AutoRangePolicy:
    """Admissibility rules for automatic scaling-range selection."""

    r2_min: float = 0.98
    min_points: int = 6


@dataclass(frozen=True)
class ScalingRange:
    """Inclusive window-size bounds used for one per-q fit."""

    q: float
    s_lo: int
    s_hi: int
    selection_mode: str  # "manual" | "auto" | "full"
    r2: float
    npoints: int
    fallback: bool = False


@dataclass(frozen=True)
class QFit:
    """One per-q scaling fit."""

    q: float
    h: float
    stderr: float
    r2: float
    range: ScalingRange


@dataclass(frozen=True)
class HurstFunction:
    """h(q) over the grid with monotonicity diagnostics.

    ``twist_detected`` flags a statistically significant *rise* of h with
    q (h(q1) < h(q2) - 2*(se1 + se2) for some q1 < q2), the signature of
    a folded singularity spectrum; ``monotone_nonincreasing`` is the
    plain descriptive flag.
    """

    fits: tuple[QFit, ...]
    monotone_nonincreasing: bool
    twist_detected: bool
    series_length: int | None = None
    dropped: tuple[tuple[float, str], ...] = ()

    @property
    def q_values(self) -> np.ndarray:
        return np.array([f.q for f in self.fits])

    @property
    def h_values(self) -> np.ndarray:
        return np.array([f.h for f in self.fits])

    @property
    def stderr_values(self) -> np.ndarray:
        return np.array([f.stderr for f in self.fits])

    @property
    def hurst(self) -> float:
        """The classical Hurst exponent, h at q = 2."""
        for f in self.fits:
            if f.q == 2.0:
                return f.h
        raise InvalidParams("no q=2 fit present")


def _line_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """OLS slope, intercept, stderr of slope, r^2.

    Constant y is treated as a perfect horizontal fit (r^2 = 1), so an
    s-independent surface reports h = 0 cleanly.
    """
    n = x.size
    xm, ym = x.mean(), y.mean()
    cxx = float(np.sum((x - xm) ** 2))
    cxy = float(np.sum((x - xm) * (y - ym)))
    cyy = float(np.sum((y - ym) ** 2))
    slope = cxy / cxx
    intercept = ym - slope * xm
    ssr = max(cyy - cxy * cxy / cxx, 0.0)
    if cyy <= 1e-30:
        r2 = 1.0
    else:
        r2 = 1.0 - ssr / cyy
    stderr = math.sqrt(ssr / (n - 2) / cxx) if n > 2 else float("inf")
    return slope, intercept, stderr, r2


def _select(surface: FluctuationSurface, q: float, s_lo: int, s_hi: int):
    mask = (surface.s_values >= s_lo) & (surface.s_values <= s_hi)
    s = surface.s_values[mask]
    f = surface.values[mask, surface.q_index(q)]
    return s, f


def fit_h(
    surface: FluctuationSurface, q: float, range_: ScalingRange | tuple[int, int]
) -> tuple[float, float, float]:
    """Slope of ln F(s, q) on ln s over the given range.

    Returns (h, stderr of the slope, r^2).
    """
    s_lo, s_hi = (range_.s_lo, range_.s_hi) if isinstance(range_, ScalingRange) else range_
    s, f = _select(surface, q, s_lo, s_hi)
    if s.size < MIN_FIT_POINTS:
        raise TooFewPoints(
            f"only {s.size} surface points in [{s_lo}, {s_hi}] at q={q}; "
            f"need >= {MIN_FIT_POINTS}"
        )
    slope, _, stderr, r2 = _line_fit(np.log(s.astype(float)), np.log(f))
    return slope, stderr, r2


def full_range(surface: FluctuationSurface, q: float) -> ScalingRange:
    """The whole available window-size grid as a ScalingRange."""
    s = surface.s_values
    h, stderr, r2 = fit_h(surface, q, (int(s[0]), int(s[-1])))
    return ScalingRange(
        q=q,
        s_lo=int(s[0]),
        s_hi=int(s[-1]),
        selection_mode="full",
        r2=r2,
        npoints=int(s.size),
    )


def _min_window_points(n_points: int, s_values: np.ndarray, policy: AutoRangePolicy) -> int:
    decades = math.log10(float(s_values[-1]) / float(s_values[0]))
    if decades <= 0:
        return n_points
    per_decade = math.ceil(n_points / decades)
    return min(max(policy.min_points, per_decade), n_points)


def auto_range(
    surface: FluctuationSurface, q: float, policy: AutoRangePolicy | None = None
) -> ScalingRange:
    """Deterministic surrogate for manual scaling-range selection.

    Scans every contiguous window of at least max(min_points, one decade
    worth of grid points) and keeps the widest one whose r^2 clears the
    policy threshold; ties go to the larger s span, then the smaller
    s_lo. Raises NoAdmissibleRange when nothing qualifies, in which case
    callers usually fall back to the full range with a warning flag.
    """
    policy = policy or AutoRangePolicy()
    s_all = surface.s_values
    if s_all.size < 8:
        raise NoAdmissibleRange(
            f"only {s_all.size} surface points; need >= 8 for range scanning"
        )
    x = np.log(s_all.astype(float))
    y = np.log(surface.values[:, surface.q_index(q)])
    min_w = _min_window_points(s_all.size, s_all, policy)

    best = None
    best_key = None
    for i in range(s_all.size):
        for j in range(i + min_w - 1, s_all.size):
            _, _, _, r2 = _line_fit(x[i : j + 1], y[i : j + 1])
            if r2 < policy.r2_min:
                continue
            npoints = j - i + 1
            span = int(s_all[j]) - int(s_all[i])
            key = (npoints, span, -int(s_all[i]))
            if best_key is None or key > best_key:
                best_key = key
                best = (i, j, r2)
    if best is None:
        raise NoAdmissibleRange(
            f"no window of >= {min_w} points reaches r2 >= {policy.r2_min} at q={q}"
        )
    i, j, r2 = best
    return ScalingRange(
        q=q,
        s_lo=int(s_all[i]),
        s_hi=int(s_all[j]),
        selection_mode="auto",
        r2=r2,
        npoints=j - i + 1,
    )


def auto_ranges(
    surface: FluctuationSurface, policy: AutoRangePolicy | None = None
) -> dict[float, ScalingRange]:
    """Auto range per q, falling back to the flagged full range."""
    out: dict[float, ScalingRange] = {}
    for q in surface.q_values:
        q = float(q)
        try:
            out[q] = auto_range(surface, q, policy)
        except NoAdmissibleRange:
            fr = full_range(surface, q)
            out[q] = ScalingRange(
                q=q,
                s_lo=fr.s_lo,
                s_hi=fr.s_hi,
                selection_mode="auto",
                r2=fr.r2,
                npoints=fr.npoints,
                fallback=True,
            )
    return out


def _lookup_range(ranges, q: float):
    if q in ranges:
        return ranges[q]
    for key, value in ranges.items():
        if abs(key - q) <= 1e-9:
            return value
    raise InvalidParams(f"no scaling range supplied for q={q}")


def hurst_function(
    surface: FluctuationSurface,
    ranges: dict[float, ScalingRange | tuple[int, int]],
) -> HurstFunction:
    """Assemble per-q fits into h(q) with monotonicity flags.

    Per-q failures drop that q from the result; a failure at q = 2 is
    fatal because h(2) is the headline Hurst exponent.
    """
    fits: list[QFit] = []
    dropped: list[tuple[float, str]] = []
    for q in surface.q_values:
        q = float(q)
        spec = _lookup_range(ranges, q)
        try:
            if isinstance(spec, ScalingRange):
                h, stderr, r2 = fit_h(surface, q, spec)
                rng = spec
            else:
                s_lo, s_hi = spec
                h, stderr, r2 = fit_h(surface, q, (s_lo, s_hi))
                s_sel, _ = _select(surface, q, s_lo, s_hi)
                rng = ScalingRange(
                    q=q,
                    s_lo=int(s_lo),
                    s_hi=int(s_hi),
                    selection_mode="manual",
                    r2=r2,
                    npoints=int(s_sel.size),
                )
        except TooFewPoints as exc:
            if q == 2.0:
                raise
            dropped.append((q, str(exc)))
            continue
        fits.append(QFit(q=q, h=h, stderr=stderr, r2=r2, range=rng))
    if not any(f.q == 2.0 for f in fits):
        raise TooFewPoints("q=2 could not be fit; no Hurst exponent")

    h_arr = np.array([f.h for f in fits])
    se_arr = np.array([f.stderr for f in fits])
    monotone = bool(np.all(np.diff(h_arr) <= 1e-10))
    twist = False
    running_min = math.inf
    for hi, si in zip(h_arr, se_arr):
        if running_min < hi - 2.0 * si:
            twist = True
            break
        running_min = min(running_min, hi + 2.0 * si)
    return HurstFunction(
        fits=tuple(fits),
        monotone_nonincreasing=monotone,
        twist_detected=twist,
        series_length=surface.series_length,
        dropped=tuple(dropped),
    )


def write_ranges_json(ranges: dict[float, ScalingRange], path: str | Path) -> None:
    """Emit per-q ranges for human review and reuse as manual ranges."""
    records = [
        {
            "q": r.q,
            "s_lo": r.s_lo,
            "s_hi": r.s_hi,
            "mode": r.selection_mode,
            "r2": r.r2,
            "npoints": r.npoints,
            "fallback": r.fallback,
        }
        for _, r in sorted(ranges.items())
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"ranges": records}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_ranges_json(path: str | Path) -> dict[float, tuple[int, int]]:
    """Load a manual/edited ranges file into {q: (s_lo, s_hi)}."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    out: dict[float, tuple[int, int]] = {}
    for rec in payload["ranges"]:
        out[float(rec["q"])] = (int(rec["s_lo"]), int(rec["s_hi"]))
    return out
