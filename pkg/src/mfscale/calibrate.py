"""Finite-length multifractal background calibration.

Finite monofractal series show a spurious spectrum width that shrinks as
the series grows; any width measured on real data should be read against
this background. The calibration runs the full pipeline over seeded
ensembles of midpoint-displacement series for a grid of lengths and
input Hurst exponents and aggregates the spurious width and peak
statistics.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BaselineLengthMismatch, InvalidParams, MfscaleError
from .mfdfa import MfdfaConfig, default_q_grid, default_window_sizes, fluctuation_surface
from .rmdgen import RMD_ALGORITHM, RmdParams, generate_rmd
from .scaling import AutoRangePolicy, auto_ranges, hurst_function
from .series import SliceSpec, slice_series
from .spectrum import legendre_spectrum

SCHEMA_VERSION = "1"

#: Entries whose pipeline failure rate exceeds this are marked unreliable.
MAX_FAILURE_FRACTION = 0.25

#: Calibration window grid: sparse fixed density in log s starting at
#: small boxes. Short series then get few, noisy fit points (wide
#: spurious spectra) while long series get dense stable grids, matching
#: the observed narrowing of the finite-length background.
CALIBRATION_S_MIN = 6
CALIBRATION_POINTS_PER_DECADE = 8.0

#: Range policy used for calibration: only full-grid windows, since
#: generated monofractal series scale over the whole window range and
#: per-q sub-window hunting on short noisy surfaces destabilizes the
#: ensemble statistics.
CALIBRATION_POLICY = AutoRangePolicy(r2_min=0.98, min_points=10**6)


def calibration_window_sizes(length: int, order: int = 2) -> tuple[int, ...]:
    """Window grid used by default for calibration runs."""
    s_max = length // 4
    decades = math.log10(s_max / CALIBRATION_S_MIN)
    count = max(8, round(CALIBRATION_POINTS_PER_DECADE * decades))
    return default_window_sizes(
        length, order=order, s_min=CALIBRATION_S_MIN, count=count
    )


def calibration_config(length: int, order: int = 2) -> MfdfaConfig:
    """Per-length kernel config used by default for calibration runs."""
    return MfdfaConfig(
        order=order,
        window_sizes=calibration_window_sizes(length, order=order),
        q_grid=default_q_grid(),
    )


@dataclass(frozen=True)
class CalibrationEntry:
    """Ensemble statistics for one (length, hurst) cell."""

    length: int
    hurst: float
    mean_width: float
    std_width: float
    mean_peak: float
    std_peak: float
    n_series: int
    seeds: tuple[int, ...]
    n_failed: int = 0
    unreliable: bool = False


@dataclass(frozen=True)
class CalibrationReport:
    """Spurious-width background keyed by (length, hurst)."""

    entries: tuple[CalibrationEntry, ...]
    config_fingerprint: str
    schema_version: str = SCHEMA_VERSION

    def lookup(self, length: int, hurst: float) -> CalibrationEntry:
        """Nearest entry by |log L| distance, then |H| distance.

        Refuses when the nearest length is more than a factor of two
        away, because the background changes too fast with length to
        extrapolate.
        """
        if not self.entries:
            raise BaselineLengthMismatch("calibration report is empty")
        log_l = math.log(length)
        best = min(
            self.entries,
            key=lambda e: (abs(math.log(e.length) - log_l), abs(e.hurst - hurst)),
        )
        ratio = max(best.length / length, length / best.length)
        if ratio > 2.0:
            raise BaselineLengthMismatch(
                f"nearest calibrated length {best.length} is {ratio:.2f}x away "
                f"from {length}; refusing to extrapolate"
            )
        return best


def baseline_lookup(
    report: CalibrationReport, length: int, hurst: float
) -> tuple[float, float]:
    """(mean width, std width) of the nearest calibration entry."""
    entry = report.lookup(length, hurst)
    return entry.mean_width, entry.std_width


def _config_fingerprint(config: MfdfaConfig | None, policy: AutoRangePolicy) -> str:
    cfg_blob = (
        dataclasses.asdict(config)
        if config is not None
        else {
            "calibration_defaults": True,
            "s_min": CALIBRATION_S_MIN,
            "points_per_decade": CALIBRATION_POINTS_PER_DECADE,
        }
    )
    blob = json.dumps(
        {
            "config": cfg_blob,
            "policy": dataclasses.asdict(policy),
            "generator": RMD_ALGORITHM,
            "schema": SCHEMA_VERSION,
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def _one_width_peak(
    length: int,
    hurst: float,
    seed: int,
    config: MfdfaConfig | None,
    policy: AutoRangePolicy,
) -> tuple[float, float]:
    levels = max(1, math.ceil(math.log2(length)))
    series = generate_rmd(RmdParams(hurst=hurst, levels=levels, seed=seed))
    if len(series) > length:
        series = slice_series(series, SliceSpec(0, length))
    cfg = config if config is not None else calibration_config(length)
    surface = fluctuation_surface(series, cfg)
    ranges = auto_ranges(surface, policy)
    h = hurst_function(surface, ranges)
    spec = legendre_spectrum(h)
    return spec.width, spec.peak_alpha


def run_calibration(
    lengths: list[int],
    hursts: list[float],
    ensemble: int = 20,
    base_seed: int = 0,
    config: MfdfaConfig | None = None,
    policy: AutoRangePolicy | None = None,
    seeds: list[int] | None = None,
) -> CalibrationReport:
    """Monte Carlo estimate of the spurious width background.

    For every (length, hurst) cell, generates ``ensemble`` seeded series
    (seeds base_seed .. base_seed + ensemble - 1 unless overridden), runs
    profile -> surface -> auto ranges -> spectrum on each, and aggregates
    width and peak-position statistics. Deterministic in its arguments.

    With ``config=None`` a per-length calibration grid is used
    (:func:`calibration_config`) and with ``policy=None`` ranges span the
    full grid; both choices enter the report fingerprint.
    """
    if ensemble < 2 and seeds is None:
        raise InvalidParams("ensemble must be >= 2")
    policy = policy or CALIBRATION_POLICY
    seed_list = (
        tuple(int(s) for s in seeds)
        if seeds is not None
        else tuple(base_seed + i for i in range(ensemble))
    )
    if len(seed_list) < 2:
        raise InvalidParams("need at least 2 seeds")
    entries = []
    for length in lengths:
        if length < 2**7:
            raise InvalidParams(f"calibration length must be >= 128, got {length}")
        for hurst in hursts:
            widths, peaks = [], []
            failed = 0
            for seed in seed_list:
                try:
                    width, peak = _one_width_peak(length, hurst, seed, config, policy)
                except MfscaleError:
                    failed += 1
                    continue
                widths.append(width)
                peaks.append(peak)
            if not widths:
                entries.append(
                    CalibrationEntry(
                        length=int(length),
                        hurst=float(hurst),
                        mean_width=float("nan"),
                        std_width=float("nan"),
                        mean_peak=float("nan"),
                        std_peak=float("nan"),
                        n_series=0,
                        seeds=seed_list,
                        n_failed=failed,
                        unreliable=True,
                    )
                )
                continue
            w = np.asarray(widths)
            p = np.asarray(peaks)
            entries.append(
                CalibrationEntry(
                    length=int(length),
                    hurst=float(hurst),
                    mean_width=float(w.mean()),
                    std_width=float(w.std(ddof=1)) if w.size > 1 else 0.0,
                    mean_peak=float(p.mean()),
                    std_peak=float(p.std(ddof=1)) if p.size > 1 else 0.0,
                    n_series=int(w.size),
                    seeds=seed_list,
                    n_failed=failed,
                    unreliable=failed > MAX_FAILURE_FRACTION * len(seed_list),
                )
            )
    return CalibrationReport(
        entries=tuple(entries),
        config_fingerprint=_config_fingerprint(config, policy),
    )


def write_report_json(report: CalibrationReport, path: str | Path) -> None:
    payload = {
        "schema_version": report.schema_version,
        "config_fingerprint": report.config_fingerprint,
        "entries": [dataclasses.asdict(e) for e in report.entries],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_report_json(path: str | Path) -> CalibrationReport:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    entries = tuple(
        CalibrationEntry(
            length=int(e["length"]),
            hurst=float(e["hurst"]),
            mean_width=float(e["mean_width"]),
            std_width=float(e["std_width"]),
            mean_peak=float(e["mean_peak"]),
            std_peak=float(e["std_peak"]),
            n_series=int(e["n_series"]),
            seeds=tuple(int(s) for s in e["seeds"]),
            n_failed=int(e.get("n_failed", 0)),
            unreliable=bool(e.get("unreliable", False)),
        )
        for e in payload["entries"]
    )
    return CalibrationReport(
        entries=entries,
        config_fingerprint=payload["config_fingerprint"],
        schema_version=payload.get("schema_version", SCHEMA_VERSION),
    )
