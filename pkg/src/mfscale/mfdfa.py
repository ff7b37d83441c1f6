"""Core multifractal DFA kernel.

The profile is tiled twice into non-overlapping boxes of size s (once
from each end, 2N boxes total), each box is detrended by a least-squares
polynomial of order m, and the per-box residual variances F2(s, k) are
collapsed into the q-th order fluctuation function

    F(s, q) = { (1/2N) * sum_k [F2(s, k)]^(q/2) }^(1/q)      for q != 0
    F(s, 0) = exp{ (1/4N) * sum_k ln F2(s, k) }               for q = 0

i.e. the q = 0 value is exp of half the mean log-variance, the limit of
the q != 0 form along the grid. Boxes whose residual standard deviation
falls below ``min_box_std`` are poles of the negative-q and q = 0
formulas; they are excluded from both the sum and the count, and the
per-s exclusion tally is reported so users can see when that matters.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from .errors import (
    AllBoxesDegenerate,
    InvalidParams,
    RankDeficient,
    WindowTooLarge,
    WrongRepresentation,
)
from .series import Series

#: Above this |q| the moment sum is accumulated in log space to dodge
#: overflow/underflow of F2^(q/2).
LOG_SPACE_Q = 8.0

DEFAULT_S_MIN = 10
DEFAULT_S_COUNT = 40
DEFAULT_Q_MIN = -5.0
DEFAULT_Q_MAX = 5.0
DEFAULT_Q_STEP = 0.25


def default_q_grid(
    q_min: float = DEFAULT_Q_MIN,
    q_max: float = DEFAULT_Q_MAX,
    q_step: float = DEFAULT_Q_STEP,
) -> tuple[float, ...]:
    """Uniform q grid over [q_min, q_max] with 0 and 2 forced in."""
    if q_step <= 0 or q_max <= q_min:
        raise InvalidParams("need q_step > 0 and q_max > q_min")
    grid = np.arange(q_min, q_max + q_step / 2, q_step)
    grid = np.unique(np.concatenate([grid, [0.0, 2.0]]))
    return tuple(float(q) for q in grid)


def default_window_sizes(
    length: int,
    order: int = 2,
    s_min: int = DEFAULT_S_MIN,
    s_max: int | None = None,
    count: int = DEFAULT_S_COUNT,
) -> tuple[int, ...]:
    """About ``count`` log-spaced integer box sizes in [s_min, length/4]."""
    limit = length // 4
    if s_max is None:
        s_max = limit
    if s_max > limit:
        raise WindowTooLarge(
            f"s_max {s_max} exceeds length/4 = {limit} (length {length})"
        )
    lo = max(s_min, order + 2)
    if s_max < lo:
        raise InvalidParams(
            f"series too short: no window sizes in [{lo}, {s_max}]"
        )
    sizes = np.unique(np.round(np.geomspace(lo, s_max, count)).astype(int))
    sizes = sizes[(sizes >= lo) & (sizes <= s_max)]
    return tuple(int(s) for s in sizes)


@dataclass(frozen=True)
class MfdfaConfig:
    """Kernel knobs; ``window_sizes=None`` defers to per-length defaults."""

    order: int = 2
    window_sizes: tuple[int, ...] | None = None
    q_grid: tuple[float, ...] | None = None
    min_box_std: float = 1e-12

    def __post_init__(self):
        if self.order < 1:
            raise InvalidParams(f"detrend order must be >= 1, got {self.order}")
        if self.min_box_std <= 0:
            raise InvalidParams("min_box_std must be positive")
        if self.q_grid is not None:
            q = np.asarray(self.q_grid, dtype=float)
            if q.size < 1 or not np.all(np.isfinite(q)):
                raise InvalidParams("q_grid must be finite")
            if np.any(np.diff(q) <= 0):
                raise InvalidParams("q_grid must be strictly increasing")
            if 0.0 not in q or 2.0 not in q:
                raise InvalidParams("q_grid must contain 0 and 2")
            object.__setattr__(self, "q_grid", tuple(float(v) for v in q))
        if self.window_sizes is not None:
            s = np.asarray(self.window_sizes, dtype=int)
            if s.size < 1:
                raise InvalidParams("window_sizes must be nonempty")
            if np.any(np.diff(s) <= 0):
                raise InvalidParams("window_sizes must be strictly increasing")
            if s[0] < self.order + 2:
                raise InvalidParams(
                    f"window size {s[0]} too small for order {self.order} "
                    f"detrending (need >= {self.order + 2})"
                )
            object.__setattr__(self, "window_sizes", tuple(int(v) for v in s))

    def resolve(self, length: int) -> "MfdfaConfig":
        """Concrete config for a series of ``length`` samples."""
        sizes = self.window_sizes
        if sizes is None:
            sizes = default_window_sizes(length, order=self.order)
        elif sizes[-1] > length // 4:
            raise WindowTooLarge(
                f"window size {sizes[-1]} exceeds length/4 = {length // 4}"
            )
        q = self.q_grid if self.q_grid is not None else default_q_grid()
        return dataclasses.replace(self, window_sizes=sizes, q_grid=q)

    def fingerprint(self) -> str:
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class BoxVariance:
    """Residual variance of one detrended box."""

    window_size: int
    variance: float
    degenerate: bool
    box_index: int | None = None  # 1-based, forward pass first


@dataclass(frozen=True)
class FluctuationSurface:
    """F(s, q) grid plus per-s degenerate-box provenance."""

    s_values: np.ndarray  # (ns,) int
    q_values: np.ndarray  # (nq,) float
    values: np.ndarray  # (ns, nq) F(s, q), positive
    degenerate_counts: np.ndarray  # (ns,) boxes excluded at each s
    config: MfdfaConfig
    series_length: int
    input_fingerprint: str
    dropped_s: tuple[tuple[int, str], ...] = ()

    def q_index(self, q: float) -> int:
        idx = int(np.argmin(np.abs(self.q_values - q)))
        if abs(self.q_values[idx] - q) > 1e-9:
            raise InvalidParams(f"q={q} is not on the surface grid")
        return idx

    def column(self, q: float) -> tuple[np.ndarray, np.ndarray]:
        """(s values, F(s, q)) for one moment order."""
        return self.s_values, self.values[:, self.q_index(q)]


def partition_boxes(profile: Series | np.ndarray, s: int) -> list[tuple[int, int]]:
    """2N half-open index ranges of size s: N tiling from the first
    sample forward, then N tiling from the last sample backward (listed
    in ascending start order).

    Guards only the box arithmetic (at least two boxes per pass); the
    stricter s <= length/4 rule for meaningful moment statistics is
    enforced by the surface config.
    """
    length = len(profile)
    if s < 1:
        raise InvalidParams(f"window size must be >= 1, got {s}")
    if s > length // 2:
        raise WindowTooLarge(
            f"window size {s} leaves fewer than 2 boxes (length {length})"
        )
    n_boxes = length // s
    forward = [(i * s, (i + 1) * s) for i in range(n_boxes)]
    offset = length - n_boxes * s
    backward = [(offset + i * s, offset + (i + 1) * s) for i in range(n_boxes)]
    return forward + backward


def _poly_basis(s: int, order: int) -> np.ndarray:
    """Orthonormal basis (s, order+1) of polynomials of degree <= order."""
    if s < order + 2:
        raise InvalidParams(
            f"box of {s} samples cannot be detrended at order {order}"
        )
    t = np.linspace(-1.0, 1.0, s)
    vander = np.vander(t, order + 1, increasing=True)
    q_mat, r_mat = np.linalg.qr(vander)
    if np.any(np.abs(np.diag(r_mat)) < 1e-12):
        raise RankDeficient(
            f"polynomial basis of order {order} is singular on {s} points"
        )
    return q_mat


def _detrended_variances(values: np.ndarray, s: int, order: int) -> np.ndarray:
    """Residual variances of all 2N boxes at size s (forward then backward)."""
    length = values.size
    n_boxes = length // s
    forward = values[: n_boxes * s].reshape(n_boxes, s)
    backward = values[length - n_boxes * s :].reshape(n_boxes, s)
    boxes = np.concatenate([forward, backward], axis=0)
    basis = _poly_basis(s, order)
    # einsum keeps the reduction order fixed regardless of BLAS threading,
    # so surfaces are bit-stable across parallelism degrees.
    coeffs = np.einsum("bs,sk->bk", boxes, basis)
    residuals = boxes - np.einsum("bk,sk->bs", coeffs, basis)
    return np.einsum("bs,bs->b", residuals, residuals) / s


def box_variance(
    profile: Series, box_range: tuple[int, int], order: int, min_box_std: float = 1e-12
) -> BoxVariance:
    """Least-squares polynomial detrending of one box.

    Fits a degree-``order`` polynomial over abscissae 0..s-1 and returns
    the mean squared residual.
    """
    start, end = box_range
    values = np.asarray(profile.values if isinstance(profile, Series) else profile)
    if start < 0 or end > values.size or end <= start:
        raise InvalidParams(f"bad box range [{start}, {end})")
    segment = values[start:end]
    basis = _poly_basis(segment.size, order)
    coeffs = segment @ basis
    residuals = segment - basis @ coeffs
    f2 = float(residuals @ residuals / segment.size)
    return BoxVariance(
        window_size=segment.size,
        variance=f2,
        degenerate=bool(np.sqrt(f2) < min_box_std),
    )


def fluctuation_from_variances(
    variances: np.ndarray, q: float, min_box_std: float = 1e-12
) -> float:
    """Collapse per-box variances into F(s, q), excluding degenerate boxes."""
    f2 = np.asarray(variances, dtype=float)
    retained = f2[np.sqrt(np.maximum(f2, 0.0)) >= min_box_std]
    if retained.size == 0:
        raise AllBoxesDegenerate("all boxes degenerate at this window size")
    if q == 0.0:
        return float(np.exp(0.5 * np.mean(np.log(retained))))
    if abs(q) > LOG_SPACE_Q:
        log_f = (logsumexp(0.5 * q * np.log(retained)) - np.log(retained.size)) / q
        return float(np.exp(log_f))
    return float(np.mean(retained ** (q / 2.0)) ** (1.0 / q))


def fluctuation_surface(
    profile: Series, config: MfdfaConfig | None = None
) -> FluctuationSurface:
    """Evaluate F(s, q) over the configured window-size and q grids.

    Window sizes where every box is degenerate are dropped with a note;
    if all of them drop (e.g. constant input) the error is raised.
    """
    if profile.representation != "profile":
        raise WrongRepresentation(
            f"fluctuation_surface expects a profile, got {profile.representation!r}"
        )
    cfg = (config or MfdfaConfig()).resolve(len(profile))
    values = profile.values
    q_grid = np.asarray(cfg.q_grid, dtype=float)

    kept_s: list[int] = []
    rows: list[np.ndarray] = []
    degenerate_counts: list[int] = []
    dropped: list[tuple[int, str]] = []
    for s in cfg.window_sizes:
        if s > len(profile) // 4:
            raise WindowTooLarge(
                f"window size {s} exceeds length/4 = {len(profile) // 4}"
            )
        f2 = _detrended_variances(values, s, cfg.order)
        degenerate = np.sqrt(np.maximum(f2, 0.0)) < cfg.min_box_std
        retained = f2[~degenerate]
        if retained.size == 0:
            dropped.append((s, "all boxes degenerate"))
            continue
        row = np.empty(q_grid.size)
        for j, q in enumerate(q_grid):
            row[j] = fluctuation_from_variances(retained, float(q), cfg.min_box_std)
        kept_s.append(s)
        rows.append(row)
        degenerate_counts.append(int(degenerate.sum()))
    if not kept_s:
        raise AllBoxesDegenerate(
            "every window size degenerate: input has no fluctuations"
        )
    for s, reason in dropped:
        warnings.warn(f"dropping window size {s}: {reason}", stacklevel=2)
    return FluctuationSurface(
        s_values=np.asarray(kept_s, dtype=int),
        q_values=q_grid,
        values=np.vstack(rows),
        degenerate_counts=np.asarray(degenerate_counts, dtype=int),
        config=cfg,
        series_length=len(profile),
        input_fingerprint=profile.fingerprint(),
        dropped_s=tuple(dropped),
    )


def write_surface_csv(surface: FluctuationSurface, path: str | Path) -> None:
    """CSV of (s, q, F, degenerate_count) rows under a JSON metadata header."""
    meta = {
        "config": dataclasses.asdict(surface.config),
        "series_length": surface.series_length,
        "input_fingerprint": surface.input_fingerprint,
        "dropped_s": list(surface.dropped_s),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# {json.dumps(meta, sort_keys=True)}\n")
        fh.write("s,q,F,degenerate_count\n")
        for i, s in enumerate(surface.s_values):
            for j, q in enumerate(surface.q_values):
                fh.write(
                    f"{int(s)},{float(q)!r},{float(surface.values[i, j])!r},"
                    f"{int(surface.degenerate_counts[i])}\n"
                )


def read_surface_csv(path: str | Path) -> FluctuationSurface:
    """Load a surface written by :func:`write_surface_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise InvalidParams(f"{path} has no surface metadata header")
        meta = json.loads(header[1:].strip())
        fh.readline()  # column names
        s_list, q_list, f_list, d_list = [], [], [], []
        for line in fh:
            if not line.strip():
                continue
            s, q, f, d = line.strip().split(",")
            s_list.append(int(s))
            q_list.append(float(q))
            f_list.append(float(f))
            d_list.append(int(d))
    s_values = np.unique(s_list)
    q_values = np.unique(q_list)
    values = np.asarray(f_list).reshape(s_values.size, q_values.size)
    degenerate = np.asarray(d_list, dtype=int).reshape(s_values.size, q_values.size)[:, 0]
    cfg_dict = meta["config"]
    cfg = MfdfaConfig(
        order=cfg_dict["order"],
        window_sizes=tuple(cfg_dict["window_sizes"]),
        q_grid=tuple(cfg_dict["q_grid"]),
        min_box_std=cfg_dict["min_box_std"],
    )
    return FluctuationSurface(
        s_values=s_values,
        q_values=q_values,
        values=values,
        degenerate_counts=degenerate,
        config=cfg,
        series_length=meta["series_length"],
        input_fingerprint=meta["input_fingerprint"],
        dropped_s=tuple((int(s), r) for s, r in meta.get("dropped_s", [])),
    )
