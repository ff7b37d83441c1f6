"""Singularity spectrum from the generalized Hurst exponents.

The scaling exponent is s(q) = q*h(q) - 1 (written tau(q) in much of the
literature), the Holder exponent is its derivative alpha = ds/dq, and
the spectrum is the Legendre transform f(alpha) = q*alpha - s(q). The
width of f(alpha) measures multifractality strength; a non-monotonic
alpha(q) folds the top of the curve ("twist"), a diagnostic of
nonstationary input rather than an artifact to drop, so twisted points
are kept and flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmall, InvalidParams
from .scaling import HurstFunction

#: alpha(q) wiggles smaller than this are finite-differencing noise,
#: not a real fold.
TWIST_NOISE_FLOOR = 1e-6


@dataclass(frozen=True)
class SingularitySpectrum:
    """(alpha, f(alpha)) point set with width and peak diagnostics."""

    q_values: np.ndarray
    alphas: np.ndarray
    f_values: np.ndarray
    width: float
    alpha_min: float
    alpha_max: float
    peak_alpha: float
    peak_f: float
    twisted: bool
    series_length: int | None = None


@dataclass(frozen=True)
class ExcessWidth:
    """Spectrum width with the finite-length background subtracted."""

    width: float
    baseline_mean: float
    baseline_std: float
    baseline_length: int
    baseline_hurst: float
    excess: float
    assessment: str


@dataclass(frozen=True)
class MetricsRecord:
    """Reportable spectrum metrics, optionally baseline-adjusted."""

    width: float
    alpha_min: float
    alpha_max: float
    peak_alpha: float
    peak_f: float
    twisted: bool
    series_length: int | None
    excess: ExcessWidth | None = None


def tau_of_q(h: HurstFunction) -> np.ndarray:
    """Scaling exponent s(q) = q*h(q) - 1 on the fitted grid."""
    return h.q_values * h.h_values - 1.0


def alpha_of_q(tau: np.ndarray, q_grid: np.ndarray) -> np.ndarray:
    """Holder exponent alpha = ds/dq by finite differences.

    Central differences on the (possibly nonuniform) grid, second-order
    one-sided at the endpoints; exact for quadratic s(q).
    """
    tau = np.asarray(tau, dtype=float)
    q_grid = np.asarray(q_grid, dtype=float)
    if q_grid.size < 3:
        raise GridTooSmall(f"need >= 3 grid points, got {q_grid.size}")
    if tau.shape != q_grid.shape:
        raise InvalidParams("tau and q grids must align")
    return np.gradient(tau, q_grid, edge_order=2)


def legendre_spectrum(h: HurstFunction) -> SingularitySpectrum:
    """Transform h(q) into the (alpha, f(alpha)) singularity spectrum.

    At q = 0 the identity f = -s(0) = 1 holds algebraically, so the
    spectrum always touches 1 there regardless of the input.
    """
    q = h.q_values
    if not np.any(q == 0.0):
        raise InvalidParams("q grid must contain 0")
    tau = tau_of_q(h)
    alpha = alpha_of_q(tau, q)
    f = q * alpha - tau
    peak_idx = int(np.argmax(f))
    twisted = bool(np.any(np.diff(alpha) > TWIST_NOISE_FLOOR))
    return SingularitySpectrum(
        q_values=q,
        alphas=alpha,
        f_values=f,
        width=float(alpha.max() - alpha.min()),
        alpha_min=float(alpha.min()),
        alpha_max=float(alpha.max()),
        peak_alpha=float(alpha[peak_idx]),
        peak_f=float(f[peak_idx]),
        twisted=twisted,
        series_length=h.series_length,
    )


def spectrum_metrics(spec: SingularitySpectrum, baseline=None) -> MetricsRecord:
    """Report width/peak/twist; subtract the finite-length background
    when a calibration report is supplied.

    The baseline entry is looked up by the spectrum's series length and
    its peak position (the best available proxy for the underlying H).
    """
    excess = None
    if baseline is not None:
        if spec.series_length is None:
            raise InvalidParams("spectrum carries no series length for baseline lookup")
        entry = baseline.lookup(spec.series_length, spec.peak_alpha)
        diff = spec.width - entry.mean_width
        assessment = (
            "consistent with monofractal"
            if diff <= 0
            else "exceeds finite-length background"
        )
        excess = ExcessWidth(
            width=spec.width,
            baseline_mean=entry.mean_width,
            baseline_std=entry.std_width,
            baseline_length=entry.length,
            baseline_hurst=entry.hurst,
            excess=diff,
            assessment=assessment,
        )
    return MetricsRecord(
        width=spec.width,
        alpha_min=spec.alpha_min,
        alpha_max=spec.alpha_max,
        peak_alpha=spec.peak_alpha,
        peak_f=spec.peak_f,
        twisted=spec.twisted,
        series_length=spec.series_length,
        excess=excess,
    )
