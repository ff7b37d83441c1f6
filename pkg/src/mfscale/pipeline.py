"""Convenience wiring of the full analysis chain.

Keeps the representation bookkeeping (price -> log -> returns ->
profile) in one place so the CLI, the calibration loop and scripts all
run the same pipeline.
"""

from __future__ import annotations

import dataclasses

from .errors import InvalidParams, WrongRepresentation
from .mfdfa import FluctuationSurface, MfdfaConfig, fluctuation_surface
from .scaling import AutoRangePolicy, HurstFunction, ScalingRange, auto_ranges, hurst_function
from .series import Series, to_log, to_profile, to_returns
from .spectrum import SingularitySpectrum, legendre_spectrum

PIPELINES = ("log-returns", "raw-diff", "as-profile")


def prepare_profile(series: Series, pipeline: str = "log-returns") -> tuple[Series, list[str]]:
    """Convert an input series to the profile fed to detrending.

    Returns the profile and the chain of representations traversed, for
    provenance. ``log-returns`` is the default for price data;
    ``raw-diff`` differences the levels as-is; ``as-profile`` declares
    the values to already be an integrated signal (e.g. generated
    midpoint-displacement traces).
    """
    if pipeline not in PIPELINES:
        raise InvalidParams(f"unknown pipeline {pipeline!r}; expected {PIPELINES}")
    chain = [series.representation]
    if pipeline == "as-profile":
        if series.representation != "profile":
            series = dataclasses.replace(series, representation="profile")
            chain.append("profile")
        return series, chain
    if pipeline == "log-returns":
        if series.representation == "price":
            series = to_log(series)
            chain.append("log-price")
        elif series.representation not in ("log-price", "profile"):
            raise WrongRepresentation(
                "log-returns pipeline needs price or log-price input"
            )
    if series.representation != "return":
        series = to_returns(series)
        chain.append("return")
    series = to_profile(series)
    chain.append("profile")
    return series, chain


def analyze_profile(
    profile: Series,
    config: MfdfaConfig | None = None,
    policy: AutoRangePolicy | None = None,
    ranges: dict[float, ScalingRange | tuple[int, int]] | None = None,
) -> tuple[FluctuationSurface, HurstFunction, SingularitySpectrum]:
    """surface -> h(q) -> spectrum with auto ranges unless given."""
    surface = fluctuation_surface(profile, config)
    if ranges is None:
        ranges = auto_ranges(surface, policy)
    h = hurst_function(surface, ranges)
    return surface, h, legendre_spectrum(h)
