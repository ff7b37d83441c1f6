"""Time-series container and elementary transforms.

A :class:`Series` carries its values together with a declared
representation so the pipeline can refuse nonsensical conversions:

``price``      raw positive levels, e.g. daily index closes
``log-price``  natural log of prices
``return``     first differences of a level-like series
``profile``    an integrated signal (cumulative sum of mean-subtracted
               increments), the thing detrended fluctuation analysis
               actually operates on

All transforms are pure functions; Series values are frozen after
construction and safe to share across threads.
"""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import (
    CsvFormatError,
    NonPositiveValue,
    OutOfRange,
    TooShort,
    WrongRepresentation,
)

REPRESENTATIONS = ("price", "log-price", "return", "profile")

#: Identity of the seeded generator used by shuffles, recorded in manifests
#: so seeded runs are reproducible.
RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True)
class Series:
    """Ordered finite real samples with a declared representation.

    Invariants enforced at construction: values are finite, prices are
    strictly positive, timestamps (when present) are strictly increasing
    and aligned 1:1 with the values.
    """

    values: np.ndarray
    representation: str
    label: str = ""
    timestamps: tuple[date, ...] | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ValueError("series values must be finite (no NaN/inf)")
        if self.representation not in REPRESENTATIONS:
            raise WrongRepresentation(
                f"unknown representation {self.representation!r}; "
                f"expected one of {REPRESENTATIONS}"
            )
        if self.representation == "price" and values.size and values.min() <= 0:
            raise NonPositiveValue("price series must be strictly positive")
        if self.timestamps is not None:
            ts = tuple(self.timestamps)
            if len(ts) != values.size:
                raise ValueError("timestamps must align 1:1 with values")
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise ValueError("timestamps must be strictly increasing")
            object.__setattr__(self, "timestamps", ts)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    def fingerprint(self) -> str:
        """Content hash of values plus representation (hex sha256)."""
        digest = hashlib.sha256()
        digest.update(self.representation.encode())
        digest.update(self.values.tobytes())
        return digest.hexdigest()


@dataclass(frozen=True)
class SliceSpec:
    """Half-open index window [start, end) into a series."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end <= self.start:
            raise OutOfRange(f"invalid slice [{self.start}, {self.end})")


def to_log(series: Series) -> Series:
    """Natural log of a price series, elementwise."""
    if series.representation != "price":
        raise WrongRepresentation(
            f"to_log expects a price series, got {series.representation!r}"
        )
    if series.values.size and series.values.min() <= 0:
        raise NonPositiveValue("cannot take log of non-positive values")
    return dataclasses.replace(
        series, values=np.log(series.values), representation="log-price"
    )


def to_returns(series: Series) -> Series:
    """First differences of a level-like series (one sample shorter).

    Each return is stamped with the date of its later endpoint when the
    input carries timestamps.
    """
    if series.representation == "return":
        raise WrongRepresentation("series is already a return series")
    if len(series) < 2:
        raise TooShort("need at least 2 samples to form returns")
    ts = series.timestamps[1:] if series.timestamps is not None else None
    return Series(
        np.diff(series.values), "return", label=series.label, timestamps=ts
    )


def to_profile(series: Series) -> Series:
    """Cumulative sum of mean-subtracted returns."""
    if series.representation != "return":
        raise WrongRepresentation(
            f"to_profile expects a return series, got {series.representation!r}"
        )
    values = np.cumsum(series.values - series.values.mean())
    return Series(values, "profile", label=series.label, timestamps=series.timestamps)


def integrate_returns(
    returns: Series,
    anchor: float,
    representation: str = "profile",
    label: str | None = None,
) -> Series:
    """Cumulative integration of returns starting from ``anchor``.

    Exact inverse of :func:`to_returns` (up to float accumulation) when
    ``anchor`` is the first value of the original series. Output has one
    more sample than the input.
    """
    if returns.representation != "return":
        raise WrongRepresentation(
            f"integrate_returns expects returns, got {returns.representation!r}"
        )
    values = np.empty(len(returns) + 1)
    values[0] = anchor
    np.cumsum(returns.values, out=values[1:])
    values[1:] += anchor
    return Series(
        values,
        representation,
        label=returns.label if label is None else label,
    )


def slice_series(series: Series, spec: SliceSpec) -> Series:
    """Contiguous sub-series over [start, end); timestamps follow."""
    if spec.end > len(series):
        raise OutOfRange(
            f"slice [{spec.start}, {spec.end}) exceeds length {len(series)}"
        )
    ts = (
        series.timestamps[spec.start : spec.end]
        if series.timestamps is not None
        else None
    )
    return Series(
        series.values[spec.start : spec.end],
        series.representation,
        label=series.label,
        timestamps=ts,
    )


def shuffle_returns(series: Series, seed: int) -> Series:
    """Destroy temporal order by permuting returns and reintegrating.

    The series is differentiated, its returns are permuted by a seeded
    PCG64 generator, and the permuted returns are integrated back from
    the original first value. The multiset of returns, the first value
    and (up to float accumulation) the last value are preserved.
    """
    returns = to_returns(series)
    rng = np.random.default_rng(seed)
    permuted = returns.values[rng.permutation(len(returns))]
    shuffled = Series(permuted, "return", label=series.label)
    out = integrate_returns(
        shuffled,
        float(series.values[0]),
        representation=series.representation,
        label=f"{series.label} [shuffled {RNG_ALGORITHM} seed={seed}]".strip(),
    )
    if series.timestamps is not None:
        out = dataclasses.replace(out, timestamps=series.timestamps)
    return out


def _detect_delimiter(line: str) -> str:
    return ";" if line.count(";") > line.count(",") else ","


def _parse_lead_field(field: str) -> date | int | None:
    """First CSV column: ISO date, integer index, or unparseable (None)."""
    try:
        return date.fromisoformat(field)
    except ValueError:
        pass
    try:
        return int(field)
    except ValueError:
        return None


def read_csv(path: str | Path, representation: str = "price", label: str | None = None) -> Series:
    """Load a series from CSV: (close) or (date-or-index, close) records.

    Comma or semicolon separated; a header line is auto-detected. A
    non-numeric close field anywhere past the header is a hard error
    reported with its line number.
    """
    path = Path(path)
    values: list[float] = []
    stamps: list[date] = []
    delimiter = None
    may_be_header = True  # only the very first record is eligible
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if delimiter is None:
                delimiter = _detect_delimiter(line)
            is_first = may_be_header
            may_be_header = False
            fields = [f.strip() for f in line.split(delimiter)]
            if len(fields) == 1:
                lead, close_field = None, fields[0]
            elif len(fields) == 2:
                lead, close_field = fields
            else:
                raise CsvFormatError(
                    f"expected 1 or 2 columns, got {len(fields)}", line=lineno
                )
            try:
                close = float(close_field)
            except ValueError:
                if is_first:
                    continue  # header
                raise CsvFormatError(
                    f"non-numeric close field {close_field!r}", line=lineno
                ) from None
            if lead is not None:
                parsed = _parse_lead_field(lead)
                if parsed is None:
                    if is_first:
                        continue  # header with a numeric-looking second column
                    raise CsvFormatError(
                        f"first column {lead!r} is neither an ISO date nor an index",
                        line=lineno,
                    )
                if isinstance(parsed, date):
                    stamps.append(parsed)
            values.append(close)
    if not values:
        raise CsvFormatError(f"no data records found in {path}")
    if stamps and len(stamps) != len(values):
        raise CsvFormatError("mixed dated and undated records")
    return Series(
        np.array(values),
        representation,
        label=path.stem if label is None else label,
        timestamps=tuple(stamps) if stamps else None,
    )


def write_csv(series: Series, path: str | Path) -> None:
    """Write a series as CSV, (date, value) when stamped, else (index, value)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if series.timestamps is not None:
            fh.write("date,value\n")
            for ts, v in zip(series.timestamps, series.values):
                fh.write(f"{ts.isoformat()},{float(v)!r}\n")
        else:
            fh.write("index,value\n")
            for i, v in enumerate(series.values):
                fh.write(f"{i},{float(v)!r}\n")
