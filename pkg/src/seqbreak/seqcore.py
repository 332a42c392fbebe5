"""Raw sequences: the input type, its text file format and preprocessing."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import BadWindow, DegenerateVariance, ParseError, TooShort


@dataclass(frozen=True)
class TimeSeries:
    """Ordered samples; sample ``k`` sits at integer time index ``k``."""

    id: str
    samples: tuple[float, ...] = field(repr=False)

    def __post_init__(self):
        samples = tuple(float(x) for x in self.samples)
        if not samples:
            raise TooShort("a series needs at least one sample")
        if not all(math.isfinite(x) for x in samples):
            raise ValueError(f"series {self.id!r} contains non-finite samples")
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        return len(self.samples)

    @cached_property
    def values(self) -> np.ndarray:
        arr = np.array(self.samples, dtype=float)
        arr.setflags(write=False)
        return arr

    def with_samples(self, samples, id: str | None = None) -> "TimeSeries":
        return TimeSeries(self.id if id is None else id, tuple(samples))


@dataclass(frozen=True)
class NormalizationParams:
    mean: float
    std: float

    def __post_init__(self):
        if not (self.std > 0 and math.isfinite(self.std)):
            raise ValueError(f"std must be positive and finite, got {self.std}")
        if not math.isfinite(self.mean):
            raise ValueError(f"mean must be finite, got {self.mean}")


def normalize(series: TimeSeries) -> tuple[TimeSeries, NormalizationParams]:
    """Shift and scale to mean 0 and population variance 1."""
    if len(series) < 2:
        raise TooShort(f"normalize needs at least 2 samples, got {len(series)}")
    x = series.values
    mean = float(np.mean(x))
    std = float(np.sqrt(np.mean((x - mean) ** 2)))
    if std == 0.0 or np.all(x == x[0]):
        raise DegenerateVariance(f"series {series.id!r} is constant")
    params = NormalizationParams(mean, std)
    return apply_normalization(series, params), params


def apply_normalization(series: TimeSeries, params: NormalizationParams) -> TimeSeries:
    return series.with_samples((series.values - params.mean) / params.std)


def denormalize(series: TimeSeries, params: NormalizationParams) -> TimeSeries:
    return series.with_samples(series.values * params.std + params.mean)


def smooth(series: TimeSeries, window: int) -> TimeSeries:
    """Centered moving average; windows are truncated at the edges."""
    n = len(series)
    if not isinstance(window, (int, np.integer)) or window < 1 or window % 2 == 0 or window > n:
        raise BadWindow(f"window must be odd and in [1, {n}], got {window!r}")
    if window == 1:
        return series
    half = window // 2
    csum = np.concatenate(([0.0], np.cumsum(series.values)))
    idx = np.arange(n)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, n)
    out = (csum[hi] - csum[lo]) / (hi - lo)
    # cumulative sums can drift a hair outside the window's range
    out = np.clip(out, series.values.min(), series.values.max())
    return series.with_samples(out)


def parse_series(text: str, id: str, path=None) -> TimeSeries:
    """Parse one-sample-per-line text; blank lines and ``#`` comments are skipped."""
    samples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = float(line)
        except ValueError:
            raise ParseError(f"not a number: {line!r}", path, lineno) from None
        if not math.isfinite(value):
            raise ParseError(f"non-finite sample: {line!r}", path, lineno)
        samples.append(value)
    if not samples:
        raise ParseError("no samples found", path)
    return TimeSeries(id, tuple(samples))


def read_series(path, id: str | None = None) -> TimeSeries:
    path = Path(path)
    return parse_series(path.read_text(encoding="utf-8"), id or path.stem, path)


def format_series(series: TimeSeries) -> str:
    return "".join(f"{x:.17g}\n" for x in series.samples)


def write_series(series: TimeSeries, path) -> None:
    Path(path).write_text(format_series(series), encoding="utf-8")
