"""Deterministic synthetic series used as fixtures and demo data.

``goalpost``  flat baseline with triangular peaks (two by default), like a
              day of temperature readings with a double fever spike.
``ecg_like``  baseline with sharp R spikes at given spacings, plus small P
              and T bumps that a tolerance of about 60 units ignores.
``noise``     gaussian noise around ``baseline``.
``ramp``      straight line, optionally noisy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import BadSpec
from .seqcore import TimeSeries

KINDS = ("goalpost", "ecg_like", "noise", "ramp")

# per-kind defaults for the fields left as None
_DEFAULTS = {
    "goalpost": dict(length=240, amplitude=5.0, baseline=37.0, noise=0.05, peaks=2,
                     rise=10, fall=10),
    "ecg_like": dict(length=512, amplitude=130.0, baseline=-45.0, noise=2.0, first=132,
                     spacing=(137, 133), rise=6, fall=10),
    "noise": dict(length=256, amplitude=1.0, baseline=0.0),
    "ramp": dict(length=100, baseline=0.0, slope=1.0, noise=0.0),
}


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    length: int | None = None
    seed: int = 0
    amplitude: float | None = None
    baseline: float | None = None
    noise: float | None = None
    # goalpost: number of peaks, or explicit apex positions
    peaks: int | None = None
    positions: tuple[int, ...] | None = None
    # ecg_like: first R apex and the gaps between successive apexes
    first: int | None = None
    spacing: tuple[int, ...] | None = None
    rise: int | None = None
    fall: int | None = None
    # ramp
    slope: float | None = None

    def resolved(self) -> "GeneratorSpec":
        if self.kind not in KINDS:
            raise BadSpec(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        fill = {k: v for k, v in _DEFAULTS[self.kind].items() if getattr(self, k) is None}
        spec = replace(self, **fill)
        spec._validate()
        return spec

    def _validate(self):
        if self.length is None or self.length < 1:
            raise BadSpec(f"length must be >= 1, got {self.length}")
        if self.noise is not None and self.noise < 0:
            raise BadSpec("noise must be >= 0")
        if self.kind == "noise" and self.amplitude < 0:
            raise BadSpec("amplitude must be >= 0")
        if self.kind in ("goalpost", "ecg_like"):
            if self.rise < 1 or self.fall < 1:
                raise BadSpec("rise and fall must be >= 1")
            apexes = self.apexes()
            if any(a - self.rise < 0 or a + self.fall >= self.length for a in apexes):
                raise BadSpec(f"peaks {apexes} do not fit in length {self.length}")
            if any(b - a <= self.rise + self.fall for a, b in zip(apexes, apexes[1:])):
                raise BadSpec(f"peaks {apexes} overlap")
        if self.kind == "goalpost" and self.positions is None and self.peaks < 0:
            raise BadSpec("peaks must be >= 0")

    def apexes(self) -> list[int]:
        if self.kind == "goalpost":
            if self.positions is not None:
                return sorted(int(p) for p in self.positions)
            return [round(self.length * (k + 1) / (self.peaks + 1)) for k in range(self.peaks)]
        if self.kind == "ecg_like":
            return [int(x) for x in np.cumsum([self.first, *self.spacing])]
        return []


def _triangle(t, apex, rise, fall):
    up = np.clip((t - (apex - rise)) / rise, 0.0, 1.0)
    down = np.clip(((apex + fall) - t) / fall, 0.0, 1.0)
    return np.minimum(up, down)


def generate(spec: GeneratorSpec, id: str | None = None) -> TimeSeries:
    """Same spec and seed always give the same series."""
    spec = spec.resolved()
    rng = np.random.default_rng(spec.seed)
    t = np.arange(spec.length, dtype=float)
    if spec.kind == "goalpost":
        y = np.full(spec.length, spec.baseline)
        for apex in spec.apexes():
            y += spec.amplitude * _triangle(t, apex, spec.rise, spec.fall)
    elif spec.kind == "ecg_like":
        y = np.full(spec.length, spec.baseline)
        for apex in spec.apexes():
            # R up-stroke, then a down-stroke overshooting into the S dip
            y += spec.amplitude * _triangle(t, apex, spec.rise, spec.fall)
            s_end = apex + spec.fall
            dip = np.clip(1.0 - np.abs(t - s_end) / 6.0, 0.0, 1.0) * (t >= apex)
            y -= 0.2 * spec.amplitude * dip
            y += 0.1 * spec.amplitude * np.exp(-0.5 * ((t - apex - 45) / 9.0) ** 2)
            y += 0.06 * spec.amplitude * np.exp(-0.5 * ((t - apex + 28) / 5.0) ** 2)
    elif spec.kind == "noise":
        y = spec.baseline + spec.amplitude * rng.standard_normal(spec.length)
    else:
        y = spec.baseline + spec.slope * t
    if spec.kind != "noise" and spec.noise:
        y = y + spec.noise * rng.standard_normal(spec.length)
    return TimeSeries(id or spec.kind, tuple(y))
