"""Peak records, peak-to-peak intervals, and an inverted file over interval lengths."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IntervalOutOfBounds, ParseError
from .segmenter import RepresentedSequence, Segment, _values
from .slopelang import SlopeConfig, signature

DEFAULT_BOUNDS = (20, 2000)


@dataclass(frozen=True)
class PeakRecord:
    """A rising segment immediately followed by a descending one.

    Boundary points are ``(index, amplitude)`` pairs read from the original
    samples.  The peak sits at whichever of ``r_end``/``d_start`` is higher,
    ``r_end`` on ties.
    """

    rising: Segment
    descending: Segment
    r_start: tuple[int, float]
    r_end: tuple[int, float]
    d_start: tuple[int, float]
    d_end: tuple[int, float]

    @property
    def peak_time(self) -> int:
        return self.r_end[0] if self.r_end[1] >= self.d_start[1] else self.d_start[0]

    @property
    def peak_amplitude(self) -> float:
        return max(self.r_end[1], self.d_start[1])


def find_peaks(rep: RepresentedSequence, series, cfg: SlopeConfig = SlopeConfig()) -> list[PeakRecord]:
    """One record per adjacent ``P``, ``N`` pair in the slope signature.

    ``series`` must be in the same units the representation was built from.
    """
    y = _values(series)
    if len(y) != rep.length:
        raise ValueError(f"series has {len(y)} samples, representation covers {rep.length}")
    symbols = signature(rep, cfg).symbols
    segs = rep.segments

    def point(t):
        return (t, float(y[t]))

    peaks = []
    for k in range(len(symbols) - 1):
        if symbols[k] == "P" and symbols[k + 1] == "N":
            r, d = segs[k], segs[k + 1]
            peaks.append(PeakRecord(r, d, point(r.start), point(r.end), point(d.start), point(d.end)))
    return peaks


def intervals(peaks) -> list[int]:
    """Successive differences of peak times."""
    times = [p.peak_time if isinstance(p, PeakRecord) else int(p) for p in peaks]
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("peaks must be sorted by peak time")
    return [b - a for a, b in zip(times, times[1:])]


@dataclass(frozen=True)
class IntervalIndex:
    """Inverted file: interval length -> sorted ids of sequences containing it."""

    postings: dict[int, tuple[str, ...]]
    bounds: tuple[int, int] = DEFAULT_BOUNDS
    _keys: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = self.bounds
        if not (0 < lo <= hi):
            raise ValueError(f"bad bounds {self.bounds}")
        ordered = {int(k): tuple(sorted(set(v))) for k, v in sorted(self.postings.items())}
        object.__setattr__(self, "postings", ordered)
        object.__setattr__(self, "bounds", (int(lo), int(hi)))
        object.__setattr__(self, "_keys", tuple(ordered))

    def lookup_range(self, low: int, high: int) -> list[str]:
        i = bisect.bisect_left(self._keys, low)
        j = bisect.bisect_right(self._keys, high)
        ids = set()
        for key in self._keys[i:j]:
            ids.update(self.postings[key])
        return sorted(ids)


def build_index(db, bounds: tuple[int, int] = DEFAULT_BOUNDS) -> IntervalIndex:
    """``db`` is an iterable of ``(sequence_id, interval_list)`` pairs."""
    lo, hi = bounds
    postings: dict[int, set[str]] = {}
    for seq_id, ivals in db:
        for value in ivals:
            if not lo <= value <= hi:
                raise IntervalOutOfBounds(seq_id, value, bounds)
            postings.setdefault(int(value), set()).add(seq_id)
    return IntervalIndex({k: tuple(v) for k, v in postings.items()}, (lo, hi))


def query_interval(index: IntervalIndex, n: int, delta: int = 0) -> list[str]:
    """Ids having some interval within ``n +/- delta``."""
    lo, hi = index.bounds
    if not lo <= n <= hi:
        raise ValueError(f"query length {n} outside index bounds [{lo}, {hi}]")
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    return index.lookup_range(n - delta, n + delta)


def format_index(index: IntervalIndex) -> str:
    lines = [f"IDX {index.bounds[0]} {index.bounds[1]}"]
    lines += [" ".join([str(k), *ids]) for k, ids in index.postings.items()]
    return "\n".join(lines) + "\n"


def parse_index(text: str, path=None) -> IntervalIndex:
    bounds = None
    postings = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        try:
            if bounds is None:
                if parts[0] != "IDX" or len(parts) != 3:
                    raise ValueError("expected 'IDX <min> <max>' header")
                bounds = (int(parts[1]), int(parts[2]))
                continue
            key = int(parts[0])
            if key in postings or len(parts) < 2:
                raise ValueError(f"bad posting line {raw!r}")
            if postings and key < max(postings):
                raise ValueError("posting lines out of order")
            postings[key] = tuple(parts[1:])
        except ValueError as exc:
            raise ParseError(str(exc), path, lineno) from None
    if bounds is None:
        raise ParseError("missing IDX header", path)
    return IntervalIndex(postings, bounds)


def write_index(index: IntervalIndex, path) -> None:
    Path(path).write_text(format_index(index), encoding="utf-8")


def read_index(path) -> IntervalIndex:
    path = Path(path)
    return parse_index(path.read_text(encoding="utf-8"), path)
