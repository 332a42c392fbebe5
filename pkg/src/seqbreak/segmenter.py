"""Breaking a series into contiguous linear segments.

Two strategies are provided.  :func:`segment_recursive` is the top-down
curve-fitting scheme: fit one line to the whole range, split at the point
that deviates most, attach that point to whichever neighbouring fit lies
closer, and recurse until every piece is within tolerance.
:func:`segment_dp` finds the globally cheapest segmentation under the cost
``a * (#segments) + b * (sum of per-segment max deviation)`` and serves as
an optimality reference for the recursive scheme.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BadRange, ParseError
from .seqcore import NormalizationParams, TimeSeries


class FitKind(enum.Enum):
    INTERPOLATION = "interp"
    REGRESSION = "regress"


@dataclass(frozen=True)
class LinearFunction:
    """``F(t) = slope * t + intercept`` at absolute index ``t``."""

    slope: float
    intercept: float

    def __post_init__(self):
        if not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise ValueError(f"non-finite line {self.slope}, {self.intercept}")

    def __call__(self, t):
        return self.slope * t + self.intercept


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    break_line: LinearFunction
    rep_line: LinearFunction
    max_dev: float
    fit_kind: FitKind

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"segment start {self.start} after end {self.end}")
        if not (self.max_dev >= 0 and math.isfinite(self.max_dev)):
            raise ValueError(f"bad max_dev {self.max_dev}")

    def __len__(self):
        return self.end - self.start + 1


@dataclass(frozen=True)
class RepresentedSequence:
    """Contiguous segments covering ``[0, length - 1]`` of one source series."""

    source_id: str
    length: int
    epsilon: float
    segments: tuple[Segment, ...]
    norm: NormalizationParams | None = None
    phi: float | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        check_partition(self.segments, self.length)

    @property
    def fit_kind(self) -> FitKind:
        return self.segments[0].fit_kind

    @property
    def breakpoints(self) -> list[int]:
        """Start index of every segment after the first."""
        return [seg.start for seg in self.segments[1:]]

    @property
    def max_dev(self) -> float:
        return max(seg.max_dev for seg in self.segments)


@dataclass(frozen=True)
class DPConfig:
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or not self.a + self.b > 0:
            raise ValueError(f"need a, b >= 0 and a + b > 0, got a={self.a}, b={self.b}")


def check_partition(segments, n: int) -> None:
    if not segments:
        raise ValueError("a representation needs at least one segment")
    if segments[0].start != 0 or segments[-1].end != n - 1:
        raise ValueError(
            f"segments cover [{segments[0].start}, {segments[-1].end}], expected [0, {n - 1}]"
        )
    for prev, nxt in zip(segments, segments[1:]):
        if nxt.start != prev.end + 1:
            raise ValueError(f"gap or overlap between {prev.end} and {nxt.start}")


def _values(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return np.asarray(series, dtype=float)


def _check_range(n: int, i: int, j: int) -> None:
    if not (0 <= i <= j < n):
        raise BadRange(f"need 0 <= i <= j < {n}, got i={i}, j={j}")


def _interp(y: np.ndarray, i: int, j: int) -> LinearFunction:
    if i == j:
        return LinearFunction(0.0, float(y[i]))
    slope = float((y[j] - y[i]) / (j - i))
    return LinearFunction(slope, float(y[i] - slope * i))


def _regress(y: np.ndarray, i: int, j: int) -> LinearFunction:
    seg = y[i : j + 1]
    if i == j:
        return LinearFunction(0.0, float(seg[0]))
    t = np.arange(i, j + 1, dtype=float)
    tc = t - t.mean()
    ym = float(seg.mean())
    slope = float(np.dot(tc, seg - ym) / np.dot(tc, tc))
    return LinearFunction(slope, ym - slope * float(t.mean()))


_FITTERS = {FitKind.INTERPOLATION: _interp, FitKind.REGRESSION: _regress}


def _deviations(y: np.ndarray, i: int, j: int, line: LinearFunction) -> np.ndarray:
    t = np.arange(i, j + 1, dtype=float)
    return np.abs(line.slope * t + line.intercept - y[i : j + 1])


def fit_interpolation(series, i: int, j: int) -> LinearFunction:
    """Line through ``(i, s_i)`` and ``(j, s_j)``; flat when ``i == j``."""
    y = _values(series)
    _check_range(len(y), i, j)
    return _interp(y, i, j)


def fit_regression(series, i: int, j: int) -> LinearFunction:
    """Ordinary least-squares line over the points ``(t, s_t)`` for ``t`` in ``[i, j]``."""
    y = _values(series)
    _check_range(len(y), i, j)
    return _regress(y, i, j)


def max_deviation(series, i: int, j: int, line: LinearFunction) -> tuple[int, float]:
    """Index and size of the largest ``|line(t) - s_t|`` on ``[i, j]``; ties go to the smallest index."""
    y = _values(series)
    _check_range(len(y), i, j)
    dev = _deviations(y, i, j, line)
    k = int(np.argmax(dev))
    return i + k, float(dev[k])


def _make_segment(y, i, j, fit_kind, store_break, line=None) -> Segment:
    if line is None:
        line = _FITTERS[fit_kind](y, i, j)
    dev = float(_deviations(y, i, j, line).max())
    rep = line if store_break else _regress(y, i, j)
    return Segment(i, j, line, rep, dev, fit_kind)


def segment_recursive(
    series,
    epsilon: float,
    fit_kind: FitKind = FitKind.INTERPOLATION,
    store_break_line: bool = False,
    source_id: str | None = None,
    norm: NormalizationParams | None = None,
) -> RepresentedSequence:
    """Top-down split at the point of maximum deviation until every piece is within ``epsilon``.

    Each final segment keeps the fitted line in ``break_line``; ``rep_line``
    is the segment's regression line unless ``store_break_line`` is set.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    fit_kind = FitKind(fit_kind)
    y = _values(series)
    n = len(y)
    if n < 1:
        raise ValueError("cannot segment an empty series")
    fit = _FITTERS[fit_kind]

    done: list[Segment] = []
    stack = [(0, n - 1)]
    while stack:
        lo, hi = stack.pop()
        line = fit(y, lo, hi)
        if hi - lo + 1 <= 2:
            done.append(_make_segment(y, lo, hi, fit_kind, store_break_line, line))
            continue
        dev = _deviations(y, lo, hi, line)
        m = int(np.argmax(dev))
        if dev[m] < epsilon:
            done.append(_make_segment(y, lo, hi, fit_kind, store_break_line, line))
            continue
        if m == 0 or m == hi - lo:
            # endpoints cannot split; use the worst interior point instead
            m = 1 + int(np.argmax(dev[1:-1]))
        m += lo
        left = fit(y, lo, m - 1)
        right = fit(y, m + 1, hi)
        if abs(left(m) - y[m]) <= abs(right(m) - y[m]):
            parts = [(lo, m), (m + 1, hi)]
        else:
            parts = [(lo, m - 1), (m, hi)]
        # right pushed first so the left part is handled first
        stack.extend(reversed(parts))

    sid = source_id if source_id is not None else getattr(series, "id", "series")
    return RepresentedSequence(sid, n, float(epsilon), tuple(done), norm)


def deviation_table(series) -> np.ndarray:
    """``D[i, j]`` is the max deviation of ``s[i..j]`` from its interpolation line (``inf`` below the diagonal)."""
    y = _values(series)
    n = len(y)
    table = np.full((n, n), np.inf)
    for i in range(n):
        table[i, i] = 0.0
        for j in range(i + 1, n):
            table[i, j] = _deviations(y, i, j, _interp(y, i, j)).max()
    return table


def segment_dp(
    series,
    cfg: DPConfig = DPConfig(),
    store_break_line: bool = False,
    source_id: str | None = None,
    norm: NormalizationParams | None = None,
) -> RepresentedSequence:
    """Globally cheapest segmentation under ``a * k + b * sum(max_dev)``.

    Deviation is measured against each candidate segment's interpolation
    line.  Equal costs prefer fewer segments, then the lexicographically
    earliest breakpoints.  Runs in ``O(n^3)``.

    For a fixed segment count the cost is monotone in the deviation sum, so
    the table tracks the minimal left-to-right sum per (count, prefix end);
    this makes the optimum exact in floating point, not just up to rounding.
    """
    y = _values(series)
    n = len(y)
    if n < 1:
        raise ValueError("cannot segment an empty series")
    dev = deviation_table(y)

    # best[k, j]: least deviation sum covering s[0..j] with k segments
    best = np.full((n + 1, n), np.inf)
    parent = np.full((n + 1, n), -1, dtype=int)
    best[1, :] = dev[0, :]
    parent[1, :] = 0

    def path(k, j):
        starts = []
        while k > 1:
            i = parent[k, j]
            starts.append(int(i))
            k, j = k - 1, i - 1
        return starts[::-1]

    for k in range(2, n + 1):
        for j in range(k - 1, n):
            # last segment starts at i in [k-1, j]
            cand = best[k - 1, k - 2 : j] + dev[k - 1 : j + 1, j]
            low = cand.min()
            ties = np.flatnonzero(cand == low) + (k - 1)
            if len(ties) == 1:
                i = int(ties[0])
            else:
                i = min(ties, key=lambda s: path(k - 1, s - 1) + [s])
            best[k, j] = low
            parent[k, j] = i

    a, b = cfg.a, cfg.b
    best_k, best_cost = 1, math.inf
    for k in range(1, n + 1):
        total = a * k + b * best[k, n - 1]
        if total < best_cost:
            best_k, best_cost = k, total

    bounds = [0] + path(best_k, n - 1) + [n]
    segments = tuple(
        _make_segment(y, s, e - 1, FitKind.INTERPOLATION, store_break_line)
        for s, e in zip(bounds, bounds[1:])
    )
    worst = max(seg.max_dev for seg in segments)
    # tightest tolerance the result satisfies strictly
    epsilon = math.nextafter(worst, math.inf) if worst > 0 else math.ulp(0.0)
    sid = source_id if source_id is not None else getattr(series, "id", "series")
    return RepresentedSequence(sid, n, epsilon, segments, norm)


def cost(rep: RepresentedSequence, cfg: DPConfig) -> float:
    return cfg.a * len(rep.segments) + cfg.b * sum(seg.max_dev for seg in rep.segments)


def reconstruct(rep: RepresentedSequence) -> TimeSeries:
    """Evaluate each segment's stored line over the indices it covers."""
    out = np.empty(rep.length)
    for seg in rep.segments:
        t = np.arange(seg.start, seg.end + 1, dtype=float)
        out[seg.start : seg.end + 1] = seg.rep_line.slope * t + seg.rep_line.intercept
    return TimeSeries(rep.source_id, tuple(out))


def compression_ratio(rep: RepresentedSequence, params_per_segment: int = 4) -> float:
    if params_per_segment < 1:
        raise ValueError("params_per_segment must be >= 1")
    return rep.length / (params_per_segment * len(rep.segments))


# -- text format ---------------------------------------------------------

def _g(x: float) -> str:
    return f"{x:.17g}"


def format_representation(rep: RepresentedSequence) -> str:
    phi = "-" if rep.phi is None else _g(rep.phi)
    lines = [f"REP {rep.source_id} {rep.length} {_g(rep.epsilon)} {rep.fit_kind.name} {phi}"]
    if rep.norm is not None:
        lines.append(f"NORM {_g(rep.norm.mean)} {_g(rep.norm.std)}")
    for seg in rep.segments:
        lines.append(
            " ".join(
                ["SEG", str(seg.start), str(seg.end)]
                + [_g(v) for v in (seg.rep_line.slope, seg.rep_line.intercept,
                                   seg.break_line.slope, seg.break_line.intercept, seg.max_dev)]
            )
        )
    return "\n".join(lines) + "\n"


def parse_representation(text: str, path=None) -> RepresentedSequence:
    header = None
    norm = None
    segments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        try:
            tag = parts[0]
            if tag == "REP" and header is None and len(parts) == 6:
                header = parts
            elif tag == "NORM" and header is not None and not segments and len(parts) == 3:
                norm = NormalizationParams(float(parts[1]), float(parts[2]))
            elif tag == "SEG" and header is not None and len(parts) == 8:
                start, end = int(parts[1]), int(parts[2])
                rs, ri, bs, bi, md = map(float, parts[3:])
                segments.append(
                    Segment(start, end, LinearFunction(bs, bi), LinearFunction(rs, ri),
                            md, FitKind[header[4]])
                )
            else:
                raise ValueError(f"unexpected line {raw!r}")
        except (ValueError, KeyError) as exc:
            raise ParseError(str(exc), path, lineno) from None
    if header is None:
        raise ParseError("missing REP header", path)
    phi = None if header[5] == "-" else float(header[5])
    try:
        return RepresentedSequence(header[1], int(header[2]), float(header[3]),
                                   tuple(segments), norm, phi)
    except ValueError as exc:
        raise ParseError(str(exc), path) from None


def write_representation(rep: RepresentedSequence, path) -> None:
    Path(path).write_text(format_representation(rep), encoding="utf-8")


def read_representation(path) -> RepresentedSequence:
    path = Path(path)
    return parse_representation(path.read_text(encoding="utf-8"), path)
