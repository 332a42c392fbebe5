"""Piecewise-linear representation of numeric sequences with shape and interval queries."""

from .errors import (
    BadRange, BadSpec, BadWindow, DegenerateVariance, DuplicateId, IntervalOutOfBounds,
    ParseError, PatternSyntaxError, SeqbreakError, TooShort, UnknownId,
)
from .seqcore import (
    NormalizationParams, TimeSeries, apply_normalization, denormalize, normalize,
    read_series, smooth, write_series,
)
from .segmenter import (
    DPConfig, FitKind, LinearFunction, RepresentedSequence, Segment, compression_ratio,
    cost, fit_interpolation, fit_regression, max_deviation, read_representation,
    reconstruct, segment_dp, segment_recursive, write_representation,
)
from .slopelang import (
    SlopeConfig, SlopeSignature, compile_pattern, find_occurrences, full_match,
    parse_pattern, signature, unparse,
)
from .peakindex import (
    IntervalIndex, PeakRecord, build_index, find_peaks, intervals, query_interval,
    read_index, write_index,
)
from .generators import GeneratorSpec, generate

__version__ = "0.1.0"
