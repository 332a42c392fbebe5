import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_argmax, exhaustive_min_cost, interp_max_dev, random_piecewise
from seqbreak import (
    BadRange, DPConfig, FitKind, GeneratorSpec, LinearFunction, RepresentedSequence, Segment,
    TimeSeries, compression_ratio, cost, fit_interpolation, fit_regression, generate,
    max_deviation, reconstruct, segment_dp, segment_recursive,
)
from seqbreak.segmenter import check_partition, format_representation, parse_representation

values = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=80)


def assert_valid(rep, y, eps=None):
    check_partition(rep.segments, len(y))
    for seg in rep.segments:
        _, dev = max_deviation(y, seg.start, seg.end, seg.break_line)
        assert dev == seg.max_dev
        if eps is not None and seg.fit_kind is FitKind.INTERPOLATION and len(seg) >= 3:
            assert seg.max_dev < eps


# -- line fits -----------------------------------------------------------

def test_interpolation_examples():
    assert fit_interpolation([0, 1, 2, 3], 0, 3) == LinearFunction(1.0, 0.0)
    assert fit_interpolation([5, 5, 9], 2, 2) == LinearFunction(0.0, 9.0)
    assert fit_interpolation([0, 2, 0], 0, 2) == LinearFunction(0.0, 0.0)


def test_interpolation_matches_table_rising_line():
    # printed rising function of the first peak: 21.333x - 2731
    y = np.zeros(140)
    y[126], y[132] = -43, 85
    line = fit_interpolation(y, 126, 132)
    assert line.slope == pytest.approx(21.333, abs=1e-3)
    assert line.intercept == pytest.approx(-2731, abs=1e-9)


def test_regression_examples():
    line = fit_regression([0, 1, 2, 1], 0, 2)
    assert line.slope == pytest.approx(1.0) and line.intercept == pytest.approx(0.0, abs=1e-12)
    line = fit_regression([0, 1, 0], 0, 2)
    assert line.slope == pytest.approx(0.0, abs=1e-15)
    assert line.intercept == pytest.approx(1 / 3)
    assert fit_regression([3, 7], 1, 1) == LinearFunction(0.0, 7.0)


@given(values, st.data())
def test_regression_matches_polyfit(y, data):
    i = data.draw(st.integers(0, len(y) - 1))
    j = data.draw(st.integers(i, len(y) - 1))
    line = fit_regression(y, i, j)
    if j - i >= 1:
        slope, intercept = np.polyfit(np.arange(i, j + 1), y[i : j + 1], 1)
        assert line.slope == pytest.approx(slope, abs=1e-6)
        assert line(i) == pytest.approx(slope * i + intercept, abs=1e-6)


@given(values, st.data())
def test_interpolation_passes_through_endpoints(y, data):
    i = data.draw(st.integers(0, len(y) - 1))
    j = data.draw(st.integers(i, len(y) - 1))
    line = fit_interpolation(y, i, j)
    assert abs(line(i) - y[i]) < 1e-9 and abs(line(j) - y[j]) < 1e-9


@pytest.mark.parametrize("fn", [fit_interpolation, fit_regression])
def test_fits_reject_bad_ranges(fn):
    for i, j in [(2, 1), (-1, 1), (0, 3)]:
        with pytest.raises(BadRange):
            fn([1, 2, 3], i, j)


# -- max deviation -------------------------------------------------------

def test_max_deviation_examples():
    assert max_deviation([0, 2, 0], 0, 2, LinearFunction(0, 0)) == (1, 2.0)
    y = [1, 3, 5, 7]
    assert max_deviation(y, 0, 3, fit_interpolation(y, 0, 3)) == (0, 0.0)
    with pytest.raises(BadRange):
        max_deviation(y, 3, 2, LinearFunction(0, 0))


def test_max_deviation_matches_scan(rng):
    for _ in range(200):
        y = rng.normal(size=int(rng.integers(1, 30)))
        i = int(rng.integers(len(y)))
        j = int(rng.integers(i, len(y)))
        line = LinearFunction(float(rng.normal()), float(rng.normal()))
        t, d = max_deviation(y, i, j, line)
        bt, bd = brute_argmax(y, i, j, line.slope, line.intercept)
        assert (t, d) == (bt, pytest.approx(bd, abs=1e-12))


def test_max_deviation_ties_take_smallest_index():
    assert max_deviation([1, -1, 1, -1], 0, 3, LinearFunction(0, 0)) == (0, 1.0)


# -- recursive segmentation ---------------------------------------------

def test_linear_series_is_one_segment():
    y = [2 * t - 3 for t in range(50)]
    for kind in FitKind:
        rep = segment_recursive(y, 0.01, kind)
        assert len(rep.segments) == 1


def test_hand_traced_recursion():
    # root line y=0, apex 2 deviates by 2; both side lines predict 2 there, tie goes left
    rep = segment_recursive([0, 1, 2, 1, 0], 0.5, FitKind.INTERPOLATION)
    assert [(s.start, s.end) for s in rep.segments] == [(0, 2), (3, 4)]
    assert rep.breakpoints == [3]


def test_point_goes_to_closer_side():
    # apex at 2 sits on the right-hand line only
    y = [0, 0, 4, 3, 2, 1, 0]
    rep = segment_recursive(y, 0.5)
    assert (2, 6) in [(s.start, s.end) for s in rep.segments]


def test_goalpost_breaks_at_extrema():
    spec = GeneratorSpec("goalpost", seed=3)
    series = generate(spec)
    rep = segment_recursive(series, 2.0)
    for apex in spec.resolved().apexes():
        ends = {s.end for s in rep.segments} | {s.start for s in rep.segments}
        assert apex in ends


def test_rep_line_defaults_to_regression():
    y = [0, 1, 3, 2, 5, 4, 6, 9]
    rep = segment_recursive(y, 100.0)
    seg = rep.segments[0]
    assert seg.break_line == fit_interpolation(y, 0, 7)
    assert seg.rep_line == fit_regression(y, 0, 7)
    stored = segment_recursive(y, 100.0, store_break_line=True).segments[0]
    assert stored.rep_line == stored.break_line


def test_regression_split_avoids_endpoints():
    # regression line deviates most at the last point; the split must be interior
    y = [0, 0, 0, 0, 0, 0, 10]
    rep = segment_recursive(y, 0.5, FitKind.REGRESSION)
    check_partition(rep.segments, len(y))
    assert all(seg.max_dev < 0.5 or len(seg) <= 2 for seg in rep.segments)


def test_epsilon_must_be_positive():
    with pytest.raises(ValueError):
        segment_recursive([1, 2, 3], 0)


@settings(max_examples=150, deadline=None)
@given(values, st.floats(0.05, 20))
def test_partition_and_epsilon_contract(y, eps):
    for kind in FitKind:
        rep = segment_recursive(y, eps, kind)
        assert_valid(rep, y, eps if kind is FitKind.INTERPOLATION else None)
        # pieces of length <= 2 are always accepted, so no split goes below that
        assert all(len(s) >= 1 for s in rep.segments)


@settings(max_examples=100, deadline=None)
@given(values, st.floats(0.05, 20))
def test_reconstruction_within_epsilon(y, eps):
    rep = segment_recursive(y, eps, store_break_line=True)
    err = np.max(np.abs(np.array(reconstruct(rep).samples) - np.array(y)))
    assert err < eps


def test_reconstruct_examples():
    y = [1.0, 1.5, 2.0, 2.5]
    rep = segment_recursive(y, 0.1, store_break_line=True)
    assert reconstruct(rep).samples == pytest.approx(y, abs=1e-12)
    rep = segment_recursive([0, 1, 2, 1, 0], 0.5, store_break_line=True)
    assert np.max(np.abs(np.subtract(reconstruct(rep).samples, [0, 1, 2, 1, 0]))) < 0.5


def test_consistency_under_shift_scale_and_reversal(rng):
    for _ in range(30):
        y = random_piecewise(rng, int(rng.integers(30, 150)))
        rep = segment_recursive(y, 1.0)
        n = len(y)
        assert segment_recursive(y + 17.25, 1.0).breakpoints == rep.breakpoints
        assert segment_recursive(3.5 * y, 3.5).breakpoints == rep.breakpoints
        mirrored = sorted(n - b for b in rep.breakpoints)
        assert segment_recursive(y[::-1], 1.0).breakpoints == mirrored


def test_fragmentation_on_generators():
    for kind, eps in [("goalpost", 2.0), ("ecg_like", 60.0)]:
        for seed in range(5):
            rep = segment_recursive(generate(GeneratorSpec(kind, seed=seed)), eps)
            assert rep.length / len(rep.segments) >= 8


# -- dynamic programming -------------------------------------------------

def test_dp_constant_series():
    rep = segment_dp([4.0] * 9, DPConfig(1, 1))
    assert len(rep.segments) == 1
    assert cost(rep, DPConfig(1, 1)) == 1.0


def test_dp_beats_single_segment():
    cfg = DPConfig(1, 10)
    rep = segment_dp([0, 1, 2, 1, 0], cfg)
    assert cost(rep, cfg) < 1 + 10 * 2
    assert cost(rep, cfg) == exhaustive_min_cost([0, 1, 2, 1, 0], 1, 10)


def test_dp_matches_exhaustive(rng):
    for _ in range(60):
        n = int(rng.integers(1, 11))
        y = rng.normal(size=n) * 3
        cfg = DPConfig(float(rng.uniform(0, 3)), float(rng.uniform(0.01, 3)))
        rep = segment_dp(y, cfg)
        check_partition(rep.segments, n)
        assert cost(rep, cfg) == exhaustive_min_cost(y, cfg.a, cfg.b)


def test_dp_tie_breaks_toward_fewer_segments_then_earliest():
    # every segmentation of a line costs a*k, so one segment wins
    assert len(segment_dp([0, 1, 2, 3, 4], DPConfig(1, 1)).segments) == 1
    # with a = 0 all zero-deviation segmentations tie; fewest is still one segment
    assert len(segment_dp([0, 1, 2, 3, 4], DPConfig(0, 1)).segments) == 1
    # a symmetric V: [0..1],[2..4] and [0..2],[3..4] tie; earliest breakpoint wins
    rep = segment_dp([2, 1, 0, 1, 2], DPConfig(1, 1))
    assert rep.breakpoints == [2]


def test_dp_not_worse_than_greedy(rng):
    for _ in range(15):
        y = random_piecewise(rng, int(rng.integers(15, 50)))
        cfg = DPConfig(1.0, float(rng.uniform(0.2, 5)))
        greedy = segment_recursive(y, float(rng.uniform(0.3, 3)))
        assert cost(segment_dp(y, cfg), cfg) <= cost(greedy, cfg)


def test_dp_deviation_table_agrees_with_oracle(rng):
    y = rng.normal(size=12)
    rep = segment_dp(y, DPConfig(0.5, 1))
    for seg in rep.segments:
        assert seg.max_dev == interp_max_dev(y, seg.start, seg.end)


def test_dp_config_validation():
    with pytest.raises(ValueError):
        DPConfig(0, 0)
    with pytest.raises(ValueError):
        DPConfig(-1, 2)


# -- cost and compression ------------------------------------------------

def _rep_with_devs(devs, n_per=4):
    segs = []
    for k, d in enumerate(devs):
        line = LinearFunction(0, 0)
        segs.append(Segment(k * n_per, k * n_per + n_per - 1, line, line, d, FitKind.INTERPOLATION))
    return RepresentedSequence("x", n_per * len(devs), 1.0, tuple(segs))


def test_cost_arithmetic():
    assert cost(_rep_with_devs([0.0]), DPConfig(1, 1)) == 1.0
    assert cost(_rep_with_devs([0.5, 0.5, 0.5]), DPConfig(2, 4)) == 12.0


def test_compression_ratio():
    rep = _rep_with_devs([0.0] * 12, n_per=1)
    rep = RepresentedSequence("x", 512, 1.0, rep.segments[:-1] + (
        Segment(11, 511, LinearFunction(0, 0), LinearFunction(0, 0), 0.0, FitKind.INTERPOLATION),))
    assert compression_ratio(rep, 4) == pytest.approx(10.67, abs=0.005)
    assert compression_ratio(rep, 6) == pytest.approx(7.1, abs=0.05)
    single = segment_recursive(list(range(10)), 1.0)
    assert compression_ratio(single, 5) == 2.0
    with pytest.raises(ValueError):
        compression_ratio(single, 0)


# -- representation type and file format ---------------------------------

def test_partition_is_enforced():
    line = LinearFunction(0, 0)
    a = Segment(0, 2, line, line, 0.0, FitKind.INTERPOLATION)
    b = Segment(4, 5, line, line, 0.0, FitKind.INTERPOLATION)
    with pytest.raises(ValueError):
        RepresentedSequence("x", 6, 1.0, (a, b))
    with pytest.raises(ValueError):
        Segment(3, 2, line, line, 0.0, FitKind.INTERPOLATION)


def test_representation_round_trip(rng):
    for kind in FitKind:
        y = random_piecewise(rng, 120)
        rep = segment_recursive(TimeSeries("abc", tuple(y)), 0.7, kind)
        text = format_representation(rep)
        assert text.splitlines()[0].startswith(f"REP abc 120 0.69999999999999996 {kind.name} -")
        back = parse_representation(text)
        assert back == rep
        assert format_representation(back) == text
