import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from seqbreak import (  # noqa: E402
    FitKind, LinearFunction, RepresentedSequence, Segment, TimeSeries, fit_regression,
)

# Printed peak rows for the top trace: rising line, RStart, REnd, descending line, DStart, DEnd.
PEAK_TABLE_ROWS = [
    ((21.333, -2731.0), (126, -43.0), (132, 85.0), (-14.8, 2045.4), (133, 77.0), (143, -71.0)),
    ((22.0, -5839.0), (263, -53.0), (268, 57.0), (-15.0, 4114.0), (269, 79.0), (279, -71.0)),
    ((26.0, -10373.0), (397, -51.0), (401, 53.0), (-14.8, 6028.6), (402, 79.0), (412, -69.0)),
]
PEAK_TABLE_LENGTH = 420


def _line_through(p, q):
    (i, yi), (j, yj) = p, q
    slope = (yj - yi) / (j - i)
    return LinearFunction(slope, yi - slope * i)


def peak_table_fixture():
    """Series and representation rebuilt from the printed peak table.

    Samples at every printed boundary equal the printed amplitudes; samples
    in between follow straight lines.  The six peak segments store the
    printed lines; the gaps between them are flat-ish filler segments.
    """
    knots = [(0, -50.0)]
    for _, rs, re_, _, ds, de in PEAK_TABLE_ROWS:
        knots += [rs, re_, ds, de]
    knots.append((PEAK_TABLE_LENGTH - 1, -69.0))
    xs, ys = zip(*knots)
    y = np.interp(np.arange(PEAK_TABLE_LENGTH), xs, ys)
    series = TimeSeries("ecg_top", tuple(y))

    def seg(start, end, rep_line):
        brk = _line_through((start, y[start]), (end, y[end]))
        dev = max(abs(brk(t) - y[t]) for t in range(start, end + 1))
        return Segment(start, end, brk, rep_line, dev, FitKind.INTERPOLATION)

    segments = []
    cursor = 0
    for rise, rs, re_, desc, ds, de in PEAK_TABLE_ROWS:
        if rs[0] > cursor:
            segments.append(seg(cursor, rs[0] - 1, fit_regression(series, cursor, rs[0] - 1)))
        segments.append(seg(rs[0], re_[0], LinearFunction(*rise)))
        segments.append(seg(ds[0], de[0], LinearFunction(*desc)))
        cursor = de[0] + 1
    segments.append(seg(cursor, PEAK_TABLE_LENGTH - 1, fit_regression(series, cursor, PEAK_TABLE_LENGTH - 1)))
    rep = RepresentedSequence("ecg_top", PEAK_TABLE_LENGTH, 60.0, tuple(segments))
    return series, rep


@pytest.fixture
def peak_table():
    return peak_table_fixture()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def home(tmp_path, monkeypatch):
    root = tmp_path / "catalog"
    monkeypatch.setenv("SEQBREAK_HOME", str(root))
    return root


def pytest_terminal_summary(terminalreporter):
    results = sys.modules.get("test_acceptance")
    if results is None or not results.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in results.RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
