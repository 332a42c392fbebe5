"""Command-line interface.

Exit codes: 0 on success (or when a query found something), 1 when a query
found nothing, 2 on usage or parse errors.  Tabular output is tab-delimited.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .catalog import Catalog
from .errors import SeqbreakError
from .generators import KINDS, GeneratorSpec, generate
from .peakindex import DEFAULT_BOUNDS, build_index, find_peaks, intervals, query_interval
from .plotting import plot_data, render_figure
from .segmenter import FitKind, compression_ratio, segment_recursive
from .seqcore import normalize, write_series
from .slopelang import SlopeConfig, compile_pattern, find_occurrences, signature

log = logging.getLogger("seqbreak")

EXIT_FOUND, EXIT_EMPTY, EXIT_ERROR = 0, 1, 2


def _g(x: float) -> str:
    return f"{x:.6g}"


def _pt(point) -> str:
    return f"({point[0]},{_g(point[1])})"


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _bounds(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}")
    if not 0 < lo <= hi:
        raise argparse.ArgumentTypeError(f"need 0 < MIN <= MAX, got {text!r}")
    return lo, hi


def _ids(cat: Catalog, args) -> list[str]:
    if getattr(args, "all", False) or not args.ids:
        return cat.ids()
    return args.ids


def cmd_ingest(cat, args, out):
    if args.id and len(args.paths) > 1:
        raise SeqbreakError("--id only applies when ingesting a single file")
    for path in args.paths:
        entry = cat.ingest(path, args.id)
        n = len(cat.load_series(entry.id))
        print(f"{entry.id}\t{n}", file=out)
    return EXIT_FOUND


def cmd_generate(cat, args, out):
    spec = GeneratorSpec(
        kind=args.kind, length=args.length, seed=args.seed, amplitude=args.amplitude,
        baseline=args.baseline, noise=args.noise, peaks=args.peaks, positions=args.positions,
        first=args.first, spacing=args.spacing, slope=args.slope,
    )
    series = generate(spec, args.id or args.kind)
    if args.out:
        write_series(series, args.out)
        print(f"{args.out}\t{len(series)}", file=out)
    else:
        cat.add_series(series)
        print(f"{series.id}\t{len(series)}", file=out)
    return EXIT_FOUND


def cmd_segment(cat, args, out):
    print("id\tsegments\tmax_dev\tratio_4\tratio_6", file=out)
    cfg = SlopeConfig(args.phi)
    for id_ in _ids(cat, args):
        series = cat.load_series(id_)
        norm = None
        if args.normalize:
            series, norm = normalize(series)
        rep = segment_recursive(series, args.epsilon, FitKind(args.fit),
                                store_break_line=args.store == "break", norm=norm)
        rep = replace(rep, phi=args.phi)
        sig = signature(rep, cfg).symbols
        cat.save_representation(rep, sig)
        print(f"{id_}\t{len(rep.segments)}\t{_g(rep.max_dev)}\t"
              f"{_g(compression_ratio(rep, 4))}\t{_g(compression_ratio(rep, 6))}", file=out)
    return EXIT_FOUND


def cmd_signature(cat, args, out):
    cfg = SlopeConfig(args.phi)
    for id_ in _ids(cat, args):
        print(f"{id_}\t{signature(cat.load_representation(id_), cfg).symbols}", file=out)
    return EXIT_FOUND


def cmd_peaks(cat, args, out):
    cfg = SlopeConfig(args.phi)
    print("id\tpeak\trising_slope\trising_intercept\tr_start\tr_end\t"
          "descending_slope\tdescending_intercept\td_start\td_end\tpeak_time\tpeak_amplitude",
          file=out)
    found = False
    for id_ in _ids(cat, args):
        rep = cat.load_representation(id_)
        for k, p in enumerate(find_peaks(rep, cat.series_for(rep), cfg), start=1):
            found = True
            print("\t".join([
                id_, str(k), _g(p.rising.rep_line.slope), _g(p.rising.rep_line.intercept),
                _pt(p.r_start), _pt(p.r_end),
                _g(p.descending.rep_line.slope), _g(p.descending.rep_line.intercept),
                _pt(p.d_start), _pt(p.d_end), str(p.peak_time), _g(p.peak_amplitude),
            ]), file=out)
    return EXIT_FOUND if found else EXIT_EMPTY


def cmd_index(cat, args, out):
    cfg = SlopeConfig(args.phi)
    lists = {}
    for id_ in cat.ids():
        if not cat.has_representation(id_):
            log.warning("skipping %s: not segmented", id_)
            continue
        rep = cat.load_representation(id_)
        lists[id_] = intervals(find_peaks(rep, cat.series_for(rep), cfg))
    index = build_index(sorted(lists.items()), args.bounds)
    cat.save_index(index, lists)
    for id_, ivals in sorted(lists.items()):
        print(f"{id_}\t{','.join(map(str, ivals))}", file=out)
    return EXIT_FOUND


def cmd_query_pattern(cat, args, out):
    compiled = compile_pattern(args.pattern)
    cfg = SlopeConfig(args.phi)
    hits = 0
    for id_ in cat.ids():
        if not cat.has_representation(id_):
            continue
        sig = signature(cat.load_representation(id_), cfg)
        if args.spans:
            for occ in find_occurrences(compiled, sig):
                hits += 1
                print(f"{id_}\t{occ.start_symbol}\t{occ.end_symbol}\t"
                      f"{occ.start_index}\t{occ.end_index}", file=out)
        elif compiled.full_match(sig.symbols):
            hits += 1
            print(id_, file=out)
    return EXIT_FOUND if hits else EXIT_EMPTY


def cmd_query_interval(cat, args, out):
    ids = query_interval(cat.load_index(), args.n, args.delta)
    for id_ in ids:
        print(id_, file=out)
    return EXIT_FOUND if ids else EXIT_EMPTY


def cmd_plot(cat, args, out):
    out_dir = Path(args.out_dir) if args.out_dir else cat.root / "plots"
    out_dir.mkdir(parents=True, exist_ok=True)
    for id_ in _ids(cat, args):
        rep = cat.load_representation(id_)
        series = cat.series_for(rep)
        data_path = out_dir / f"{id_}.plot.tsv"
        data_path.write_text(plot_data(series, rep), encoding="utf-8")
        print(data_path, file=out)
        if not args.no_figure:
            fig_path = out_dir / f"{id_}.png"
            render_figure(series, rep, fig_path, phi=args.phi)
            print(fig_path, file=out)
    return EXIT_FOUND


def cmd_stats(cat, args, out):
    problems = cat.verify()
    for p in problems:
        print(f"# problem: {p}", file=out)
    print("id\tn\tsegments\tepsilon\tratio\tsignature\tintervals", file=out)
    for id_ in cat.ids():
        entry = cat.entry(id_)
        n = len(cat.load_series(id_))
        if entry.rep_sha:
            rep = cat.load_representation(id_)
            segs, eps = str(len(rep.segments)), _g(rep.epsilon)
            ratio = _g(compression_ratio(rep, args.params_per_segment))
        else:
            segs = eps = ratio = "-"
        ivals = "-" if entry.intervals is None else ",".join(map(str, entry.intervals))
        print(f"{id_}\t{n}\t{segs}\t{eps}\t{ratio}\t{entry.signature or '-'}\t{ivals}", file=out)
    return EXIT_ERROR if problems else EXIT_FOUND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqbreak",
        description="Segment numeric sequences into linear pieces and query them by shape.",
    )
    parser.add_argument("--home", help="catalog root (default: $SEQBREAK_HOME or ~/.seqbreak)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_ids(p):
        p.add_argument("ids", nargs="*", help="catalog ids (default: all)")
        p.add_argument("--all", action="store_true", help="every id in the catalog")

    def with_phi(p):
        p.add_argument("--phi", type=float, default=0.3, help="slope threshold (default 0.3)")

    p = sub.add_parser("ingest", help="add series files to the catalog")
    p.add_argument("paths", nargs="+")
    p.add_argument("--id", help="id for a single file (default: file stem)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("generate", help="synthesize a series")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--id")
    p.add_argument("--out", help="write a series file instead of adding to the catalog")
    p.add_argument("--length", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--amplitude", type=float)
    p.add_argument("--baseline", type=float)
    p.add_argument("--noise", type=float)
    p.add_argument("--slope", type=float)
    p.add_argument("--peaks", type=int, help="goalpost: number of peaks")
    p.add_argument("--positions", type=_int_list, help="goalpost: apex indices, e.g. 60,150")
    p.add_argument("--first", type=int, help="ecg_like: first spike index")
    p.add_argument("--spacing", type=_int_list, help="ecg_like: gaps between spikes, e.g. 137,133")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("segment", help="break series into linear segments")
    with_ids(p)
    with_phi(p)
    p.add_argument("--epsilon", type=float, required=True,
                   help="error tolerance, in the units of the series as segmented")
    p.add_argument("--fit", choices=[k.value for k in FitKind], default="interp")
    p.add_argument("--normalize", action="store_true", help="segment the mean-0, variance-1 series")
    p.add_argument("--store", choices=["regression", "break"], default="regression",
                   help="line kept as each segment's representation")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("signature", help="print slope signatures")
    with_ids(p)
    with_phi(p)
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("peaks", help="print peak records")
    with_ids(p)
    with_phi(p)
    p.set_defaults(func=cmd_peaks)

    p = sub.add_parser("index", help="build the peak-interval index")
    with_phi(p)
    p.add_argument("--bounds", type=_bounds, default=DEFAULT_BOUNDS, metavar="MIN:MAX")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query-pattern", help="ids whose whole signature matches a pattern")
    p.add_argument("pattern")
    with_phi(p)
    p.add_argument("--spans", action="store_true", help="list substring occurrences instead")
    p.set_defaults(func=cmd_query_pattern)

    p = sub.add_parser("query-interval", help="ids with a peak interval of n +/- delta")
    p.add_argument("n", type=int)
    p.add_argument("--delta", type=int, default=0)
    p.set_defaults(func=cmd_query_interval)

    p = sub.add_parser("plot", help="write plot data and a PNG figure")
    with_ids(p)
    with_phi(p)
    p.add_argument("--out-dir")
    p.add_argument("--no-figure", action="store_true", help="write only the data file")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("stats", help="catalog summary and consistency check")
    p.add_argument("--params-per-segment", type=int, default=4)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    cat = Catalog(args.home)
    try:
        return args.func(cat, args, out)
    except (SeqbreakError, ValueError, OSError) as exc:
        print(f"seqbreak: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
