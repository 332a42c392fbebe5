"""Plot data and figures: raw samples overlaid with each segment's stored line."""

from __future__ import annotations

from pathlib import Path

from .segmenter import RepresentedSequence
from .slopelang import quantize

# one colour per slope class
SYMBOL_COLORS = {"P": "#d62728", "N": "#1f77b4", "Z": "#7f7f7f"}


def plot_data(series, rep: RepresentedSequence) -> str:
    """Tab-delimited text: a raw block, then a segment block."""
    lines = ["# raw", "index\tvalue"]
    lines += [f"{t}\t{v:.17g}" for t, v in enumerate(series.samples)]
    lines += ["", "# segments", "segment_id\tstart\tend\tslope\tintercept"]
    for k, seg in enumerate(rep.segments):
        line = seg.rep_line
        lines.append(f"{k}\t{seg.start}\t{seg.end}\t{line.slope:.17g}\t{line.intercept:.17g}")
    return "\n".join(lines) + "\n"


def render_figure(series, rep: RepresentedSequence, path, phi: float | None = None,
                  title: str | None = None, width: float = 8.0, height: float = 3.0):
    """Write a PNG of the raw points and per-segment lines.

    With ``phi`` the lines are coloured by slope class.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(width, height))
    ax.plot(range(len(series)), series.samples, ".", color="0.6", markersize=2, label="samples")
    for seg in rep.segments:
        xs = [seg.start, seg.end]
        color = "k" if phi is None else SYMBOL_COLORS[quantize(seg.rep_line.slope, phi)]
        ax.plot(xs, [seg.rep_line(x) for x in xs], "-", color=color, linewidth=1.5)
        ax.axvline(seg.start, color="0.85", linewidth=0.5, zorder=0)
    ax.set_xlabel("index")
    ax.set_ylabel("amplitude")
    ax.set_title(title or f"{rep.source_id}: {len(rep.segments)} segments, eps={rep.epsilon:g}")
    fig.tight_layout()
    fig.savefig(Path(path), dpi=100, metadata={"Software": None})
    plt.close(fig)
