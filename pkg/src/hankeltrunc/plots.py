"""SVG plots of report series (needs matplotlib)."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

from .harness import Report


def plot_report(report: Report, stem) -> list[Path]:
    """One SVG per (scenario, metric) whose rows carry the scenario's x parameter.

    The x parameter is read from ``report.metadata["plot"]``; output files are
    ``<stem>_<scenario>_<metric>.svg``.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "hankeltrunc"
    axes_for = report.metadata.get("plot", {})
    series: dict[tuple[str, str], dict[str, list]] = defaultdict(lambda: defaultdict(list))
    for r in report.rows:
        xkey = axes_for.get(r.scenario)
        if xkey is None or xkey not in r.params or not isinstance(r.value, (int, float)):
            continue
        label = ",".join(f"{k}={v}" for k, v in r.params.items() if k not in (xkey, "q", "p", "alpha", "symbol"))
        series[(r.scenario, r.metric)][label].append((r.params[xkey], r.value))

    stem = Path(stem)
    written = []
    for (scenario, metric), lines in sorted(series.items()):
        fig, ax = plt.subplots(figsize=(6, 4))
        logy = metric.endswith("error")
        for label, pts in sorted(lines.items()):
            pts.sort()
            xs, ys = zip(*pts)
            if logy:
                ys = [max(y, 1e-17) for y in ys]
            ax.plot(xs, ys, marker="o", lw=1, label=label or None)
        ax.set_xscale("log", base=2)
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(axes_for[scenario])
        ax.set_ylabel(metric)
        if 1 < len(lines) <= 8:
            ax.legend(fontsize=7)
        out = stem.parent / f"{stem.name}_{scenario}_{metric}.svg"
        fig.savefig(out, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(out)
    return written
