"""Figure rendering for report data series.

Figures are a convenience layer over ExperimentReport.data: every run
subcommand can drop a PNG next to its JSON/CSV artifact.  The Agg
backend is forced so rendering works headless; the delimited artifacts,
not the figures, are the reproducible record.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.frameon": False,
}


def _new_axes(title):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
    ax.set_title(title)
    return fig, ax


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def cdf_comparison_figure(path, series, title, labels=("empirical", "limit")):
    """Step CDF against a smooth target; series rows are (x, cdf, target)."""
    xs = [row[0] for row in series]
    emp = [row[1] for row in series]
    target = [row[2] for row in series]
    fig, ax = _new_axes(title)
    ax.step(xs, emp, where="post", label=labels[0])
    ax.plot(xs, target, label=labels[1], linewidth=1.0)
    ax.set_xlabel("rescaled value")
    ax.set_ylabel("CDF")
    ax.legend()
    return _finish(fig, path)


def ecdf_pair_figure(path, series, title, labels=("observed", "reference")):
    """Two sorted samples on a shared CDF axis; rows are (x1, x2, level)."""
    fig, ax = _new_axes(title)
    ax.step([row[0] for row in series], [row[2] for row in series],
            where="post", label=labels[0])
    ax.step([row[1] for row in series], [row[2] for row in series],
            where="post", label=labels[1], linestyle="--")
    ax.set_xlabel("rescaled value")
    ax.set_ylabel("CDF")
    ax.legend()
    return _finish(fig, path)


def pmf_comparison_figure(path, series, title, labels=("empirical", "target")):
    """Side-by-side bars; series rows are (k, empirical, target)."""
    ks = [row[0] for row in series]
    emp = [row[1] for row in series]
    target = [row[2] for row in series]
    fig, ax = _new_axes(title)
    width = 0.4
    ax.bar([k - width / 2 for k in ks], emp, width=width, label=labels[0])
    ax.bar([k + width / 2 for k in ks], target, width=width, label=labels[1])
    ax.set_xlabel("count")
    ax.set_ylabel("probability")
    ax.legend()
    return _finish(fig, path)


def noise_sweep_figure(path, series, title):
    """Correlation against noise level; series rows are (rho, micro, block)."""
    fig, ax = _new_axes(title)
    ax.plot([r[0] for r in series], [r[1] for r in series], label="micro")
    ax.plot([r[0] for r in series], [r[2] for r in series], label="block",
            linestyle="--")
    ax.set_xlabel("noise survival rho")
    ax.set_ylabel("normalized correlation")
    ax.legend()
    return _finish(fig, path)


def render_report_figure(report, path):
    """Pick a figure for whatever series the report carries; None if none."""
    if "pmf" in report.data:
        return pmf_comparison_figure(path, report.data["pmf"], report.name)
    if "ecdf_pair" in report.data:
        return ecdf_pair_figure(path, report.data["ecdf_pair"], report.name)
    if "noise_sweep" in report.data:
        return noise_sweep_figure(path, report.data["noise_sweep"],
                                  report.name)
    for key in sorted(report.data):
        if key.startswith("cdf"):
            return cdf_comparison_figure(path, report.data[key],
                                         "%s %s" % (report.name, key))
    return None
