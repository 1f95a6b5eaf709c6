import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def error_distribution_figure(report, path, title=None):
    """Grouped bar chart of error counts per sentence length, one bar per model."""
    lengths = [row.m for row in report.rows]
    labels = report.labels
    x = np.arange(len(lengths))
    width = 0.8 / max(1, len(labels))

    fig, (ax, ax_rate) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for i, lab in enumerate(labels):
        errors = np.array([row.errors.get(lab, 0) for row in report.rows])
        totals = np.array([row.total for row in report.rows])
        offset = (i - (len(labels) - 1) / 2) * width
        ax.bar(x + offset, errors, width, label=lab)
        ax_rate.bar(x + offset, errors / np.maximum(totals, 1), width, label=lab)
    ax.set_ylabel("error sentences")
    ax_rate.set_ylabel("error rate")
    ax_rate.set_xlabel("sentence length")
    ax_rate.set_xticks(x)
    ax_rate.set_xticklabels([str(m) for m in lengths])
    ax.legend(ncol=min(len(labels), 5), fontsize="small", frameon=False)
    ax.set_title(title or f"bag generation errors ({report.mode} test)")
    fig.tight_layout()
    # no timestamps, so repeated runs write identical files
    fig.savefig(path, metadata={"Date": None} if str(path).endswith((".svg", ".pdf")) else None)
    plt.close(fig)
    return path
