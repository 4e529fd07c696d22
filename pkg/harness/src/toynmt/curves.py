"""Learning-curve serialization and plotting.

TSVs keep the raw averaged and per-repeat values; only the plot applies a
running-maximum smoothing for readability.
"""

from __future__ import annotations

from pathlib import Path

from .train import LearningCurve, TrainResult


def write_curve_tsv(result: TrainResult, path: str | Path) -> None:
    curve = result.curve
    header = ["step", "accuracy"] + [f"repeat{r}" for r in range(len(result.per_repeat))]
    rows = ["\t".join(header)]
    for i, step in enumerate(curve.steps):
        cells = [str(step), f"{curve.accuracies[i]:.6f}"]
        cells += [f"{c.accuracies[i]:.6f}" for c in result.per_repeat]
        rows.append("\t".join(cells))
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def _monotone(values: list[float]) -> list[float]:
    out, best = [], 0.0
    for v in values:
        best = max(best, v)
        out.append(best)
    return out


def plot_curves(curves: dict[str, LearningCurve], path: str | Path, title: str = "") -> None:
    """One combined figure, a line per (model, variant) label."""
    if not curves:
        raise ValueError("no curves to plot")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, curve in sorted(curves.items()):
        ax.plot(curve.steps, _monotone(curve.accuracies), marker="o", label=label)
    ax.set_xlabel("training steps")
    ax.set_ylabel("validation sentence accuracy")
    ax.set_ylim(0.0, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
