"""Objective-versus-passes plots.

Rendered headless to SVG with a fixed hash salt and no date metadata, so the
same aggregate always yields the same file.
"""

import os
import tempfile
from typing import Dict, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from src.config import SolverKind  # noqa: E402

SOLVER_COLORS: Dict[str, str] = {
    SolverKind.ASVRG_ADMM.value: "#d62728",
    SolverKind.SVRG_ADMM.value: "#1f77b4",
    SolverKind.SADMM.value: "#2ca02c",
    SolverKind.ADMM.value: "#7f7f7f",
}
FALLBACK_COLORS = ["#9467bd", "#8c564b", "#e377c2", "#bcbd22", "#17becf", "#ff7f0e"]


def plot_objective(
    aggregate: pd.DataFrame,
    path: str,
    title: str,
    kinds: Optional[Dict[str, str]] = None,
) -> None:
    """
    Plots the mean objective of every solver against effective passes.

    Args:
        aggregate (pd.DataFrame): Output of `aggregate_traces`.
        path (str): Target .svg file, written atomically.
        title (str): Plot title, usually the dataset name.
        kinds (dict, optional): Solver label -> solver kind, used to pick the
            fixed color of the kind; unknown labels take fallback colors in order.
    """
    kinds = kinds or {}
    with plt.rc_context({"svg.hashsalt": "asvrg-admm", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        fallback = iter(FALLBACK_COLORS)
        for solver, group in aggregate.groupby("solver", sort=False):
            color = SOLVER_COLORS.get(kinds.get(solver, solver))
            if color is None:
                color = next(fallback, "black")
            positive = group[group["objective"] > 0]
            ax.plot(positive["passes"], positive["objective"], label=solver, color=color, linewidth=1.5)
        ax.set_yscale("log")
        ax.set_xlabel("effective passes")
        ax.set_ylabel("objective")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()

        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".svg")
        os.close(fd)
        try:
            fig.savefig(tmp, format="svg", metadata={"Date": None})
            os.replace(tmp, path)
        finally:
            plt.close(fig)
            if os.path.exists(tmp):
                os.remove(tmp)
