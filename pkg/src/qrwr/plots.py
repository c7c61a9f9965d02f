"""Matplotlib rendering of sweep grids and scenario lines to image files."""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .sweep import ContourResult, Quantity, ScenarioLine, SweepResult


def save_sweep_heatmap(
    result: SweepResult, path: str, contour: ContourResult | None = None
) -> str:
    """Render a sweep grid as a log-colour heatmap, optionally with the
    unity contour overlaid, and save it to ``path``."""
    spec = result.spec
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    values = np.where(result.feasible, result.values, np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_values = np.log10(values)
    mesh = ax.pcolormesh(
        result.x_grid, result.y_grid, log_values.T, shading="nearest", cmap="viridis"
    )
    label = {
        Quantity.RM: "log10 R_M",
        Quantity.SNR_TARGET: "log10 SNR (target)",
        Quantity.SNR_RADAR: "log10 SNR (radar)",
        Quantity.PERR: "log10 P_err",
    }[spec.quantity]
    fig.colorbar(mesh, ax=ax, label=label)
    if contour is not None and contour.points:
        xs = [p[0] for p in contour.points]
        ys = [p[1] for p in contour.points]
        ax.plot(xs, ys, "k-", lw=1.5, label="R_M = 1")
        ax.legend(loc="best")
    if spec.x_axis.scale == "log":
        ax.set_xscale("log")
    if spec.y_axis.scale == "log":
        ax.set_yscale("log")
    ax.set_xlabel(spec.x_axis.name)
    ax.set_ylabel(spec.y_axis.name)
    ax.set_title(f"{spec.quantity.value} sweep ({result.scenario_hash})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_scenario_figure(lines: Sequence[ScenarioLine], path: str) -> str:
    """Render scenario lines (rm and eta_R/eta_T versus range) to ``path``."""
    fig, (ax_rm, ax_ratio) = plt.subplots(1, 2, figsize=(10.0, 4.2))
    colors = {"good": "tab:blue", "bad": "tab:red"}
    for line in lines:
        ranges = [p.range_km for p in line.points]
        if not ranges:
            continue
        color = colors.get(line.weather.value, "tab:gray")
        ax_rm.plot(
            ranges,
            [p.rm for p in line.points],
            "o-",
            color=color,
            label=f"{line.weather.value} weather",
        )
        ax_ratio.plot(
            ranges, [p.ratio for p in line.points], "o-", color=color,
            label=f"{line.weather.value} weather",
        )
    ax_rm.axhline(1.0, color="k", lw=1.0, ls="--", label="R_M = 1")
    for ax, ylabel in ((ax_rm, "R_M"), (ax_ratio, "eta_R / eta_T")):
        ax.set_yscale("log")
        ax.set_xlabel("range (km)")
        ax.set_ylabel(ylabel)
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
