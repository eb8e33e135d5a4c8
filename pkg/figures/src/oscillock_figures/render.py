"""Figure rendering from simulator CSV files.

Each figure kind maps one CSV contract onto one matplotlib layout.  All
numbers plotted come straight from file columns; nothing is recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from oscillock_figures.io import (
    CsvValidationError,
    columns_matching,
    read_table,
    require_columns,
)

STYLE_FILE = Path(__file__).parent / "oscillock.mplstyle"

# fixed PNG metadata so rerenders are byte-identical
_PNG_METADATA = {"Software": "oscillock-figures"}

FIGURE_KINDS = ("density", "phase_space", "phases", "sigma_loglog", "observables")


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: input CSV, kind, labels, output path."""

    csv_path: Path
    kind: str
    output_path: Path
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise CsvValidationError(
                f"unknown figure kind '{self.kind}'; expected one of {FIGURE_KINDS}"
            )


def render(spec: FigureSpec) -> Path:
    """Render the figure described by ``spec`` and return the image path.

    The output is deterministic: fixed style file, fixed DPI, fixed PNG
    metadata, no timestamps.
    """
    table = read_table(spec.csv_path)
    with plt.style.context(str(STYLE_FILE)):
        fig, ax = plt.subplots()
        _RENDERERS[spec.kind](table, spec, ax, fig)
        if spec.title:
            ax.set_title(spec.title)
        if spec.xlabel:
            ax.set_xlabel(spec.xlabel)
        if spec.ylabel:
            ax.set_ylabel(spec.ylabel)
        fig.tight_layout()
        spec.output_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output_path, format="png", metadata=_PNG_METADATA)
        plt.close(fig)
    return spec.output_path


def _render_density(table, spec, ax, fig):
    require_columns(table, ["tau", "x", "density"], spec.csv_path)
    taus = np.unique(table["tau"])
    xs = np.unique(table["x"])
    if len(taus) * len(xs) != len(table["density"]):
        raise CsvValidationError(
            f"{spec.csv_path}: column 'density' is not a full tau x grid "
            f"({len(table['density'])} rows vs {len(taus)}x{len(xs)})"
        )
    grid = table["density"].reshape(len(taus), len(xs)).T
    mesh = ax.pcolormesh(taus, xs, grid, shading="nearest", rasterized=True)
    fig.colorbar(mesh, ax=ax, label="probability density")
    ax.set_xlabel(spec.xlabel or "tau")
    ax.set_ylabel(spec.ylabel or "x")
    ax.grid(False)


def _render_phase_space(table, spec, ax, fig):
    require_columns(table, ["tau", "mean_x", "mean_p", "var_x", "var_p"],
                    spec.csv_path)
    ax.plot(table["mean_x"], table["mean_p"], lw=0.9)
    # uncertainty bars at a handful of evenly spaced points
    n_bars = int(spec.extra.get("n_bars", 12))
    idx = np.linspace(0, len(table["tau"]) - 1, n_bars).astype(int)
    ax.errorbar(table["mean_x"][idx], table["mean_p"][idx],
                xerr=np.sqrt(table["var_x"][idx]),
                yerr=np.sqrt(table["var_p"][idx]),
                fmt="o", ms=2.5, capsize=2, lw=0.8)
    ax.set_xlabel(spec.xlabel or "<x>")
    ax.set_ylabel(spec.ylabel or "<p>")
    ax.set_aspect("equal", adjustable="datalim")


def _render_phases(table, spec, ax, fig):
    require_columns(table, ["tau"], spec.csv_path)
    phase_cols = columns_matching(table, "phase_k")
    if not phase_cols:
        raise CsvValidationError(
            f"{spec.csv_path}: missing required column 'phase_k<i>'"
        )
    for name in phase_cols:
        k = name.removeprefix("phase_k")
        ax.plot(table["tau"], table[name], label=f"k = {k}")
        for ref, dash in (("small_lambda_k", ":"), ("large_lambda_k", "--")):
            ref_name = ref + k
            if ref_name in table:
                ax.plot(table["tau"], table[ref_name], dash, lw=0.9, alpha=0.7)
    ax.set_xlabel(spec.xlabel or "tau")
    ax.set_ylabel(spec.ylabel or "accumulated phase (rad)")
    ax.legend(loc="best", fontsize=8)


def _render_sigma_loglog(table, spec, ax, fig):
    require_columns(table, ["lambda", "sigma_numeric", "sigma_analytic"],
                    spec.csv_path)
    ax.loglog(table["lambda"], table["sigma_numeric"], "o-", label="numeric")
    ax.loglog(table["lambda"], table["sigma_analytic"], "s--", label="analytic")
    if "numeric_slope" in table:
        slope = table["numeric_slope"][0]
        ax.annotate(f"log-log slope: {slope:.3f}",
                    xy=(0.05, 0.08), xycoords="axes fraction", fontsize=9)
    ax.set_xlabel(spec.xlabel or "lambda")
    ax.set_ylabel(spec.ylabel or "period deviation sigma")
    ax.legend(loc="best")


def _render_observables(table, spec, ax, fig):
    require_columns(table, ["tau", "mean_x", "var_x"], spec.csv_path)
    band = np.sqrt(table["var_x"])
    ax.plot(table["tau"], table["mean_x"], label="<x>")
    ax.fill_between(table["tau"], table["mean_x"] - band, table["mean_x"] + band,
                    alpha=0.3, lw=0, label="+/- std")
    ax.set_xlabel(spec.xlabel or "tau")
    ax.set_ylabel(spec.ylabel or "<x>")
    ax.legend(loc="best")


_RENDERERS = {
    "density": _render_density,
    "phase_space": _render_phase_space,
    "phases": _render_phases,
    "sigma_loglog": _render_sigma_loglog,
    "observables": _render_observables,
}
