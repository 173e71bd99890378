"""Optional SVG rendering of sweep grids. The CSV files remain the data of record."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed metadata keeps SVG output reproducible
_SVG_META = {"Date": None}


def plot_lines(path, grid, columns, xlabel=None):
    x = grid.axes[0].values
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for col in columns:
        ax.plot(x, grid.field(col), label=col)
    ax.set_xlabel(xlabel or grid.axes[0].name)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)


def plot_maps(path, grid, columns):
    ax0, ax1 = grid.axes
    fig, axes = plt.subplots(1, len(columns), figsize=(4 * len(columns), 3.5))
    for ax, col in zip(axes, columns):
        mesh = ax.pcolormesh(ax1.values, ax0.values, grid.field(col), shading="auto")
        ax.set_xlabel(ax1.name)
        ax.set_ylabel(ax0.name)
        ax.set_title(col)
        fig.colorbar(mesh, ax=ax)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)
