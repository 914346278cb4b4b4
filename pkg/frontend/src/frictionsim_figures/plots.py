"""Figure generation from aggregated sweep CSVs.

Consumes only the aggregated CSV format
(`f,ell,mean_q,se_q,mean_tau,se_tau,n_runs,n_tau_defined`); no
simulator internals. Output is SVG with pinned hash salt and stripped
date metadata, so regenerating from the same CSV yields identical
bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

AGG_HEADER = "f,ell,mean_q,se_q,mean_tau,se_tau,n_runs,n_tau_defined"


class FigureInputError(ValueError):
    """The input CSV cannot be plotted as requested."""


@dataclass
class FigureSpec:
    input_csv: str
    output_path: str
    ell_values: list = field(default_factory=lambda: [0.0, 0.1, 0.5, 1.0])
    x_label: str = "friction probability f"
    y_label: Optional[str] = None


@dataclass
class Cell:
    f: float
    ell: float
    mean_q: float
    se_q: Optional[float]
    mean_tau: Optional[float]
    se_tau: Optional[float]


def load_cells(path) -> list:
    try:
        with open(path) as fh:
            lines = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise FigureInputError(f"cannot read {path}: {exc}")
    if not lines:
        raise FigureInputError(f"{path} is empty")
    if lines[0] != AGG_HEADER:
        raise FigureInputError(
            f"{path} does not look like an aggregated sweep CSV "
            f"(header {lines[0]!r}, expected {AGG_HEADER!r})"
        )
    if len(lines) == 1:
        raise FigureInputError(f"{path} has a header but no data rows")
    cells = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 8:
            raise FigureInputError(f"malformed row in {path}: {line!r}")
        opt = lambda s: None if s == "" else float(s)
        cells.append(Cell(
            f=float(parts[0]), ell=float(parts[1]),
            mean_q=float(parts[2]), se_q=opt(parts[3]),
            mean_tau=opt(parts[4]), se_tau=opt(parts[5]),
        ))
    return cells


def curve(cells, ell: float, which: str):
    """(f, mean, se) arrays for one learning-probability curve.

    For tau, cells where the coefficient is undefined (all runs tied,
    i.e. f=1) are omitted entirely rather than plotted as zero.
    """
    selected = sorted((c for c in cells if c.ell == ell), key=lambda c: c.f)
    if not selected:
        available = sorted({c.ell for c in cells})
        raise FigureInputError(
            f"no cells with ell={ell}; CSV contains ell values {available}"
        )
    if which == "quality":
        points = [(c.f, c.mean_q, c.se_q) for c in selected]
    elif which == "tau":
        points = [(c.f, c.mean_tau, c.se_tau) for c in selected
                  if c.mean_tau is not None]
    else:
        raise FigureInputError(f"unknown figure kind {which!r}")
    f = np.array([p[0] for p in points])
    mean = np.array([p[1] for p in points])
    se = np.array([0.0 if p[2] is None else p[2] for p in points])
    return f, mean, se


def _render(cells, spec: FigureSpec, which: str, y_label: str) -> str:
    plt.rcParams["svg.hashsalt"] = "frictionsim-figures"
    fig, ax = plt.subplots(figsize=(6, 4))
    for ell in spec.ell_values:
        f, mean, se = curve(cells, ell, which)
        ax.plot(f, mean, marker="o", markersize=3, label=f"$\\ell$ = {ell:g}")
        ax.fill_between(f, mean - se, mean + se, alpha=0.25, linewidth=0)
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label or y_label)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return spec.output_path


def plot_quality(spec: FigureSpec) -> str:
    """Mean converged quality vs f, one curve per ell, with SE bands."""
    cells = load_cells(spec.input_csv)
    return _render(cells, spec, "quality", "average post quality $\\hat{q}_T$")


def plot_tau(spec: FigureSpec) -> str:
    """Mean popularity-quality rank correlation vs f, per ell."""
    cells = load_cells(spec.input_csv)
    return _render(cells, spec, "tau", "discriminative power $\\tau$")
