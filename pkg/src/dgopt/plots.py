"""Matplotlib rendering of run traces and strategy comparisons.

Figures are written straight to files (format inferred from the
extension) next to the delimited output, never shown interactively.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def save_trace_plot(trace, path, title: str = "") -> None:
    """Objective value against cumulative evaluations for a single run."""
    evals = [rec.cumulative_evals for rec in trace]
    values = [rec.f_value for rec in trace]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(evals, values, lw=1.2)
    ax.set_xscale("log")
    if values and min(values) > 0:
        ax.set_yscale("log")
    ax.set_xlabel("objective evaluations")
    ax.set_ylabel("objective value")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_comparison_plot(rows, path, title: str = "") -> None:
    """Relative objective against evaluations, one line per (strategy, seed).

    ``rows`` are (strategy, seed, cum_evals, rel_obj) tuples, the same
    records that go into the comparison CSV.
    """
    series: dict[tuple, tuple[list, list]] = {}
    for strategy, seed, cum_evals, rel_obj in rows:
        xs, ys = series.setdefault((strategy, seed), ([], []))
        xs.append(cum_evals)
        ys.append(rel_obj)

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    colors = {}
    cmap = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    positive = True
    for (strategy, seed), (xs, ys) in sorted(series.items()):
        if strategy not in colors:
            colors[strategy] = cmap[len(colors) % len(cmap)]
        ax.plot(xs, ys, lw=1.0, alpha=0.8, color=colors[strategy])
        positive = positive and all(y > 0 for y in ys)
    for strategy, color in colors.items():
        ax.plot([], [], color=color, label=strategy)
    ax.set_xscale("log")
    if positive:
        ax.set_yscale("log")
    ax.set_xlabel("objective evaluations")
    ax.set_ylabel("relative objective")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
