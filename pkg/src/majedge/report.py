"""Figures for benchmark sweeps (matplotlib, file output only)."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Iterable, Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def success_rates(rows: Iterable[Mapping[str, str]]) -> dict[tuple[str, str], list[tuple[int, float, int]]]:
    """Group rows by (mode, params) -> sorted [(delta, success rate, count)]."""
    tally: dict[tuple[str, str], dict[int, list[int]]] = defaultdict(lambda: defaultdict(lambda: [0, 0]))
    for row in rows:
        cell = tally[(row["mode"], row["params"])][int(row["delta"])]
        cell[0] += int(row["verified"])
        cell[1] += 1
    return {
        key: [(d, ok / total, total) for d, (ok, total) in sorted(by_delta.items())]
        for key, by_delta in sorted(tally.items())
    }


def plot_success(rows: Iterable[Mapping[str, str]], path: str | Path, title: str | None = None) -> Path:
    """Success rate against minimum degree, one line per parameter setting."""
    series = success_rates(rows)
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    for (mode, params), pts in series.items():
        xs = [d for d, _, _ in pts]
        ys = [r for _, r, _ in pts]
        ax.plot(xs, ys, marker="o", label=f"{mode} {params}")
    ax.set_xlabel("minimum degree")
    ax.set_ylabel("verified fraction")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, alpha=0.3)
    if series:
        ax.legend(fontsize=8, loc="lower right")
    else:
        ax.text(0.5, 0.5, "empty grid", ha="center", va="center", transform=ax.transAxes)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
