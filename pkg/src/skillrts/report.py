"""Matplotlib figures for match and tournament reports (files only, no display)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

BLUE = "#1f5fbf"
RED = "#c23b22"


def plot_leaderboard(rows, path: str | Path) -> Path:
    """Horizontal bars of Scores, best agent on top, win rate annotated."""
    path = Path(path)
    names = [r.agent for r in rows][::-1]
    scores = [r.scores for r in rows][::-1]
    wrs = [r.wr for r in rows][::-1]
    fig, ax = plt.subplots(figsize=(7, 0.45 * len(rows) + 1.5))
    colors = [BLUE if s >= 0 else RED for s in scores]
    bars = ax.barh(names, scores, color=colors)
    for bar, wr in zip(bars, wrs):
        x = bar.get_width()
        ax.annotate(f"WR {wr:.2f}", (x, bar.get_y() + bar.get_height() / 2),
                    xytext=(4 if x >= 0 else -4, 0), textcoords="offset points",
                    ha="left" if x >= 0 else "right", va="center", fontsize=8)
    ax.axvline(0, color="black", lw=0.8)
    ax.set_xlabel("Scores (win +1, draw 0, loss -1)")
    ax.set_title("Leaderboard")
    lim = max(1, max(abs(s) for s in scores)) * 1.3
    ax.set_xlim(-lim, lim)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_confrontation(labels, grid, path: str | Path, rounds: int | None = None) -> Path:
    """Heatmap of summed scores, rows playing BLUE against columns playing RED."""
    path = Path(path)
    data = np.array(grid, dtype=float)
    n = len(labels)
    np.fill_diagonal(data, np.nan)
    lim = rounds or max(1.0, np.nanmax(np.abs(data)) if n > 1 else 1.0)
    fig, ax = plt.subplots(figsize=(1.0 + 0.7 * n, 0.8 + 0.6 * n))
    im = ax.imshow(data, cmap="RdBu", vmin=-lim, vmax=lim)
    ax.set_xticks(range(n), labels, rotation=45, ha="right", fontsize=8)
    ax.set_yticks(range(n), labels, fontsize=8)
    ax.set_xlabel("RED")
    ax.set_ylabel("BLUE")
    for i in range(n):
        for j in range(n):
            if i != j:
                ax.text(j, i, f"{int(grid[i][j])}", ha="center", va="center", fontsize=8)
    fig.colorbar(im, ax=ax, shrink=0.8, label="score of row agent")
    ax.set_title("Confrontation matrix")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_match_timeline(result, path: str | Path) -> Path:
    """Stockpiles and unit counts of both sides over the match."""
    path = Path(path)
    t = np.array(result.timeline, dtype=int).reshape(-1, 5)
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 4.5))
    names = result.agents
    top.step(t[:, 0], t[:, 1], where="post", color=BLUE, label=f"{names[0]} (BLUE)")
    top.step(t[:, 0], t[:, 2], where="post", color=RED, label=f"{names[1]} (RED)")
    top.set_ylabel("stockpile")
    top.legend(fontsize=8, loc="upper right")
    bottom.step(t[:, 0], t[:, 3], where="post", color=BLUE)
    bottom.step(t[:, 0], t[:, 4], where="post", color=RED)
    bottom.set_ylabel("units alive")
    bottom.set_xlabel("tick")
    top.set_title(f"{names[0]} vs {names[1]}: {result.outcome} at tick {result.game_time}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def tournament_figures(res, out_dir: str | Path, rounds: int | None = None) -> dict[str, str]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return {
        "leaderboard_png": str(plot_leaderboard(res.leaderboard, out_dir / "leaderboard.png")),
        "confrontation_png": str(plot_confrontation(res.labels, res.confrontation,
                                                    out_dir / "confrontation.png", rounds)),
    }
