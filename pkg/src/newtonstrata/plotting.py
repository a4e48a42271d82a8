"""Figures for the CLI report path: Hasse diagrams, Newton polygons, Mazur histograms.

Rendering uses the non-interactive Agg backend and strips file metadata so
repeated runs produce identical files.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .polygons import polygon_values  # noqa: E402
from .rootdata import fmt_vec  # noqa: E402
from .strata import TYPE_A_FAMILIES, StrataPoset, StrataRecord, _to_gl  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "newtonstrata",
    "path.simplify": False,
}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fmt = path.suffix.lstrip(".").lower() or "png"
    meta = {"Date": None} if fmt in ("svg", "pdf") else {"Software": None}
    if fmt == "pdf":
        meta["CreationDate"] = None
        meta.pop("Date")
    fig.savefig(path, format=fmt, metadata=meta, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return path


def _layout(poset: StrataPoset) -> dict[int, tuple[float, float]]:
    """Rank on the vertical axis; classes of equal rank spread evenly, in canonical order."""
    levels = defaultdict(list)
    for i, r in enumerate(poset.rank_list):
        levels[r].append(i)
    pos = {}
    for r, members in levels.items():
        k = len(members)
        for t, i in enumerate(members):
            pos[i] = (t - (k - 1) / 2, float(r))
    return pos


def draw_hasse(ax, poset: StrataPoset, records: Sequence[StrataRecord] | None = None):
    pos = _layout(poset)
    index = {c: i for i, c in enumerate(poset.classes)}
    info = {r.cls: r for r in records or ()}
    for lo, hi in poset.covers:
        (x0, y0), (x1, y1) = pos[index[hi]], pos[index[lo]]
        ax.annotate("", xy=(x1, y1 + 0.12), xytext=(x0, y0 - 0.12),
                    arrowprops={"arrowstyle": "->", "color": "0.35", "lw": 0.9})
    for c, i in index.items():
        x, y = pos[i]
        label = fmt_vec(c.nu)
        if c in info:
            label += f"\ndef {info[c].defect}, dim {info[c].dim_stratum}"
        ax.text(x, y, label, ha="center", va="center", fontsize=8,
                bbox={"boxstyle": "round,pad=0.25", "fc": "white", "ec": "0.5", "lw": 0.7})
    xs = [p[0] for p in pos.values()] or [0]
    ax.set_xlim(min(xs) - 1, max(xs) + 1)
    ax.set_ylim(-0.6, max(poset.rank_list, default=0) + 0.6)
    ax.set_yticks(range(max(poset.rank_list, default=0) + 1))
    ax.set_ylabel("rank")
    ax.set_xticks([])
    ax.spines["bottom"].set_visible(False)


def draw_polygons(ax, poset: StrataPoset):
    d = poset.datum
    n = len(_to_gl(d, poset.mu))
    cmap = plt.get_cmap("viridis", max(len(poset), 2))
    for i, c in enumerate(poset.classes):
        vals = [float(v) for v in polygon_values(_to_gl(d, c.nu))]
        ax.plot(range(n + 1), vals, marker="o", ms=3, lw=1.2, color=cmap(i), label=fmt_vec(c.nu))
    ax.set_xlabel("i")
    ax.set_ylabel("polygon value")
    ax.set_xticks(range(n + 1))
    ax.legend(fontsize=7, frameon=False, loc="upper left")


def hasse_figure(poset: StrataPoset, path: str | Path, records: Sequence[StrataRecord] | None = None,
                 title: str | None = None) -> Path:
    """Hasse diagram (arrows from larger to smaller); type A also gets the Newton polygons."""
    with plt.rc_context(STYLE):
        with_polygons = poset.datum.family in TYPE_A_FAMILIES
        ncols = 2 if with_polygons else 1
        fig, axes = plt.subplots(1, ncols, figsize=(5.5 * ncols, 1.2 + 1.1 * (max(poset.rank_list, default=0) + 1)),
                                 squeeze=False)
        draw_hasse(axes[0][0], poset, records)
        if with_polygons:
            draw_polygons(axes[0][1], poset)
        fig.suptitle(title or f"B({poset.datum.name}, {fmt_vec(poset.mu)})")
        return _save(fig, path)


def mazur_figure(report, path: str | Path) -> Path:
    """Bar chart of sampled Newton points against the classes of B(GL_n, mu)."""
    with plt.rc_context(STYLE):
        classes = list(report.expected) or report.observed
        labels = [fmt_vec(nu) for nu in classes]
        counts = [report.counts.get(nu, 0) for nu in classes]
        fig, ax = plt.subplots(figsize=(max(4.0, 0.9 * len(classes) + 1.5), 3.2))
        bars = ax.bar(range(len(classes)), counts, color="0.4")
        for b, c in zip(bars, counts):
            ax.text(b.get_x() + b.get_width() / 2, b.get_height(), str(c), ha="center", va="bottom", fontsize=7)
        ax.set_xticks(range(len(classes)))
        ax.set_xticklabels(labels, rotation=35, ha="right", fontsize=7)
        ax.set_ylabel("draws")
        ax.set_title(f"{report.samples} draws in K mu(eps) K, mu={fmt_vec(report.mu)}, "
                     f"{len(report.violations)} violations", fontsize=9)
        return _save(fig, path)
