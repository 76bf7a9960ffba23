"""Summary rows and figures for the ``report`` command."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import linkcheck  # noqa: E402
from .stratlab import (  # noqa: E402
    EXAMPLES,
    EquivariantComplex,
    boundary_colimit,
    components,
    cone_fill,
    extend_right,
    fm1_model,
    interval_nullbordism_model,
    run_example,
    trivial_bimodule_model,
)

_STRATUM_COLORS = {"W": "0.35", "R": "tab:red", "B": "tab:blue"}


def _cycle(cx: EquivariantComplex, comp: list[int]) -> list[int]:
    """Vertices of a circle component in cyclic order."""
    P = cx.poset
    edges = [e for e in comp if cx.dims[e] == 1]
    ends = {e: P.lower_covers[e] for e in edges}
    start = ends[edges[0]][0]
    order, prev_edge, v = [start], None, start
    while True:
        e = next(e for e in edges if v in ends[e] and e != prev_edge)
        a, b = ends[e]
        v = b if a == v else a
        if v == start:
            return order
        order.append(v)
        prev_edge = e


def plot_circles(cx: EquivariantComplex, path: Path, title: str) -> Path:
    comps = components(cx)
    fig, axes = plt.subplots(1, len(comps), figsize=(3.2 * len(comps), 3.4))
    if len(comps) == 1:
        axes = [axes]
    for ax, comp in zip(axes, comps):
        cyc = _cycle(cx, comp)
        n = len(cyc)
        pts = [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]
        for k in range(n):
            (x0, y0), (x1, y1) = pts[k], pts[(k + 1) % n]
            ax.plot([x0, x1], [y0, y1], color="0.6", lw=1.5, zorder=1)
        for (x, y), v in zip(pts, cyc):
            tree = cx.cells[v].tree
            ax.scatter([x], [y], s=40, color=_STRATUM_COLORS[tree.colors[tree.root]], zorder=2)
            ax.annotate(cx.cells[v].describe(), (x, y), fontsize=6, ha="center",
                        xytext=(1.25 * x, 1.25 * y), textcoords="data")
        ax.set_xlim(-1.9, 1.9)
        ax.set_ylim(-1.6, 1.6)
        ax.set_aspect("equal")
        ax.axis("off")
    fig.suptitle(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_counts(named: dict[str, dict[int, int]], path: Path) -> Path:
    names = list(named)
    dmax = max((max(c, default=0) for c in named.values()), default=0)
    width = 0.8 / (dmax + 1)
    fig, ax = plt.subplots(figsize=(7, 3.2))
    for d in range(dmax + 1):
        xs = [i + d * width for i in range(len(names))]
        ax.bar(xs, [named[n].get(d, 0) for n in names], width, label=f"dim {d}")
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(names))])
    ax.set_xticklabels(names, fontsize=7, rotation=20, ha="right")
    ax.set_ylabel("cells")
    ax.legend(fontsize=7, frameon=False)
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sweeps(stats: dict[str, tuple[int, int]], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 2.8))
    names = list(stats)
    ax.barh(names, [stats[n][0] for n in names], color="tab:green", label="passed")
    ax.barh(names, [stats[n][1] for n in names], left=[stats[n][0] - stats[n][1] for n in names],
            color="tab:red", label="failed")
    ax.set_xlabel("certificates")
    ax.legend(fontsize=7, frameon=False)
    ax.spines[["top", "right"]].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def build(out: Path, *, labels_max: int = 3, workers: int = 1) -> tuple[list[tuple], list[Path]]:
    rows: list[tuple] = []
    for name in EXAMPLES:
        rep = run_example(name)
        for k, v in rep["expected"].items():
            got = rep["computed"].get(k)
            rows.append((name, k, v, got, "yes" if got == v else "no"))
    stats = {}
    for kind in ("links", "elementary", "join-decomp", "five", "rwlocal"):
        res = linkcheck.sweep(kind, min(labels_max, 3) if kind == "five" else labels_max, workers=workers)
        bad = sum(not r["ok"] for r in res)
        stats[kind] = (len(res), bad)
        rows.append(("sweep", kind, 0, bad, "yes" if bad == 0 else "no"))

    interval = interval_nullbordism_model("right")
    arity3 = boundary_colimit(interval, 3)
    filled = interval.replace({("W", 3): cone_fill(arity3)})
    surface = boundary_colimit(filled, 4)
    fm1 = fm1_model(4)
    surg = extend_right(trivial_bimodule_model())
    counts = {
        "FM1(3)": EquivariantComplex(fm1, 3, fm1.closed_poset("R", 3)).counts(),
        "FM1(4)": EquivariantComplex(fm1, 4, fm1.closed_poset("R", 4)).counts(),
        "arity-3 boundary": arity3.counts(),
        "arity-4 boundary": surface.counts(),
        "new R(3)": surg.operad.counts(),
        "new W(3)": surg.bimodule.counts(),
    }
    figures = [
        plot_circles(arity3, out / "hexagons.png", "arity-3 boundary of the interval bimodule"),
        plot_counts(counts, out / "cell_counts.png"),
        plot_sweeps(stats, out / "sweeps.png"),
    ]
    return rows, figures
