"""Figures for reports: the lattice of admissible pairs and the labelled atom graph."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import FancyArrowPatch  # noqa: E402

from .boolean import iter_bits  # noqa: E402
from .dynamics import PairLattice, RelativeGBDS  # noqa: E402


def _pair_label(sys: RelativeGBDS, lattice: PairLattice, i: int) -> str:
    p = lattice[i]
    h = ",".join(sys.algebra.names(p.h_top)) or "∅"
    s = ",".join(sys.algebra.names(p.s_top)) or "∅"
    return f"{i}: ({{{h}}}, {{{s}}})"


def _levels(n: int, covers: list[tuple[int, int]]) -> list[int]:
    # longest chain from a minimal element
    level = [0] * n
    changed = True
    while changed:
        changed = False
        for lo, hi in covers:
            if level[hi] < level[lo] + 1:
                level[hi] = level[lo] + 1
                changed = True
    return level


def hasse_diagram(sys: RelativeGBDS, lattice: PairLattice, path: Path) -> Path:
    covers = lattice.covers()
    level = _levels(len(lattice), covers)
    rows: dict[int, list[int]] = {}
    for i, lv in enumerate(level):
        rows.setdefault(lv, []).append(i)
    pos = {}
    for lv, members in rows.items():
        for k, i in enumerate(members):
            pos[i] = (k - (len(members) - 1) / 2, lv)
    width = max((len(m) for m in rows.values()), default=1)
    fig, ax = plt.subplots(figsize=(max(4, 2.2 * width), max(3, 1.3 * (len(rows) + 1))))
    for lo, hi in covers:
        (x0, y0), (x1, y1) = pos[lo], pos[hi]
        ax.plot([x0, x1], [y0, y1], color="0.4", lw=1, zorder=1)
    for i, (x, y) in pos.items():
        ax.text(
            x, y, _pair_label(sys, lattice, i), ha="center", va="center", fontsize=8,
            bbox={"boxstyle": "round", "fc": "white", "ec": "0.3"}, zorder=2,
        )
    ax.set_xlim(-width / 2 - 0.6, width / 2 + 0.6)
    ax.set_ylim(-0.7, max(rows, default=0) + 0.7)
    ax.set_axis_off()
    ax.set_title("admissible pairs (H, S)", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def atom_graph(sys: RelativeGBDS, path: Path) -> Path:
    """Atoms on a circle; an arrow ``a -> b`` for each label with ``b`` below ``theta(a)``. Atoms in ``J`` are filled."""
    n = sys.n_atoms
    pos = [
        (math.cos(2 * math.pi * i / max(n, 1) + math.pi / 2), math.sin(2 * math.pi * i / max(n, 1) + math.pi / 2))
        for i in range(n)
    ]
    if n == 1:
        pos = [(0.0, 0.0)]
    fig, ax = plt.subplots(figsize=(5, 5))
    multiplicity: dict[tuple[int, int], int] = {}
    cmap = plt.get_cmap("tab10")
    for k, label in enumerate(sys.labels):
        color = cmap(k % 10)
        for a in range(n):
            for b in iter_bits(sys.images[k][a]):
                seen = multiplicity.get((a, b), 0)
                multiplicity[(a, b)] = seen + 1
                if a == b:
                    x, y = pos[a]
                    # loops point away from the centre
                    norm = math.hypot(x, y) or 1.0
                    ux, uy = (x / norm, y / norm) if (x or y) else (0.0, 1.0)
                    r = 0.18 + 0.07 * seen
                    loop = plt.Circle((x + ux * r, y + uy * r), r, fill=False, color=color, lw=1.2)
                    ax.add_patch(loop)
                    ax.text(x + ux * (2 * r + 0.08), y + uy * (2 * r + 0.08), label, color=color,
                            ha="center", va="center", fontsize=8)
                    continue
                rad = 0.15 + 0.12 * seen
                arrow = FancyArrowPatch(
                    pos[a], pos[b], arrowstyle="-|>", mutation_scale=12, color=color,
                    connectionstyle=f"arc3,rad={rad}", shrinkA=14, shrinkB=14, lw=1.2,
                )
                ax.add_patch(arrow)
                mx = (pos[a][0] + pos[b][0]) / 2 - rad * (pos[b][1] - pos[a][1]) / 2
                my = (pos[a][1] + pos[b][1]) / 2 + rad * (pos[b][0] - pos[a][0]) / 2
                ax.text(mx, my, label, color=color, fontsize=8, ha="center")
    for i, (x, y) in enumerate(pos):
        in_j = bool(sys.j_top >> i & 1)
        ax.scatter([x], [y], s=420, zorder=3, facecolor="0.85" if in_j else "white", edgecolor="black")
        ax.text(x, y, sys.algebra.atoms[i], ha="center", va="center", fontsize=9, zorder=4)
    ax.set_xlim(-1.6, 1.6)
    ax.set_ylim(-1.6, 1.8)
    ax.set_aspect("equal")
    ax.set_axis_off()
    ax.set_title("atom graph (shaded atoms lie in J)", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
