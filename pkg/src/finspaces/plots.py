"""Static report figures: a Hasse diagram of the poset and a heatmap of a
cohomology table, written to files next to the delimited output."""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def _levels(space):
    depth = {}
    for p in space.points:
        depth[p] = 0
    changed = True
    while changed:
        changed = False
        for (x, y) in space.edges:
            if not space.equiv(x, y) and depth[y] < depth[x] + 1:
                depth[y] = depth[x] + 1
                changed = True
    return depth


def hasse_figure(space, path, title=None):
    depth = _levels(space)
    byl = {}
    for p in space.points:
        byl.setdefault(depth[p], []).append(p)
    coords = {}
    for lev, pts in sorted(byl.items()):
        n = len(pts)
        for i, p in enumerate(pts):
            coords[p] = ((i - (n - 1) / 2.0), lev)
    fig, ax = plt.subplots(figsize=(max(4, 1.4 * max(len(v) for v in byl.values())),
                                    max(3, 1.2 * (max(byl) + 1))))
    for (x, y) in space.edges:
        x0, y0 = coords[x]
        x1, y1 = coords[y]
        ax.plot([x0, x1], [y0, y1], "-", color="0.6", zorder=1)
    for p, (cx, cy) in coords.items():
        ax.scatter([cx], [cy], s=600, color="#dce6f2", edgecolor="#365f91",
                   zorder=2)
        label = p
        A = space.stalks[p]
        sub = ",".join(A.names)
        ax.annotate(f"{label}", (cx, cy), ha="center", va="center", zorder=3,
                    fontsize=9)
        if sub:
            ax.annotate(f"[{sub}]", (cx, cy - 0.22), ha="center", va="top",
                        fontsize=7, color="0.4", zorder=3)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def table_figure(table, path, title=None):
    rows = table.rows()
    if table.window is not None:
        degs = list(range(table.window[0], table.window[1] + 1))
        data = [[table.dim(i, d) for d in degs] for i in rows]
        xlabels = [str(d) for d in degs]
    else:
        data = [[table.dim(i)] for i in rows]
        xlabels = ["dim"]
    if not data:
        data, rows, xlabels = [[0]], [0], ["-"]
    fig, ax = plt.subplots(figsize=(max(4, 0.45 * len(xlabels)),
                                    max(2.2, 0.6 * len(rows) + 1)))
    im = ax.imshow(data, aspect="auto", cmap="Blues")
    ax.set_xticks(range(len(xlabels)), xlabels, fontsize=7)
    ax.set_yticks(range(len(rows)), [f"H^{i}" for i in rows], fontsize=8)
    for r, row in enumerate(data):
        for c, v in enumerate(row):
            if v:
                ax.annotate(str(v), (c, r), ha="center", va="center",
                            fontsize=7,
                            color="white" if v > max(max(d) for d in data) / 2
                            else "black")
    ax.set_xlabel("internal degree")
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
