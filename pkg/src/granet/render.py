"""Deterministic SVG emission: color-coded particle maps and bin histograms.

All floats are written with 6 significant digits and no timestamps are
embedded, so identical inputs always produce byte-identical files.
"""

import numpy as np

from .eigen import BinnedVector, bin_vector

# Ten visually ordered hues, dark blue -> dark red, one per bin.
DEFAULT_COLORS = (
    "#30123b",
    "#4458cb",
    "#3e9bfe",
    "#18d5cc",
    "#46f783",
    "#a2fc3c",
    "#e1dd37",
    "#fda331",
    "#ef5a11",
    "#7a0403",
)

# Palette for categorical (community) coloring; cycled when exceeded.
CATEGORY_COLORS = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)


class ColorMap:
    """Ordered bin -> RGB mapping."""

    def __init__(self, colors=DEFAULT_COLORS):
        self.colors = tuple(colors)
        if not self.colors:
            raise ValueError("colormap needs at least one color")

    def __len__(self):
        return len(self.colors)

    def color(self, bin_index):
        if not 0 <= bin_index < len(self.colors):
            raise IndexError(f"bin {bin_index} outside colormap of {len(self.colors)}")
        return self.colors[bin_index]


def _fmt(x):
    return f"{x:.6g}"


def _fit_transform(box, size, margin):
    """Affine map from data box to the SVG canvas, aspect preserved, y up."""
    x_min, x_max, y_min, y_max = box
    span = max(x_max - x_min, y_max - y_min)
    if span <= 0:
        span = 1.0
    scale = (size - 2.0 * margin) / span
    ox = margin + 0.5 * ((size - 2.0 * margin) - scale * (x_max - x_min))
    oy = margin + 0.5 * ((size - 2.0 * margin) - scale * (y_max - y_min))

    def tx(x, y):
        return ox + scale * (x - x_min), size - (oy + scale * (y - y_min))

    return tx, scale


def render_particles(pset, scalar, path, nbins=10, categorical=False, size=600, colormap=None):
    """Draw one circle per particle, filled by binned scalar (continuous) or
    by a cycling palette (categorical community ids)."""
    scalar = np.asarray(scalar)
    if scalar.size != len(pset):
        raise ValueError(f"scalar length {scalar.size} != particle count {len(pset)}")
    margin = 0.05 * size
    tx, scale = _fit_transform(pset.box, size, margin)
    if categorical:
        palette = CATEGORY_COLORS
        fills = [palette[int(c) % len(palette)] for c in scalar]
    else:
        cmap = colormap or ColorMap()
        binned = bin_vector(scalar.astype(float), min(nbins, len(cmap)))
        fills = [cmap.color(b) for b in binned.bin_of]
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    for p, fill in zip(pset.particles, fills):
        cx, cy = tx(p.x, p.y)
        lines.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(p.radius * scale)}" '
            f'fill="{fill}" stroke="#000000" stroke-width="0.5"/>'
        )
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def render_histogram(binned, path, size=600, colormap=None):
    """Bar chart of a BinnedVector: one bar per bin, counts labeled on top."""
    if not isinstance(binned, BinnedVector):
        raise TypeError("render_histogram expects a BinnedVector")
    cmap = colormap or ColorMap()
    counts = binned.counts
    nbins = counts.size
    margin = 0.08 * size
    plot_w = size - 2.0 * margin
    plot_h = size - 2.0 * margin
    peak = max(int(counts.max()), 1)
    bar_w = plot_w / nbins
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
    ]
    for b in range(nbins):
        h = plot_h * counts[b] / peak
        x = margin + b * bar_w
        y = size - margin - h
        fill = cmap.color(b % len(cmap))
        lines.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w * 0.9)}" '
            f'height="{_fmt(h)}" fill="{fill}" stroke="#000000" stroke-width="0.5"/>'
        )
        lines.append(
            f'<text x="{_fmt(x + 0.45 * bar_w)}" y="{_fmt(y - 4)}" '
            f'font-size="12" text-anchor="middle">{int(counts[b])}</text>'
        )
    lines.append(
        f'<line x1="{_fmt(margin)}" y1="{_fmt(size - margin)}" x2="{_fmt(size - margin)}" '
        f'y2="{_fmt(size - margin)}" stroke="#000000" stroke-width="1"/>'
    )
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
