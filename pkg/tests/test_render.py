import re

import numpy as np
import pytest

from granet.eigen import bin_vector, principal_eigenpair
from granet.network import build_adjacency
from granet.particles import generate_hex_packing
from granet.render import CATEGORY_COLORS, ColorMap, render_histogram, render_particles


def _fills(path):
    text = path.read_text()
    return re.findall(r'<circle[^>]*fill="(#[0-9a-f]{6})"', text)


def test_colormap_bounds():
    cmap = ColorMap(("#000000", "#ffffff"))
    assert len(cmap) == 2
    assert cmap.color(1) == "#ffffff"
    with pytest.raises(IndexError):
        cmap.color(2)
    with pytest.raises(ValueError):
        ColorMap(())


def test_render_particles_byte_deterministic(tmp_path, paw_particles):
    scalar = np.array([0.1, 0.2, 0.9, 0.4])
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render_particles(paw_particles, scalar, a)
    render_particles(paw_particles, scalar, b)
    assert a.read_bytes() == b.read_bytes()
    assert b"<?xml" in a.read_bytes()


def test_render_no_timestamps(tmp_path, paw_particles):
    path = tmp_path / "p.svg"
    render_particles(paw_particles, np.arange(4.0), path)
    text = path.read_text().lower()
    assert "date" not in text and "time" not in text


def test_hex_principal_has_four_fills(tmp_path):
    pset = generate_hex_packing(2)
    net = build_adjacency(pset)
    pair = principal_eigenpair(net)
    path = tmp_path / "hex.svg"
    render_particles(pset, pair.vector, path)
    fills = _fills(path)
    assert len(fills) == 19
    assert len(set(fills)) == 4  # one color per centrality shell


def test_categorical_fills(tmp_path, paw_particles):
    path = tmp_path / "cat.svg"
    render_particles(paw_particles, np.array([0, 0, 0, 1]), path, categorical=True)
    fills = _fills(path)
    assert fills[0] == fills[1] == fills[2] == CATEGORY_COLORS[0]
    assert fills[3] == CATEGORY_COLORS[1]
    assert len(set(fills)) == 2


def test_categorical_palette_cycles(tmp_path, paw_particles):
    path = tmp_path / "cyc.svg"
    ids = np.array([0, 10, 1, 11])  # 10 maps onto color 0 again
    render_particles(paw_particles, ids, path, categorical=True)
    fills = _fills(path)
    assert fills[0] == fills[1]
    assert fills[2] == fills[3]


def test_scalar_length_mismatch(tmp_path, paw_particles):
    with pytest.raises(ValueError):
        render_particles(paw_particles, np.zeros(3), tmp_path / "x.svg")


def test_histogram_counts_labeled(tmp_path):
    binned = bin_vector(np.array([0.0, 0.1, 0.2, 0.9, 1.0]), nbins=4)
    path = tmp_path / "h.svg"
    render_histogram(binned, path)
    text = path.read_text()
    assert text.count("<rect") == 1 + 4  # background + one bar per bin
    labels = [int(m) for m in re.findall(r">(\d+)</text>", text)]
    assert sum(labels) == 5


def test_histogram_rejects_raw_array(tmp_path):
    with pytest.raises(TypeError):
        render_histogram(np.arange(5), tmp_path / "h.svg")


def test_histogram_deterministic(tmp_path):
    binned = bin_vector(np.linspace(0, 1, 30), nbins=6)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render_histogram(binned, a)
    render_histogram(binned, b)
    assert a.read_bytes() == b.read_bytes()
