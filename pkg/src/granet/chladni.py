"""Analytic standing-wave modes of a clamped rectangular plate and matching of
lattice eigenvectors against them."""

import itertools
import math

import numpy as np
from scipy.spatial import cKDTree

DEFAULT_RATIOS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)


class ChladniMode:
    """Superposition of two separable sine modes on an a x b plate:

        C sin(m pi x / a) sin(n pi y / b) + D sin(p pi x / a) sin(q pi y / b)
    """

    __slots__ = ("m", "n", "p", "q", "c", "d", "a", "b")

    def __init__(self, m, n, p=1, q=1, c=1.0, d=0.0, a=1.0, b=1.0):
        if min(m, n, p, q) < 1:
            raise ValueError("mode indices must be >= 1")
        if c == 0.0 and d == 0.0:
            raise ValueError("amplitudes C and D cannot both be zero")
        if a <= 0 or b <= 0:
            raise ValueError("plate dimensions must be positive")
        self.m, self.n, self.p, self.q = int(m), int(n), int(p), int(q)
        self.c, self.d = float(c), float(d)
        self.a, self.b = float(a), float(b)

    def __repr__(self):
        return (
            f"ChladniMode(m={self.m}, n={self.n}, p={self.p}, q={self.q}, "
            f"C={self.c:g}, D={self.d:g})"
        )


class ModeMatch:
    __slots__ = ("mode", "score", "sign_agreement")

    def __init__(self, mode, score, sign_agreement):
        self.mode = mode
        self.score = float(score)
        self.sign_agreement = float(sign_agreement)

    def __repr__(self):
        return f"ModeMatch({self.mode!r}, score={self.score:.4f})"


def chladni_field(mode, x, y):
    """Evaluate the mode displacement at (x, y); zero on the plate boundary."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(x > mode.a) or np.any(y < 0) or np.any(y > mode.b):
        raise ValueError(f"point outside plate domain [0, {mode.a}] x [0, {mode.b}]")
    u = np.pi * x / mode.a
    v = np.pi * y / mode.b
    out = mode.c * np.sin(mode.m * u) * np.sin(mode.n * v)
    out += mode.d * np.sin(mode.p * u) * np.sin(mode.q * v)
    return out if out.shape else float(out)


def sample_mode(mode, positions, box):
    """Map node positions affinely into the unit plate, evaluate the mode and
    return the unit-normalized component vector (zeros stay zeros)."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    x_min, x_max, y_min, y_max = box
    if x_max <= x_min or y_max <= y_min:
        raise ValueError(f"degenerate box {box}")
    x = (positions[:, 0] - x_min) / (x_max - x_min) * mode.a
    y = (positions[:, 1] - y_min) / (y_max - y_min) * mode.b
    field = np.atleast_1d(chladni_field(mode, x, y))
    norm = np.linalg.norm(field)
    return field / norm if norm > 0 else field


def sampling_box(positions):
    """Bounding box padded by half the median nearest-neighbor spacing, so
    boundary lattice nodes sit near (not on) the clamped plate edge."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    if len(positions) > 1:
        d, _ = cKDTree(positions).query(positions, k=2)
        pad = 0.5 * float(np.median(d[:, 1]))
    else:
        pad = 0.5
    x_min, y_min = positions.min(axis=0)
    x_max, y_max = positions.max(axis=0)
    return (x_min - pad, x_max + pad, y_min - pad, y_max + pad)


def match_mode(v, net, max_index=4, amplitude_grid=DEFAULT_RATIOS, box=None):
    """Best-matching mode by absolute cosine similarity.

    Exhaustive search over 1 <= m,n,p,q <= max_index and the D/C ratio grid
    (C fixed at 1).  Ties resolve to the lexicographically smallest
    (m, n, p, q), then the smallest ratio.
    """
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    ratios = tuple(amplitude_grid)
    if not ratios:
        raise ValueError("amplitude grid must be non-empty")
    v = np.asarray(v, dtype=float)
    v_norm = np.linalg.norm(v)
    if v_norm == 0:
        raise ValueError("cannot match a zero vector")
    positions = net.positions
    if box is None:
        box = sampling_box(positions)
    x_min, x_max, y_min, y_max = box
    u = np.pi * (positions[:, 0] - x_min) / (x_max - x_min)
    w = np.pi * (positions[:, 1] - y_min) / (y_max - y_min)
    sx = np.array([np.sin(i * u) for i in range(1, max_index + 1)])
    sy = np.array([np.sin(i * w) for i in range(1, max_index + 1)])
    best = None
    for m, n in itertools.product(range(1, max_index + 1), repeat=2):
        first = sx[m - 1] * sy[n - 1]
        for p, q in itertools.product(range(1, max_index + 1), repeat=2):
            second = sx[p - 1] * sy[q - 1]
            for ratio in ratios:
                field = first + ratio * second
                f_norm = np.linalg.norm(field)
                if f_norm < 1e-12:
                    continue
                score = abs(float(field @ v)) / (f_norm * v_norm)
                if best is None or score > best[0] + 1e-12:
                    best = (score, (m, n, p, q), ratio, field)
    score, (m, n, p, q), ratio, field = best
    # Align overall sign before counting per-node sign agreement.
    if float(field @ v) < 0:
        field = -field
    agree = float(np.mean(np.sign(field) == np.sign(v)))
    mode = ChladniMode(m, n, p, q, c=1.0, d=ratio)
    return ModeMatch(mode, score, agree)


def write_mode_report(path, matches):
    """Dump one `m n p q C D score` line per match."""
    with open(path, "w", encoding="utf-8") as fh:
        for match in matches:
            md = match.mode
            fh.write(
                f"{md.m} {md.n} {md.p} {md.q} {md.c:.6g} {md.d:.6g} {match.score:.6g}\n"
            )
