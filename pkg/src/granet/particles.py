"""Particle data model, text file I/O and deterministic lattice generators."""

import math

import numpy as np

DEFAULT_RADIUS = 1e-3  # m
DEFAULT_DENSITY = 8000.0  # kg/m^3

_SQRT3 = math.sqrt(3.0)


class ParticleFileError(ValueError):
    """Malformed particle file (reported with the offending line number)."""


class ParticleValidationError(ValueError):
    """Particle data violates a model invariant."""


def sphere_mass(radius, density=DEFAULT_DENSITY):
    """Mass of a sphere of the given radius; the 2D discs carry 3D sphere mass."""
    return (4.0 / 3.0) * math.pi * radius**3 * density


class Particle:
    __slots__ = ("id", "x", "y", "radius", "mass")

    def __init__(self, id, x, y, radius, mass):
        if radius <= 0.0:
            raise ParticleValidationError(f"particle {id}: radius must be > 0, got {radius}")
        if mass <= 0.0:
            raise ParticleValidationError(f"particle {id}: mass must be > 0, got {mass}")
        self.id = int(id)
        self.x = float(x)
        self.y = float(y)
        self.radius = float(radius)
        self.mass = float(mass)

    def __repr__(self):
        return f"Particle(id={self.id}, x={self.x:g}, y={self.y:g}, radius={self.radius:g}, mass={self.mass:g})"


class ParticleSet:
    """Ordered collection of particles; list index equals downstream matrix row.

    ``labels[i]`` preserves the id a particle carried in its source file; ids
    inside the set itself are always the dense range 0..N-1.
    """

    def __init__(self, particles, box=None, labels=None):
        particles = list(particles)
        seen = set()
        for p in particles:
            if p.id in seen:
                raise ParticleValidationError(f"duplicate particle id {p.id}")
            seen.add(p.id)
        if box is None:
            box = _padded_bounds(particles)
        x_min, x_max, y_min, y_max = box
        for p in particles:
            if not (x_min <= p.x <= x_max and y_min <= p.y <= y_max):
                raise ParticleValidationError(
                    f"particle {p.id} at ({p.x:g}, {p.y:g}) outside box {box}"
                )
        self.particles = particles
        self.box = (float(x_min), float(x_max), float(y_min), float(y_max))
        self.labels = list(labels) if labels is not None else [p.id for p in particles]

    def __len__(self):
        return len(self.particles)

    def __iter__(self):
        return iter(self.particles)

    def positions(self):
        return np.array([(p.x, p.y) for p in self.particles], dtype=float).reshape(-1, 2)

    def radii(self):
        return np.array([p.radius for p in self.particles], dtype=float)

    def masses(self):
        return np.array([p.mass for p in self.particles], dtype=float)


def _padded_bounds(particles):
    if not particles:
        return (0.0, 1.0, 0.0, 1.0)
    pad = 2.0 * max(p.radius for p in particles)
    xs = [p.x for p in particles]
    ys = [p.y for p in particles]
    return (min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)


def load_particles(path, density=DEFAULT_DENSITY):
    """Read a `id x y radius [mass]` text file; ids are renumbered 0..N-1.

    Missing masses default to the sphere mass at ``density``.  Original file
    ids are kept in the returned set's label map.
    """
    particles = []
    labels = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) not in (4, 5):
                raise ParticleFileError(
                    f"{path}:{lineno}: expected 'id x y radius [mass]', got {len(fields)} fields"
                )
            try:
                orig_id = int(fields[0])
                x, y, radius = (float(v) for v in fields[1:4])
                mass = float(fields[4]) if len(fields) == 5 else sphere_mass(radius, density)
            except ValueError as exc:
                raise ParticleFileError(f"{path}:{lineno}: {exc}") from None
            if orig_id in labels:
                raise ParticleValidationError(f"{path}:{lineno}: duplicate id {orig_id}")
            particles.append(Particle(len(particles), x, y, radius, mass))
            labels.append(orig_id)
    return ParticleSet(particles, labels=labels)


def write_particles(pset, path):
    """Write the text format read by load_particles (12 significant digits)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# id x y radius mass\n")
        for p, label in zip(pset.particles, pset.labels):
            fh.write(f"{label} {p.x:.12g} {p.y:.12g} {p.radius:.12g} {p.mass:.12g}\n")


def generate_hex_packing(shells, radius=DEFAULT_RADIUS, density=DEFAULT_DENSITY):
    """Hexagonal packing of touching equal discs: 1 + 3*s*(s+1) particles.

    shells=2 gives the 19-particle hand-built hexagon with four distinct
    coordination classes (center, inner ring, corner and edge boundary nodes).
    """
    if shells < 0:
        raise ValueError("shells must be >= 0")
    spacing = 2.0 * radius
    coords = []
    for i in range(-shells, shells + 1):
        for j in range(-shells, shells + 1):
            if abs(i + j) > shells:
                continue
            x = spacing * (i + 0.5 * j)
            y = spacing * (_SQRT3 / 2.0) * j
            coords.append((x, y))
    coords.sort(key=lambda c: (round(c[1] / radius), round(c[0] / radius)))
    mass = sphere_mass(radius, density)
    particles = [Particle(k, x, y, radius, mass) for k, (x, y) in enumerate(coords)]
    return ParticleSet(particles)


def generate_square_region_packing(rows, cols, radius=DEFAULT_RADIUS, density=DEFAULT_DENSITY):
    """Triangular-lattice rows filling a rectangular region.

    Rows sit sqrt(3)*radius apart and alternate a one-radius x offset, so every
    interior particle touches six neighbors.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    spacing = 2.0 * radius
    mass = sphere_mass(radius, density)
    particles = []
    for r in range(rows):
        x_off = radius if r % 2 else 0.0
        y = r * (_SQRT3 / 2.0) * spacing
        for c in range(cols):
            particles.append(Particle(len(particles), x_off + c * spacing, y, radius, mass))
    return ParticleSet(particles)
