"""Discrete-element engine: Gear 5-value predictor-corrector, Verlet neighbor
lists, viscoelastic Hertz normal contacts with Haff-Werner tangential friction,
and a centripetal packing protocol."""

import math
from dataclasses import dataclass, fields

import numpy as np

from .particles import Particle, ParticleSet

# Gear corrector coefficients, 5-value stack, velocity-dependent forces.
GEAR_C = (19.0 / 90.0, 3.0 / 4.0, 1.0, 1.0 / 2.0, 1.0 / 12.0)

_FACTORIALS = (1.0, 1.0, 2.0, 6.0, 24.0)


class SimulationError(RuntimeError):
    pass


@dataclass
class SimConfig:
    """Physical constants and run control; defaults follow the standard
    monodisperse steel-like disc setup."""

    n: int = 200
    radius: float = 0.01  # m
    young_modulus: float = 1e9  # Pa
    poisson: float = 0.3
    friction: float = 0.5
    damping: float = 0.01  # s, normal viscoelastic constant
    tangential_damping: float = 10.0  # N s / m
    density: float = 8000.0  # kg / m^3
    dt: float = 1e-6  # s
    gravity: float = 9.81  # m / s^2, centripetal drive magnitude per unit mass
    verlet_skin: float = 0.0  # m; 0 -> 10% of radius
    box: float = 0.0  # m, square box side; 0 -> sized from initial_fraction
    initial_fraction: float = 0.12
    max_steps: int = 500000
    ke_threshold: float = 0.0  # J; 0 -> disabled
    target_fraction: float = 0.0  # 0 -> disabled
    record_interval: int = 1000

    def __post_init__(self):
        for name in (
            "radius",
            "young_modulus",
            "friction",
            "damping",
            "tangential_damping",
            "density",
            "dt",
            "gravity",
        ):
            if getattr(self, name) < 0 or (name in ("radius", "density", "dt") and getattr(self, name) <= 0):
                raise ValueError(f"{name} must be positive")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 < self.initial_fraction < 0.9:
            raise ValueError("initial_fraction must be in (0, 0.9)")
        if self.verlet_skin == 0.0:
            self.verlet_skin = 0.1 * self.radius
        if self.box == 0.0:
            self.box = math.sqrt(self.n * math.pi * self.radius**2 / self.initial_fraction)

    @property
    def mass(self):
        return (4.0 / 3.0) * math.pi * self.radius**3 * self.density

    @property
    def hertz_prefactor(self):
        """2 Y sqrt(R_eff) / (3 (1 - nu^2)) for the equal-sphere pair."""
        r_eff = 0.5 * self.radius
        return 2.0 * self.young_modulus * math.sqrt(r_eff) / (3.0 * (1.0 - self.poisson**2))

    @classmethod
    def from_file(cls, path):
        """Parse a `key = value` config file; unknown keys are rejected."""
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected 'key = value'")
                key, value = (s.strip() for s in line.split("=", 1))
                if key not in known:
                    raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
                cast = int if known[key] in (int, "int") else float
                kwargs[key] = cast(value)
        return cls(**kwargs)

    def to_file(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for f in fields(self):
                fh.write(f"{f.name} = {getattr(self, f.name):.12g}\n")


class VerletList:
    """Candidate contact pairs within a skin distance of touching."""

    def __init__(self, pairs_i, pairs_j, ref_positions, skin):
        self.pairs_i = pairs_i
        self.pairs_j = pairs_j
        self.ref_positions = ref_positions
        self.skin = skin

    def neighbors_of(self, i):
        out = sorted(
            set(self.pairs_j[self.pairs_i == i]) | set(self.pairs_i[self.pairs_j == i])
        )
        return [int(x) for x in out]

    def stale(self, positions):
        """True once any particle has moved more than skin/2 since the build."""
        disp = np.linalg.norm(positions - self.ref_positions, axis=1)
        return bool(disp.max() > 0.5 * self.skin)


class SimState:
    """Per-particle derivative stack (position through 4th time derivative),
    plus the active Verlet list."""

    def __init__(self, config, positions):
        n = len(positions)
        self.config = config
        # deriv[l] holds d^l r / dt^l, shape (n, 2)
        self.deriv = np.zeros((5, n, 2))
        self.deriv[0] = positions
        self.radii = np.full(n, config.radius)
        self.masses = np.full(n, config.mass)
        self.forces = np.zeros((n, 2))
        self.time = 0.0
        self.step = 0
        self.verlet = None

    @property
    def n(self):
        return self.deriv.shape[1]

    @property
    def positions(self):
        return self.deriv[0]

    @property
    def velocities(self):
        return self.deriv[1]

    def kinetic_energy(self):
        return 0.5 * float((self.masses * (self.velocities**2).sum(axis=1)).sum())

    def check_finite(self):
        if not np.isfinite(self.deriv).all():
            raise SimulationError(f"non-finite state at step {self.step}")

    def to_particle_set(self):
        box = (0.0, self.config.box, 0.0, self.config.box)
        pos = np.clip(self.positions, 0.0, self.config.box)
        particles = [
            Particle(i, pos[i, 0], pos[i, 1], self.radii[i], self.masses[i])
            for i in range(self.n)
        ]
        return ParticleSet(particles, box=box)


def initialize(config, seed=0):
    """Rejection-sample non-overlapping particles uniformly in the box,
    all derivatives zero.  Deterministic for a fixed seed."""
    rng = np.random.default_rng(seed)
    n, radius, box = config.n, config.radius, config.box
    fraction = n * math.pi * radius**2 / box**2
    if fraction > 0.5:
        raise SimulationError(
            f"requested packing fraction {fraction:.2f} too dense for random "
            "sequential placement; use a larger box"
        )
    positions = np.empty((n, 2))
    placed = 0
    attempts_left = 1000 * n
    while placed < n:
        if attempts_left <= 0:
            raise SimulationError(
                f"failed to place {n} particles without overlap; use a larger box"
            )
        attempts_left -= 1
        candidate = radius + rng.random(2) * (box - 2.0 * radius)
        if placed:
            d2 = ((positions[:placed] - candidate) ** 2).sum(axis=1)
            if d2.min() < (2.0 * radius) ** 2:
                continue
        positions[placed] = candidate
        placed += 1
    return SimState(config, positions)


def predict(state, dt):
    """Taylor-expand every derivative level forward by dt (Gear predictor)."""
    d = state.deriv
    for level in range(4):
        adv = np.zeros_like(d[level])
        power = 1.0
        for order in range(1, 5 - level):
            power *= dt / order
            adv += power * d[level + order]
        d[level] += adv
    return state


def build_verlet(state, skin=None):
    """All pairs whose surface gap is at most the skin distance."""
    skin = state.config.verlet_skin if skin is None else skin
    if skin <= 0:
        raise ValueError("skin must be > 0")
    from scipy.spatial import cKDTree

    pos = state.positions
    cutoff = 2.0 * state.radii.max() + skin
    pairs = sorted(cKDTree(pos).query_pairs(cutoff))
    keep_i, keep_j = [], []
    for i, j in pairs:
        gap = float(np.hypot(*(pos[i] - pos[j]))) - (state.radii[i] + state.radii[j])
        if gap <= skin:
            keep_i.append(i)
            keep_j.append(j)
    vlist = VerletList(
        np.array(keep_i, dtype=int), np.array(keep_j, dtype=int), pos.copy(), skin
    )
    state.verlet = vlist
    return vlist


def compute_forces(state, config=None, vlist=None):
    """Contact + wall + centripetal forces on the current (predicted) state.

    Normal contacts use the viscoelastic Hertz law
        F_n = kappa * (xi^(3/2) + A sqrt(xi) xi_dot),  clamped at >= 0,
    tangential contacts the Haff-Werner law capped by Coulomb friction.
    Pair forces are applied antisymmetrically, so momentum is conserved
    exactly when the external drive is off.
    """
    config = config or state.config
    vlist = vlist or state.verlet
    n = state.n
    pos, vel = state.positions, state.velocities
    forces = np.zeros((n, 2))
    if vlist is not None and vlist.pairs_i.size:
        ii, jj = vlist.pairs_i, vlist.pairs_j
        rij = pos[ii] - pos[jj]
        dist = np.linalg.norm(rij, axis=1)
        xi = (state.radii[ii] + state.radii[jj]) - dist
        touching = xi > 0.0
        if touching.any():
            ii, jj = ii[touching], jj[touching]
            rij, dist, xi = rij[touching], dist[touching], xi[touching]
            normal = rij / dist[:, None]
            vrel = vel[ii] - vel[jj]
            xi_dot = -np.einsum("ij,ij->i", vrel, normal)
            sqrt_xi = np.sqrt(xi)
            fn = config.hertz_prefactor * (xi * sqrt_xi + config.damping * sqrt_xi * xi_dot)
            np.maximum(fn, 0.0, out=fn)
            tangent = np.column_stack([-normal[:, 1], normal[:, 0]])
            vt = np.einsum("ij,ij->i", vrel, tangent)
            ft = -np.sign(vt) * np.minimum(
                config.tangential_damping * np.abs(vt), config.friction * fn
            )
            pair_force = fn[:, None] * normal + ft[:, None] * tangent
            np.add.at(forces, ii, pair_force)
            np.add.at(forces, jj, -pair_force)
    _add_wall_forces(forces, state, config)
    _add_centripetal(forces, state, config)
    return forces


def _add_wall_forces(forces, state, config):
    """Rigid walls via the same Hertz law against a half-space (R_eff = R)."""
    kappa = (
        2.0
        * config.young_modulus
        * np.sqrt(state.radii)
        / (3.0 * (1.0 - config.poisson**2))
    )
    pos, vel = state.positions, state.velocities
    for axis, side, inward in ((0, 0.0, 1.0), (0, config.box, -1.0), (1, 0.0, 1.0), (1, config.box, -1.0)):
        xi = state.radii - inward * (pos[:, axis] - side)
        mask = xi > 0.0
        if not mask.any():
            continue
        # Overlap grows while the particle moves toward the wall.
        xi_dot = -inward * vel[mask, axis]
        sqrt_xi = np.sqrt(xi[mask])
        fn = kappa[mask] * (xi[mask] * sqrt_xi + config.damping * sqrt_xi * xi_dot)
        fn = np.maximum(fn, 0.0)
        forces[mask, axis] += inward * fn


def _add_centripetal(forces, state, config):
    """Constant-magnitude drive m*g toward the box center."""
    if config.gravity == 0.0:
        return
    center = np.array([0.5 * config.box, 0.5 * config.box])
    to_center = center - state.positions
    dist = np.linalg.norm(to_center, axis=1)
    mask = dist > 1e-12
    forces[mask] += (
        (state.masses[mask] * config.gravity / dist[mask])[:, None] * to_center[mask]
    )


def correct(state, forces, config=None):
    """Gear corrector: scale the acceleration defect into every stack level."""
    config = config or state.config
    dt = config.dt
    accel = forces / state.masses[:, None]
    delta = accel - state.deriv[2]
    corr = 0.5 * dt * dt * delta
    if not np.isfinite(corr).all():
        raise SimulationError(f"non-finite correction at step {state.step}")
    for level in range(5):
        state.deriv[level] += GEAR_C[level] * (_FACTORIALS[level] / dt**level) * corr
    state.forces = forces
    return state


def measure_packing_fraction(pset, region):
    """Disc area of particles whose centers lie in the rectangular region,
    divided by the region area."""
    x_min, x_max, y_min, y_max = region
    area = (x_max - x_min) * (y_max - y_min)
    if area <= 0:
        raise ValueError(f"region {region} has non-positive area")
    total = 0.0
    for p in pset:
        if x_min <= p.x <= x_max and y_min <= p.y <= y_max:
            total += math.pi * p.radius**2
    return total / area


def cluster_packing_fraction(positions, radii, center, quantile=0.9):
    """Packing fraction of the disc (around `center`) holding the given
    quantile of particle centers; robust density measure for a central pile."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    radii = np.asarray(radii, dtype=float)
    dist = np.linalg.norm(positions - np.asarray(center, dtype=float), axis=1)
    r_q = float(np.quantile(dist, quantile))
    if r_q <= 0:
        return 0.0
    inside = dist <= r_q
    return float((math.pi * radii[inside] ** 2).sum() / (math.pi * r_q**2))


def run(config, seed=0, observers=None):
    """Full packing run: predict, maintain the Verlet list, compute forces,
    correct, record; terminate on max_steps, the kinetic-energy threshold, or
    the target packing fraction.

    Returns (ParticleSet, series) with series rows (step, ke, fraction).
    """
    state = initialize(config, seed)
    build_verlet(state)
    series = []
    center = (0.5 * config.box, 0.5 * config.box)
    ke_bound = 1e3 * config.n * config.mass * config.gravity * config.box * math.sqrt(2.0)
    dt = config.dt
    for step in range(config.max_steps):
        state.step = step
        predict(state, dt)
        if state.verlet.stale(state.positions):
            build_verlet(state)
        forces = compute_forces(state, config)
        correct(state, forces, config)
        state.time += dt
        if step % config.record_interval == 0:
            state.check_finite()
            ke = state.kinetic_energy()
            fraction = cluster_packing_fraction(state.positions, state.radii, center)
            series.append((step, ke, fraction))
            if observers:
                for obs in observers:
                    obs(state, ke, fraction)
            if ke_bound > 0 and ke > ke_bound:
                raise SimulationError(
                    f"instability: kinetic energy {ke:.3g} J exceeded bound "
                    f"{ke_bound:.3g} J at step {step}"
                )
            if step > 0 and config.ke_threshold > 0 and ke < config.ke_threshold:
                break
            if config.target_fraction > 0 and fraction >= config.target_fraction:
                break
    state.check_finite()
    return state.to_particle_set(), series


def write_series(path, series):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,ke,packing_fraction\n")
        for step, ke, fraction in series:
            fh.write(f"{step},{ke:.12g},{fraction:.12g}\n")
