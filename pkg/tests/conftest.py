import math

import numpy as np
import pytest

from granet.network import Network
from granet.particles import Particle, ParticleSet, sphere_mass

R = 1e-3
SQRT3 = math.sqrt(3.0)

# Structure-I analogue: triangle 0-1-2 with pendant 3 on the hub node 2.
PAW_EDGES = [(0, 1), (0, 2), (1, 2), (2, 3)]
PAW_POSITIONS = np.array(
    [
        [0.0, 0.0],
        [2 * R, 0.0],
        [R, SQRT3 * R],
        [R, SQRT3 * R + 2 * R],
    ]
)


@pytest.fixture
def paw_network():
    return Network(4, PAW_EDGES, PAW_POSITIONS)


@pytest.fixture
def paw_particles():
    mass = sphere_mass(R)
    return ParticleSet(
        [Particle(i, x, y, R, mass) for i, (x, y) in enumerate(PAW_POSITIONS)]
    )


@pytest.fixture
def paw_file(tmp_path, paw_particles):
    from granet.particles import write_particles

    path = tmp_path / "paw.txt"
    write_particles(paw_particles, path)
    return path


def complete_graph(n):
    return Network(n, [(i, j) for i in range(n) for j in range(i + 1, n)], np.zeros((n, 2)))


def path_graph(n):
    return Network(n, [(i, i + 1) for i in range(n - 1)], np.zeros((n, 2)))


def random_geometric_network(rng, n, radius=None):
    """Random connected geometric graph with positions (rejection-sampled)."""
    while True:
        pos = rng.random((n, 2))
        radius = radius or 0.45
        edges = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if np.hypot(*(pos[i] - pos[j])) <= radius
        ]
        net = Network(n, edges, pos)
        from granet.network import connected_components

        if len(connected_components(net)) == 1 and net.m >= 1:
            return net
