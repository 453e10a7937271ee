"""scikit-learn compatible wrappers: contact-graph clustering and
eigenvector-centrality scoring directly from particle coordinate arrays.

X is an (n_samples, 2) array of centers or (n_samples, 3) with a per-particle
radius column; with two columns the radius defaults to half the smallest
nearest-neighbor distance, so touching monodisperse discs connect.
"""

import numpy as np
from scipy.spatial import cKDTree
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import eigen, potts, spectral
from .network import build_adjacency
from .particles import Particle, ParticleSet, sphere_mass


def _as_particle_set(X):
    X = check_array(X, dtype=float)
    if X.shape[1] not in (2, 3):
        raise ValueError(f"X must have 2 or 3 columns, got {X.shape[1]}")
    if X.shape[1] == 3:
        radii = X[:, 2]
        if np.any(radii <= 0):
            raise ValueError("radius column must be positive")
    else:
        if len(X) > 1:
            d, _ = cKDTree(X[:, :2]).query(X[:, :2], k=2)
            radii = np.full(len(X), 0.5 * float(d[:, 1].min()))
        else:
            radii = np.ones(len(X))
    particles = [
        Particle(i, X[i, 0], X[i, 1], radii[i], sphere_mass(radii[i]))
        for i in range(len(X))
    ]
    return ParticleSet(particles)


class PottsCommunities(ClusterMixin, BaseEstimator):
    """Community detection by greedy Potts-modularity maximization on the
    contact graph of the input packing."""

    def __init__(self, cutoff=None, contact_tolerance=1e-3, restarts=8, seed=0):
        self.cutoff = cutoff
        self.contact_tolerance = contact_tolerance
        self.restarts = restarts
        self.seed = seed

    def fit(self, X, y=None):
        pset = _as_particle_set(X)
        self.network_ = build_adjacency(pset, self.contact_tolerance)
        cutoff = self.cutoff if self.cutoff is not None else potts.default_cutoff(pset)
        params = potts.PottsParams(cutoff)
        part = potts.maximize_modularity(
            self.network_, params, restarts=self.restarts, seed=self.seed
        )
        self.labels_ = part.assignment
        self.modularity_ = part.score
        return self


class SpectralCommunities(ClusterMixin, BaseEstimator):
    """Community detection by recursive eigenvector sign bisection with a
    Newman-modularity acceptance test."""

    def __init__(self, contact_tolerance=1e-3, max_depth=32):
        self.contact_tolerance = contact_tolerance
        self.max_depth = max_depth

    def fit(self, X, y=None):
        pset = _as_particle_set(X)
        self.network_ = build_adjacency(pset, self.contact_tolerance)
        part = spectral.spectral_partition(self.network_, max_depth=self.max_depth)
        self.labels_ = part.assignment
        self.modularity_ = part.score
        return self


class EigenvectorCentrality(TransformerMixin, BaseEstimator):
    """Principal-eigenvector node centrality of the contact graph.

    Transductive: transform returns the centralities of the fitted packing as
    an (n, 1) column.
    """

    def __init__(self, contact_tolerance=1e-3, tol=1e-10):
        self.contact_tolerance = contact_tolerance
        self.tol = tol

    def fit(self, X, y=None):
        pset = _as_particle_set(X)
        self.network_ = build_adjacency(pset, self.contact_tolerance)
        pair = eigen.principal_eigenpair(self.network_, tol=self.tol)
        self.eigenvalue_ = pair.value
        self.centralities_ = pair.vector
        return self

    def transform(self, X=None):
        check_is_fitted(self, "centralities_")
        return self.centralities_.reshape(-1, 1)
