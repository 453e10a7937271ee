"""Eigen-decomposition of contact networks: power iteration, subspace iteration,
component binning and centrality classification."""

import numpy as np

from .network import connected_components


class EigenError(RuntimeError):
    pass


class EigenPair:
    __slots__ = ("value", "vector")

    def __init__(self, value, vector):
        self.value = float(value)
        self.vector = np.asarray(vector, dtype=float)

    def __repr__(self):
        return f"EigenPair(value={self.value:.6g}, n={self.vector.size})"


class EigenSet:
    """Eigenpairs ordered by descending eigenvalue, mutually orthogonal vectors."""

    def __init__(self, pairs):
        self.pairs = list(pairs)

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, k):
        return self.pairs[k]

    def values(self):
        return np.array([p.value for p in self.pairs])

    def vectors(self):
        return np.column_stack([p.vector for p in self.pairs])


class BinnedVector:
    """Equal-width binning of a vector's components (10 bins by default)."""

    def __init__(self, bin_edges, bin_of, counts):
        self.bin_edges = np.asarray(bin_edges, dtype=float)
        self.bin_of = np.asarray(bin_of, dtype=int)
        self.counts = np.asarray(counts, dtype=int)


def _fix_sign(v):
    """Deterministic orientation: component sum positive, else first nonzero positive."""
    s = v.sum()
    if abs(s) > 1e-12:
        return v if s > 0 else -v
    nz = np.nonzero(np.abs(v) > 1e-12)[0]
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _require_connected(net):
    comps = connected_components(net)
    if len(comps) > 1:
        sizes = ", ".join(str(len(c)) for c in comps)
        heads = "; ".join(str(c[:6]) for c in comps)
        raise EigenError(
            f"network is disconnected ({len(comps)} components of sizes {sizes}; "
            f"leading nodes {heads}); analyze each component separately"
        )


def principal_eigenpair(net, tol=1e-10, max_iter=100000):
    """Largest-eigenvalue pair by shifted power iteration.

    The returned vector is unit length with all components non-negative up to
    roundoff (Perron-Frobenius sign convention).  Convergence is declared when
    successive Rayleigh quotients agree to tol and the residual is below
    tol * (1 + |lambda|).
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    _require_connected(net)
    n = net.n
    if n == 1:
        return EigenPair(0.0, np.ones(1))
    # Shift by 1 so the Perron value strictly dominates in magnitude even for
    # bipartite graphs (where lambda_min = -lambda_max).
    shift = 1.0
    v = np.full(n, 1.0 / np.sqrt(n))
    lam = 0.0
    for _ in range(max_iter):
        w = net.matvec(v) + shift * v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            break
        v_new = w / norm
        av = net.matvec(v_new)
        lam_new = float(v_new @ av)
        residual = np.linalg.norm(av - lam_new * v_new)
        if abs(lam_new - lam) < tol * (1.0 + abs(lam_new)) and residual <= tol * (
            1.0 + abs(lam_new)
        ):
            return EigenPair(lam_new, _fix_sign(v_new))
        v, lam = v_new, lam_new
    raise EigenError(f"power iteration did not converge in {max_iter} iterations")


def top_k_eigenpairs(net, k, tol=1e-10, max_iter=20000, seed=0):
    """Top-k eigenpairs by algebraic value via shifted subspace iteration.

    A positive shift of (max degree + 1) makes the operator positive definite,
    so magnitude ordering equals algebraic ordering.  Ritz extraction on the
    iterated block resolves clustered eigenvalues; a few guard vectors speed up
    convergence at the block boundary.
    """
    _require_connected(net)
    n = net.n
    if not (1 <= k <= n):
        raise ValueError(f"k must be in 1..{n}, got {k}")
    if n == 1:
        return EigenSet([EigenPair(0.0, np.ones(1))])
    shift = float(net.degrees.max()) + 1.0
    p = min(n - k, 4)
    b = k + p
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, b)))
    theta_prev = None
    for it in range(max_iter):
        z = net.matvec(q) + shift * q
        q, _ = np.linalg.qr(z)
        az = net.matvec(q) + shift * q
        h = q.T @ az
        h = 0.5 * (h + h.T)
        theta, s = np.linalg.eigh(h)
        order = np.argsort(theta)[::-1]
        theta, s = theta[order], s[:, order]
        ritz = q @ s
        av = net.matvec(ritz[:, :k])
        lam = theta[:k] - shift
        res = np.linalg.norm(av - ritz[:, :k] * lam, axis=0)
        if np.all(res <= tol * (1.0 + np.abs(lam))):
            if theta_prev is not None and np.max(np.abs(theta[:k] - theta_prev)) <= tol * (
                1.0 + np.abs(theta[:k]).max()
            ):
                pairs = [
                    EigenPair(lam[i], _fix_sign(ritz[:, i] / np.linalg.norm(ritz[:, i])))
                    for i in range(k)
                ]
                return EigenSet(pairs)
        theta_prev = theta[:k].copy()
        q = ritz
    raise EigenError(f"subspace iteration did not converge in {max_iter} iterations")


def bin_vector(v, nbins=10):
    """Equal-width bins over [min(v), max(v)]; the maximum lands in the last bin.

    An all-equal vector degenerates to every node in bin 0 (edges are placed
    above the common value so the invariants still hold).
    """
    v = np.asarray(v, dtype=float)
    if v.size < 1:
        raise ValueError("cannot bin an empty vector")
    if nbins < 1:
        raise ValueError("nbins must be >= 1")
    lo, hi = float(v.min()), float(v.max())
    if hi == lo:
        edges = np.linspace(lo, lo + 1.0, nbins + 1)
        bin_of = np.zeros(v.size, dtype=int)
    else:
        edges = np.linspace(lo, hi, nbins + 1)
        bin_of = np.minimum(((v - lo) / (hi - lo) * nbins).astype(int), nbins - 1)
    counts = np.bincount(bin_of, minlength=nbins)
    return BinnedVector(edges, bin_of, counts)


def centrality_classes(v, merge_tol=1e-6):
    """Group nodes whose components agree to merge_tol * range; most central first.

    Returns a list of (level, node list) with level the class mean.
    """
    if merge_tol <= 0:
        raise ValueError("merge_tol must be > 0")
    v = np.asarray(v, dtype=float)
    span = float(v.max() - v.min())
    if span == 0.0:
        return [(float(v[0]), list(range(v.size)))]
    order = np.argsort(-v, kind="stable")
    classes = []
    current = [int(order[0])]
    anchor = v[order[0]]
    for idx in order[1:]:
        if anchor - v[idx] <= merge_tol * span:
            current.append(int(idx))
        else:
            classes.append(current)
            current = [int(idx)]
            anchor = v[idx]
    classes.append(current)
    return [(float(np.mean(v[c])), sorted(c)) for c in classes]


def write_eigenvector(path, vector, binned=None, nbins=10):
    """Dump `node_id component bin_index` lines."""
    if binned is None:
        binned = bin_vector(vector, nbins)
    with open(path, "w", encoding="utf-8") as fh:
        for i, (comp, b) in enumerate(zip(vector, binned.bin_of)):
            fh.write(f"{i} {comp:.12g} {b}\n")


def write_spectrum(path, eigenset):
    """Dump `rank lambda` lines (rank 1 = principal)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rank, pair in enumerate(eigenset.pairs, start=1):
            fh.write(f"{rank} {pair.value:.12g}\n")
