"""Potts-model modularity for spatially embedded contact networks, with an
exhaustive small-N maximizer and a greedy move/merge heuristic."""

import numpy as np

from .network import NetworkError
from .partition import Partition

MAX_BRUTE_FORCE_NODES = 12  # Bell(12) ~ 4.2e6 partitions


class PottsParams:
    """Geometric neighborhood for the missing-edge penalty: pairs closer than
    the cutoff distance are penalized when disconnected."""

    __slots__ = ("x_c",)

    def __init__(self, x_c):
        if x_c <= 0:
            raise ValueError("cutoff distance must be > 0")
        self.x_c = float(x_c)

    def __repr__(self):
        return f"PottsParams(x_c={self.x_c:g})"


def default_cutoff(pset):
    """2.5x the mean particle diameter: nearest plus next-nearest neighbors."""
    return 2.5 * 2.0 * float(pset.radii().mean())


def pair_weights(net, params):
    """Symmetric pair-term matrix W.

    W[i, j] is the contribution of pair (i, j) before the community factor:
    the degree strength (k_i + k_j)/2 - <k> for connected pairs, minus its
    absolute value for disconnected pairs within the cutoff, zero otherwise.
    """
    if net.m < 1:
        raise NetworkError("Potts modularity is undefined for an edgeless network")
    if net.positions is None:
        raise NetworkError("Potts modularity requires node positions")
    k = net.degrees.astype(float)
    k_avg = k.mean()
    strength = 0.5 * (k[:, None] + k[None, :]) - k_avg
    adj = net.adjacency().astype(bool)
    diff = net.positions[:, None, :] - net.positions[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    within = dist < params.x_c  # theta(x_c - d) > 0, strict
    w = np.where(adj, strength, np.where(within, -np.abs(strength), 0.0))
    np.fill_diagonal(w, 0.0)
    return w


def potts_modularity(net, part, params, weights=None):
    """Q = (1/2m) sum_{i<j} W_ij (2 delta(sigma_i, sigma_j) - 1),
    summed over unordered pairs."""
    if weights is None:
        weights = pair_weights(net, params)
    assignment = part.assignment if isinstance(part, Partition) else np.asarray(part, int)
    same = assignment[:, None] == assignment[None, :]
    signed = np.where(same, weights, -weights)
    return float(np.triu(signed, k=1).sum()) / (2.0 * net.m)


def brute_force_best_partition(net, params):
    """Exact maximizer by enumerating all set partitions (n <= 12).

    Ties resolve to the fewest communities, then the lexicographically
    smallest restricted-growth assignment.
    """
    n = net.n
    if n > MAX_BRUTE_FORCE_NODES:
        raise NetworkError(
            f"brute force limited to n <= {MAX_BRUTE_FORCE_NODES}, got {n}"
        )
    w = pair_weights(net, params)
    total = float(np.triu(w, k=1).sum())
    two_m = 2.0 * net.m
    assignment = np.zeros(n, dtype=int)
    best = {"q": -np.inf, "nc": n + 1, "sigma": None}

    def recurse(i, nblocks, s_same):
        if i == n:
            q = (2.0 * s_same - total) / two_m
            if q > best["q"] + 1e-12 or (
                abs(q - best["q"]) <= 1e-12 and nblocks < best["nc"]
            ):
                best.update(q=q, nc=nblocks, sigma=assignment.copy())
            return
        row = w[i]
        for b in range(nblocks):
            gain = float(row[:i][assignment[:i] == b].sum()) if i else 0.0
            assignment[i] = b
            recurse(i + 1, nblocks, s_same + gain)
        assignment[i] = nblocks
        recurse(i + 1, nblocks + 1, s_same)

    recurse(0, 0, 0.0)
    return Partition(best["sigma"], score=best["q"])


def maximize_modularity(net, params, restarts=8, seed=0):
    """Greedy maximizer: single-node reassignments to any community (or a
    fresh one) while the gain is positive, then community merges; the best of
    `restarts` randomized scan orders wins.  Deterministic for a fixed seed."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    n = net.n
    w = pair_weights(net, params)
    total = float(np.triu(w, k=1).sum())
    two_m = 2.0 * net.m
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        order = rng.permutation(n)
        sigma = _greedy_pass(w, order)
        q = (2.0 * _same_sum(w, sigma) - total) / two_m
        if best is None or q > best[0] + 1e-12:
            best = (q, sigma)
    q, sigma = best
    return Partition(sigma, score=q)


def _same_sum(w, sigma):
    same = sigma[:, None] == sigma[None, :]
    return float(np.triu(np.where(same, w, 0.0), k=1).sum())


def _greedy_pass(w, order):
    n = w.shape[0]
    sigma = np.arange(n)  # singleton start
    # comm_sums[i, c] = sum of w[i, j] over j currently in community c; with
    # singletons, community ids coincide with node ids.
    comm_sums = w.copy()
    live = set(range(n))
    # Move phase: repeatedly apply the single best node reassignment.  The
    # gain of moving i from c to t is 2*(S(i,t) - S(i,c))/2m; the common
    # 2/2m factor is dropped for the comparison.  Ties go to the node
    # earliest in the (per-restart) scan order.
    while True:
        live_ids = np.array(sorted(live))
        s = comm_sums[np.ix_(order, live_ids)]
        stay = comm_sums[order, sigma[order]]
        gains = s - stay[:, None]
        gains[live_ids[None, :] == sigma[order][:, None]] = -np.inf
        all_gains = np.concatenate([gains, -stay[:, None]], axis=1)
        flat = int(np.argmax(all_gains))
        row, col = divmod(flat, all_gains.shape[1])
        if all_gains[row, col] <= 1e-12:
            break
        i = int(order[row])
        c = int(sigma[i])
        if col == len(live_ids):
            # Fresh community: reuse any dead id (one exists, since i's old
            # community has another member or the gain would be zero).
            t = next(x for x in range(n) if x not in live)
            live.add(t)
        else:
            t = int(live_ids[col])
        sigma[i] = t
        comm_sums[:, c] -= w[:, i]
        comm_sums[:, t] += w[:, i]
        if not np.any(sigma == c):
            live.discard(c)
    # Merge phase: combine whole communities while that helps.
    while True:
        live_ids = sorted(live)
        c = len(live_ids)
        if c < 2:
            break
        merge = np.empty((c, c))
        for a_idx, a in enumerate(live_ids):
            merge[a_idx] = comm_sums[sigma == a][:, live_ids].sum(axis=0)
        merge[np.tril_indices(c)] = -np.inf
        flat = int(np.argmax(merge))
        a_idx, b_idx = divmod(flat, c)
        if merge[a_idx, b_idx] <= 1e-12:
            break
        a, b = live_ids[a_idx], live_ids[b_idx]
        members_b = np.nonzero(sigma == b)[0]
        sigma[members_b] = a
        comm_sums[:, a] += w[:, members_b].sum(axis=1)
        comm_sums[:, b] = 0.0
        live.discard(b)
    return sigma
