"""Contact-network abstraction of a packing: sparse symmetric 0/1 adjacency."""

import collections

import numpy as np
from scipy import sparse
from scipy.spatial import cKDTree

DUPLICATE_DISTANCE = 1e-9  # m; closer pairs would make a singular duplicate-node matrix


class NetworkError(ValueError):
    pass


class Network:
    """Undirected unweighted graph with node positions.

    Edges are stored as a set of (i, j) pairs with i < j; a CSR matrix is kept
    for matrix-vector products.  Instances are immutable after construction.
    """

    def __init__(self, n, edges, positions):
        n = int(n)
        pos = np.asarray(positions, dtype=float).reshape(n, 2)
        edge_set = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise NetworkError(f"self-loop on node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise NetworkError(f"edge ({i}, {j}) out of range for n={n}")
            edge_set.add((min(i, j), max(i, j)))
        self.n = n
        self.edges = frozenset(edge_set)
        self.m = len(edge_set)
        self.positions = pos
        degrees = np.zeros(n, dtype=int)
        for i, j in edge_set:
            degrees[i] += 1
            degrees[j] += 1
        self.degrees = degrees
        if edge_set:
            ii, jj = np.array(sorted(edge_set)).T
            rows = np.concatenate([ii, jj])
            cols = np.concatenate([jj, ii])
            data = np.ones(2 * self.m)
            self._csr = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
        else:
            self._csr = sparse.csr_matrix((n, n))

    def matvec(self, v):
        return self._csr.dot(v)

    def adjacency(self):
        """Dense 0/1 adjacency matrix (small graphs only)."""
        return self._csr.toarray()

    def neighbors(self):
        """Adjacency lists, each sorted ascending."""
        adj = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
            adj[j].append(i)
        return [sorted(a) for a in adj]

    def subgraph(self, nodes):
        """Induced subgraph; returns (Network, original-node list)."""
        nodes = sorted(int(v) for v in nodes)
        index = {v: k for k, v in enumerate(nodes)}
        sub_edges = [
            (index[i], index[j]) for i, j in self.edges if i in index and j in index
        ]
        return Network(len(nodes), sub_edges, self.positions[nodes]), nodes


def connected_components(net):
    """List of node lists, one per component, each sorted; largest first."""
    adj = net.neighbors()
    seen = [False] * net.n
    comps = []
    for start in range(net.n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def build_adjacency(pset, contact_tolerance=1e-3):
    """Contact graph of a packing: edge iff |r_i - r_j| <= (R_i + R_j)(1 + tol).

    The tolerance absorbs the residual micro gaps/overlaps of simulated
    packings.  Near-coincident particle pairs are rejected.
    """
    if contact_tolerance < 0:
        raise ValueError("contact_tolerance must be >= 0")
    pos = pset.positions()
    radii = pset.radii()
    n = len(pset)
    edges = []
    if n > 1:
        tree = cKDTree(pos)
        cutoff = 2.0 * radii.max() * (1.0 + contact_tolerance)
        for i, j in sorted(tree.query_pairs(cutoff)):
            d = float(np.hypot(*(pos[i] - pos[j])))
            if d < DUPLICATE_DISTANCE:
                raise NetworkError(
                    f"particles {i} and {j} coincide (distance {d:g} m); "
                    "duplicate nodes make the adjacency matrix singular"
                )
            if d <= (radii[i] + radii[j]) * (1.0 + contact_tolerance):
                edges.append((i, j))
    return Network(n, edges, pos)


def average_degree(net):
    """Mean coordination number over all nodes."""
    if net.n < 1:
        raise NetworkError("average degree of an empty network is undefined")
    return float(net.degrees.mean())


def coordination_histogram(net):
    """Map degree -> node count."""
    return dict(collections.Counter(int(k) for k in net.degrees))


def export_adjacency_image(net, path):
    """Write the adjacency matrix as a binary PGM (P5): 1 -> white, 0 -> black."""
    if net.n < 1:
        raise NetworkError("cannot export an empty network")
    img = np.zeros((net.n, net.n), dtype=np.uint8)
    for i, j in net.edges:
        img[i, j] = 255
        img[j, i] = 255
    with open(path, "wb") as fh:
        fh.write(f"P5\n{net.n} {net.n}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def export_edge_list(net, path):
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in sorted(net.edges):
            fh.write(f"{i} {j}\n")


def load_edge_list(path, positions=None):
    """Read an `i j` edge list; positions default to zeros (graph-only input)."""
    edges = []
    n = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            i, j = (int(v) for v in line.split())
            edges.append((i, j))
            n = max(n, i + 1, j + 1)
    if positions is None:
        positions = np.zeros((n, 2))
    return Network(n, edges, positions)
