"""Community assignments shared by the spectral and Potts detectors."""

import numpy as np


class Partition:
    """Dense node -> community assignment with an attached objective score."""

    def __init__(self, assignment, score=None):
        assignment = np.asarray(assignment, dtype=int)
        if assignment.ndim != 1:
            raise ValueError("assignment must be one-dimensional")
        self.assignment = renumber(assignment)
        self.n_communities = int(self.assignment.max()) + 1 if assignment.size else 0
        self.score = None if score is None else float(score)

    def communities(self):
        """List of node lists, indexed by community id."""
        out = [[] for _ in range(self.n_communities)]
        for node, c in enumerate(self.assignment):
            out[c].append(node)
        return out

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.assignment, other.assignment)

    def __repr__(self):
        return f"Partition(n={self.assignment.size}, communities={self.n_communities}, score={self.score})"


def renumber(assignment):
    """Relabel community ids densely by first occurrence (canonical form)."""
    assignment = np.asarray(assignment, dtype=int)
    mapping = {}
    out = np.empty_like(assignment)
    for idx, c in enumerate(assignment):
        if c not in mapping:
            mapping[c] = len(mapping)
        out[idx] = mapping[c]
    return out


def write_partition(path, part):
    """Dump `node_id community_id` lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for node, c in enumerate(part.assignment):
            fh.write(f"{node} {c}\n")


def load_partition(path):
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            node, c = (int(v) for v in line.split())
            pairs.append((node, c))
    pairs.sort()
    return Partition([c for _, c in pairs])
