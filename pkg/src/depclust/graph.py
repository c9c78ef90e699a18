"""Dependency graph over columns and its connected components (the clusters)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signature import SignatureResult, independent_columns, signature_matrix

DEFAULT_EDGE_TOL = 1e-8


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def groups(self, members) -> list[list[int]]:
        by_root: dict[int, list[int]] = {}
        for x in sorted(members):
            by_root.setdefault(self.find(x), []).append(x)
        return sorted(by_root.values(), key=lambda g: g[0])


@dataclass(frozen=True)
class DependencyGraph:
    n: int
    edges: frozenset[tuple[int, int]]  # (i, j) with i < j, 0-based
    edge_tol: float

    def neighbors(self, i: int) -> list[int]:
        out = [b for a, b in self.edges if a == i] + [a for a, b in self.edges if b == i]
        return sorted(out)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_connected(self, nodes) -> bool:
        """Whether the subgraph induced on ``nodes`` is connected."""
        nodes = sorted(set(nodes))
        if len(nodes) <= 1:
            return True
        uf = UnionFind(self.n)
        keep = set(nodes)
        for a, b in self.edges:
            if a in keep and b in keep:
                uf.union(a, b)
        return len({uf.find(x) for x in nodes}) == 1


@dataclass(frozen=True)
class ClusterPartition:
    """Columns split into independent ones and maximally dependent clusters.

    Indices are 0-based. ``deficits[k]`` is ``|clusters[k]|`` minus the rank of
    that cluster's columns, read off as the trace of the cluster's diagonal
    block of ``S`` (the block is the projector onto the cluster's relations).
    """

    n: int
    independent: tuple[int, ...]
    clusters: tuple[tuple[int, ...], ...]
    deficits: tuple[int, ...]

    def cluster_of(self, j: int):
        """Cluster (tuple of members) containing column ``j``, or ``"independent"``."""
        return cluster_of(self, j)


def dependency_graph(sig: SignatureResult, edge_tol: float = DEFAULT_EDGE_TOL) -> DependencyGraph:
    if edge_tol < 0:
        raise ValueError("edge_tol must be >= 0")
    S = sig.S
    n = S.shape[0]
    mask = np.abs(S) > edge_tol
    np.fill_diagonal(mask, False)
    # independent nodes stay isolated whatever the noise in their rows
    isolated = np.diag(S) <= sig.zero_tolerance
    mask[isolated, :] = False
    mask[:, isolated] = False
    ii, jj = np.nonzero(np.triu(mask | mask.T, k=1))
    return DependencyGraph(n, frozenset(zip(ii.tolist(), jj.tolist())), float(edge_tol))


def find_clusters(graph: DependencyGraph, sig: SignatureResult) -> ClusterPartition:
    indep = independent_columns(sig)
    uf = UnionFind(graph.n)
    for a, b in graph.edges:
        uf.union(a, b)
    rest = [j for j in range(graph.n) if j not in indep]
    clusters = [tuple(g) for g in uf.groups(rest)]
    deficits = []
    for members in clusters:
        block = sig.S[np.ix_(members, members)]
        deficits.append(int(round(float(np.trace(block)))))
    return ClusterPartition(graph.n, tuple(sorted(indep)), tuple(clusters), tuple(deficits))


def cluster_of(partition: ClusterPartition, j: int):
    if not 0 <= j < partition.n:
        raise IndexError(f"column {j} out of range for {partition.n} columns")
    for members in partition.clusters:
        if j in members:
            return members
    return "independent"


def clusters_of(a, factors=None, zero_tolerance=None, edge_tol: float = DEFAULT_EDGE_TOL):
    """Convenience pipeline: signature, graph, partition for matrix ``a``."""
    sig = signature_matrix(a, factors, zero_tolerance)
    graph = dependency_graph(sig, edge_tol)
    return find_clusters(graph, sig), graph, sig
