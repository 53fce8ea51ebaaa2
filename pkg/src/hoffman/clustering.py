"""Exact lambda-clustering number by restricted-growth-string enumeration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coloring import CapExceeded
from .graph import WeightedGraph
from .spectral import largest_eigenvalue

CLUSTERING_MAX_N = 11
FEASIBILITY_TOL = 1e-9


class InfeasibleThreshold(ValueError):
    """Raised for lambda < 0: a single vertex already has top eigenvalue 0."""


@dataclass(frozen=True)
class Clustering:
    assignment: tuple[int, ...]
    clusters: tuple[tuple[int, ...], ...]
    top_eigenvalues: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.clusters)


def cluster_top_eigenvalue(g: WeightedGraph, vertices) -> float:
    vs = sorted(vertices)
    a = g.matrix()[np.ix_(vs, vs)]
    return largest_eigenvalue(a)


def make_clustering(g: WeightedGraph, assignment: list[int] | tuple[int, ...]) -> Clustering:
    k = max(assignment, default=-1) + 1
    clusters = tuple(tuple(v for v in range(g.n) if assignment[v] == t) for t in range(k))
    if any(not c for c in clusters):
        raise ValueError("cluster labels must be contiguous")
    tops = tuple(cluster_top_eigenvalue(g, c) for c in clusters)
    return Clustering(tuple(assignment), clusters, tops)


def is_clustering(g: WeightedGraph, cl: Clustering, lam: float, tol: float = FEASIBILITY_TOL) -> bool:
    covered = sorted(v for c in cl.clusters for v in c)
    if covered != list(range(g.n)):
        return False
    return all(cluster_top_eigenvalue(g, c) <= lam + tol for c in cl.clusters)


def clustering_number_exact(
    g: WeightedGraph, lam: float, cap: int = CLUSTERING_MAX_N, tol: float = FEASIBILITY_TOL
) -> tuple[int, Clustering]:
    """Minimal number of clusters whose induced subgraphs all have top eigenvalue <= lam.

    Set partitions are generated as restricted-growth strings in
    lexicographic order for k = 1, 2, ...; a partial block whose top
    eigenvalue already exceeds lam is abandoned (top eigenvalues only grow
    when vertices are added, by interlacing).  The first feasible string
    found for the smallest k is the witness.
    """
    if lam < 0:
        raise InfeasibleThreshold(f"no {lam}-clustering exists: single vertices have top eigenvalue 0")
    if g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds the clustering cap {cap}")
    n = g.n
    if n == 0:
        return 0, Clustering((), (), ())
    a = g.matrix()
    cache: dict[int, bool] = {}

    def ok(mask: int) -> bool:
        hit = cache.get(mask)
        if hit is None:
            vs = [v for v in range(n) if mask >> v & 1]
            hit = largest_eigenvalue(a[np.ix_(vs, vs)]) <= lam + tol
            cache[mask] = hit
        return hit

    for k in range(1, n + 1):
        rgs = [0] * n
        blocks = [0] * k

        def extend(v: int, used: int) -> bool:
            if v == n:
                return True
            for b in range(min(used + 1, k)):
                mask = blocks[b] | (1 << v)
                if not ok(mask):
                    continue
                old = blocks[b]
                blocks[b], rgs[v] = mask, b
                if extend(v + 1, max(used, b + 1)):
                    return True
                blocks[b] = old
            return False

        if extend(0, 0):
            return k, make_clustering(g, rgs)
    raise AssertionError("singletons always form a clustering for lam >= 0")
