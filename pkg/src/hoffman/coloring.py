"""Exact chromatic number by DSATUR branch and bound."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import WeightedGraph

CHROMATIC_MAX_N = 40


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    color: tuple[int, ...]
    k: int

    def is_proper(self, g: WeightedGraph) -> bool:
        return len(self.color) == g.n and all(self.color[i] != self.color[j] for i, j in g.edges)

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, c in enumerate(self.color):
            out[c].append(v)
        return out


def greedy_clique(g: WeightedGraph) -> list[int]:
    """A maximal clique grown from each vertex in turn; the largest is returned."""
    best: list[int] = []
    for start in range(g.n):
        clique = [start]
        cand = set(g.neighbors(start))
        while cand:
            v = max(sorted(cand), key=lambda u: len(cand.intersection(g.neighbors(u))))
            clique.append(v)
            cand &= set(g.neighbors(v))
        if len(clique) > len(best):
            best = clique
    return best


def chromatic_number(g: WeightedGraph, cap: int = CHROMATIC_MAX_N) -> tuple[int, Coloring]:
    if g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds the chromatic-number cap {cap}")
    n = g.n
    if n == 0:
        return 0, Coloring((), 0)
    adj = [g.neighbors(v) for v in range(n)]
    clique = greedy_clique(g)
    lower = len(clique)

    colors = [-1] * n
    # seed the clique so its vertices get colors 0..lower-1 (symmetry breaking)
    for c, v in enumerate(clique):
        colors[v] = c
    best_k = n + 1
    best = colors[:]
    neighbor_colors = [dict() for _ in range(n)]  # color -> count among colored neighbors
    for v in clique:
        for u in adj[v]:
            neighbor_colors[u][colors[v]] = neighbor_colors[u].get(colors[v], 0) + 1

    def assign(v: int, c: int) -> None:
        colors[v] = c
        for u in adj[v]:
            nc = neighbor_colors[u]
            nc[c] = nc.get(c, 0) + 1

    def unassign(v: int) -> None:
        c = colors[v]
        colors[v] = -1
        for u in adj[v]:
            nc = neighbor_colors[u]
            nc[c] -= 1
            if not nc[c]:
                del nc[c]

    def pick() -> int:
        best_v, key = -1, None
        for v in range(n):
            if colors[v] < 0:
                k = (len(neighbor_colors[v]), sum(colors[u] < 0 for u in adj[v]), -v)
                if key is None or k > key:
                    best_v, key = v, k
        return best_v

    def search(used: int, remaining: int) -> bool:
        nonlocal best_k, best
        if used >= best_k:
            return False
        if remaining == 0:
            best_k, best = used, colors[:]
            return best_k == lower
        v = pick()
        for c in range(min(used + 1, best_k - 1)):
            if c in neighbor_colors[v]:
                continue
            assign(v, c)
            done = search(max(used, c + 1), remaining - 1)
            unassign(v)
            if done:
                return True
        return False

    search(lower, n - len(clique))
    return best_k, Coloring(tuple(best), best_k)
