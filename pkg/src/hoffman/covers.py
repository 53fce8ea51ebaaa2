"""Edge covers, psi parameters, cover families and the exact L_{psi,alpha} search.

A c-vertex cover assigns every edge to one of its endpoints so that no
vertex owns more than c edges.  A cover family is a multiset of vertex
subsets; vertex v gets mass ``h_v = sum_{S ∋ v} 1/psi(G[S])`` and the family
covers G when every mass is at least 1.  All mass arithmetic is exact.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .coloring import CapExceeded, chromatic_number
from .graph import Edge, WeightedGraph, stats

COVERING_MAX_N = 7


class Psi(str, Enum):
    DEGENERACY_PLUS_1 = "degeneracy_plus_1"
    MAXDEG_PLUS_1 = "maxdeg_plus_1"
    EXACT_CHROMATIC = "exact_chromatic"

    def evaluate(self, g: WeightedGraph) -> int:
        if g.m == 0:
            return 1
        if self is Psi.DEGENERACY_PLUS_1:
            return stats(g).degeneracy + 1
        if self is Psi.MAXDEG_PLUS_1:
            return stats(g).max_degree + 1
        return chromatic_number(g)[0]


class BudgetMode(str, Enum):
    PER_SUBSET = "per-subset"
    GLOBAL = "global"


def as_fraction(x: float | int | Fraction) -> Fraction:
    """Exact rational for a user-supplied number (0.3 means 3/10, not the nearest double)."""
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    return Fraction(repr(float(x)))


def psi_value(psi: Psi | str, g: WeightedGraph, subset: Iterable[int]) -> int:
    return Psi(psi).evaluate(g.induced(subset))


# ---------------------------------------------------------------------------
# c-vertex covers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeCover:
    owner: dict[Edge, int]

    @property
    def loads(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v in self.owner.values():
            out[v] = out.get(v, 0) + 1
        return out

    @property
    def c(self) -> int:
        return max(self.loads.values(), default=0)

    def is_valid_for(self, edges: Iterable[Edge]) -> bool:
        edges = set(edges)
        return set(self.owner) == edges and all(v in e for e, v in self.owner.items())


@dataclass(frozen=True)
class DenseWitness:
    """Vertex set H with |E(G[H])| > c |H|, proving that no c-vertex cover exists."""

    vertices: tuple[int, ...]
    edges: int
    c: int


def find_edge_cover(
    g: WeightedGraph, c: float, vertices: Iterable[int] | None = None
) -> EdgeCover | DenseWitness:
    """Decide whether G (or G[vertices]) has a c-vertex cover.

    This is a max-flow problem (source -> edge, cap 1; edge -> endpoints;
    vertex -> sink, cap floor(c)).  It is solved with augmenting paths,
    which here are chains of edge re-assignments from an overloaded vertex
    to one with spare capacity.  When no such chain exists, the vertices
    reachable from the overloaded one induce more than c*|H| edges.
    """
    if c < 0:
        raise ValueError("c must be nonnegative")
    cap = math.floor(c + 1e-12)
    vs = range(g.n) if vertices is None else sorted(set(vertices))
    edges = g.induced_edges(vs) if vertices is not None else g.sorted_edges()
    owner: dict[Edge, int] = {}
    owned: dict[int, list[Edge]] = {v: [] for v in vs}
    for e in edges:
        v = min(e, key=lambda x: (len(owned[x]), x))
        owner[e] = v
        owned[v].append(e)
    for start in vs:
        while len(owned[start]) > cap:
            parent: dict[int, tuple[int, Edge] | None] = {start: None}
            queue = deque([start])
            target = None
            while queue and target is None:
                u = queue.popleft()
                for e in sorted(owned[u]):
                    w = e[0] if e[1] == u else e[1]
                    if w in parent:
                        continue
                    parent[w] = (u, e)
                    if len(owned[w]) < cap:
                        target = w
                        break
                    queue.append(w)
            if target is None:
                h = tuple(sorted(parent))
                inside = len(g.induced_edges(h))
                return DenseWitness(h, inside, cap)
            w = target
            while parent[w] is not None:
                u, e = parent[w]
                owned[u].remove(e)
                owned[w].append(e)
                owner[e] = w
                w = u
    return EdgeCover(owner)


def _euler_orientation(g: WeightedGraph) -> dict[Edge, int]:
    """Orient edges along Euler circuits after pairing odd vertices with a dummy vertex."""
    dummy = g.n
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.n + 1)}
    edge_list: list[Edge] = []
    for e in g.sorted_edges():
        k = len(edge_list)
        edge_list.append(e)
        adj[e[0]].append((e[1], k))
        adj[e[1]].append((e[0], k))
    for v in range(g.n):
        if g.degree(v) % 2:
            k = len(edge_list)
            edge_list.append((v, dummy))
            adj[v].append((dummy, k))
            adj[dummy].append((v, k))
    used = [False] * len(edge_list)
    ptr = {v: 0 for v in adj}
    tail: dict[Edge, int] = {}
    for root in range(g.n + 1):
        stack = [root]
        while stack:
            u = stack[-1]
            while ptr[u] < len(adj[u]) and used[adj[u][ptr[u]][1]]:
                ptr[u] += 1
            if ptr[u] == len(adj[u]):
                stack.pop()
                continue
            w, k = adj[u][ptr[u]]
            used[k] = True
            if k < g.m:
                tail[edge_list[k]] = u
            stack.append(w)
    return tail


def default_cover(g: WeightedGraph, psi: Psi | str) -> EdgeCover:
    """Cover within the budget that holds for every graph.

    degeneracy_plus_1: each edge is owned by whichever endpoint is peeled
    first, so a vertex owns at most dgn(G) edges.  maxdeg_plus_1: edges are
    oriented along Euler circuits and owned by their tail, so a vertex owns
    at most ceil(deg/2) edges.
    """
    psi = Psi(psi)
    if psi is Psi.DEGENERACY_PLUS_1:
        st = stats(g)
        pos = {v: k for k, v in enumerate(st.peeling_order)}
        cover = EdgeCover({e: min(e, key=pos.__getitem__) for e in g.sorted_edges()})
        assert cover.c <= st.degeneracy
    elif psi is Psi.MAXDEG_PLUS_1:
        cover = EdgeCover(_euler_orientation(g))
        assert cover.c <= math.ceil(stats(g).max_degree / 2)
    else:
        found = find_edge_cover(g, psi.evaluate(g))
        assert isinstance(found, EdgeCover)
        cover = found
    return cover


# ---------------------------------------------------------------------------
# cover families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverFamily:
    subsets: tuple[tuple[int, ...], ...]
    psi_values: tuple[int, ...]
    covers: tuple[EdgeCover | None, ...] = field(default=())

    @classmethod
    def build(
        cls,
        g: WeightedGraph,
        subsets: Sequence[Iterable[int]],
        psi: Psi | str,
        budget: Sequence[float] | None = None,
    ) -> "CoverFamily":
        """Evaluate psi on each subset; if budgets are given, attach covers that meet them."""
        subs = tuple(tuple(sorted(set(s))) for s in subsets)
        vals = tuple(psi_value(psi, g, s) for s in subs)
        covers: list[EdgeCover | None] = []
        for k, s in enumerate(subs):
            if budget is None:
                covers.append(None)
                continue
            found = find_edge_cover(g, budget[k], s)
            covers.append(found if isinstance(found, EdgeCover) else None)
        return cls(subs, vals, tuple(covers))

    @property
    def k(self) -> int:
        return len(self.subsets)

    def masses(self, n: int) -> list[Fraction]:
        h = [Fraction(0)] * n
        for s, p in zip(self.subsets, self.psi_values):
            for v in s:
                h[v] += Fraction(1, p)
        return h

    def to_json(self) -> dict:
        return {
            "subsets": [list(s) for s in self.subsets],
            "psi_values": list(self.psi_values),
            "covers": [
                None if c is None else [[e[0], e[1], v] for e, v in sorted(c.owner.items())]
                for c in self.covers
            ],
        }

    @classmethod
    def from_json(cls, g: WeightedGraph, data: dict, psi: Psi | str) -> "CoverFamily":
        subs = tuple(tuple(sorted(s)) for s in data["subsets"])
        vals = tuple(psi_value(psi, g, s) for s in subs)
        covers = []
        for c in data.get("covers") or [None] * len(subs):
            covers.append(None if c is None else EdgeCover({(i, j): v for i, j, v in c}))
        return cls(subs, vals, tuple(covers))


def subset_budget(
    g: WeightedGraph, subset: Sequence[int], psi: Psi | str, alpha, mode: BudgetMode | str
) -> Fraction:
    a = as_fraction(alpha)
    if BudgetMode(mode) is BudgetMode.GLOBAL:
        return a * Psi(psi).evaluate(g)
    return a * psi_value(psi, g, subset)


@dataclass
class CoverReport:
    passed: bool
    violations: list[str]
    masses: list[Fraction]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "violations": self.violations,
            "masses": [str(h) for h in self.masses],
        }


def verify_cover_family(
    g: WeightedGraph,
    family: CoverFamily,
    psi: Psi | str,
    alpha,
    mode: BudgetMode | str = BudgetMode.PER_SUBSET,
) -> CoverReport:
    """Check every mass h_v >= 1 and that each subset has a cover within its budget.

    Budgets are ``alpha * psi(G[S])`` in per-subset mode and ``alpha * psi(G)``
    in global mode.  A missing or over-budget witness cover is re-decided
    with :func:`find_edge_cover`.
    """
    violations = []
    recomputed = tuple(psi_value(psi, g, s) for s in family.subsets)
    if recomputed != family.psi_values:
        violations.append(f"psi values {family.psi_values} != recomputed {recomputed}")
    h = family.masses(g.n)
    for v, hv in enumerate(h):
        if hv < 1:
            violations.append(f"vertex {v}: mass {hv} < 1")
    for idx, s in enumerate(family.subsets):
        if any(not 0 <= v < g.n for v in s):
            violations.append(f"subset {idx}: vertex out of range")
            continue
        budget = subset_budget(g, s, psi, alpha, mode)
        cover = family.covers[idx] if idx < len(family.covers) else None
        inner = g.induced_edges(s)
        if cover is not None and cover.is_valid_for(inner) and cover.c <= budget:
            continue
        found = find_edge_cover(g, float(budget), s)
        if isinstance(found, DenseWitness):
            violations.append(
                f"subset {idx}: no {budget}-vertex cover; "
                f"{found.edges} edges on {len(found.vertices)} vertices {list(found.vertices)}"
            )
    return CoverReport(not violations, violations, h)


def verify_relaxed_cover(g: WeightedGraph, family: CoverFamily, psi: Psi | str, alpha) -> CoverReport:
    """Masses exactly 1, and ``|E(S)| <= alpha * psi(S) * |S|`` for every subset."""
    violations = []
    a = as_fraction(alpha)
    h = family.masses(g.n)
    for v, hv in enumerate(h):
        if hv != 1:
            violations.append(f"vertex {v}: mass {hv} != 1")
    for idx, s in enumerate(family.subsets):
        inner = len(g.induced_edges(s))
        limit = a * psi_value(psi, g, s) * len(s)
        if inner > limit:
            violations.append(f"subset {idx}: {inner} edges > {limit}")
    return CoverReport(not violations, violations, h)


def covering_number_exact(
    g: WeightedGraph,
    psi: Psi | str,
    alpha,
    k_max: int | None = None,
    mode: BudgetMode | str = BudgetMode.PER_SUBSET,
    allow_repeats: bool = True,
    cap: int = COVERING_MAX_N,
) -> tuple[int, CoverFamily]:
    """Smallest k admitting a cover family of k subsets within the alpha budget.

    Iterative deepening on k.  The search always branches on the first
    vertex whose mass is still below 1, trying every admissible subset that
    contains it; failed (masses, picks-left) states are memoized and a
    branch is cut when even the most massive remaining picks cannot lift
    that vertex, or the total deficit, to 1.  With repeats allowed, a
    subset is dropped when an admissible strict superset has psi no larger.
    """
    psi = Psi(psi)
    mode = BudgetMode(mode)
    if g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds the covering cap {cap}")
    n = g.n
    if n == 0:
        return 0, CoverFamily((), (), ())
    k_max = n if k_max is None else k_max
    a = as_fraction(alpha)
    psi_g = psi.evaluate(g)

    cands = []
    for mask in range(1, 1 << n):
        s = [v for v in range(n) if mask >> v & 1]
        p = psi_value(psi, g, s)
        budget = a * (p if mode is BudgetMode.PER_SUBSET else psi_g)
        if isinstance(find_edge_cover(g, float(budget), s), EdgeCover):
            cands.append((mask, p))
    if allow_repeats:
        cands = [
            (m, p) for m, p in cands
            if not any(m2 != m and m2 & m == m and p2 <= p for m2, p2 in cands)
        ]
    cands.sort(key=lambda mp: (mp[1], -bin(mp[0]).count("1"), mp[0]))
    containing = {v: [(m, p) for m, p in cands if m >> v & 1] for v in range(n)}
    best_total = max(Fraction(bin(m).count("1"), p) for m, p in cands)
    best_single = {v: max((Fraction(1, p) for _, p in containing[v]), default=Fraction(0)) for v in range(n)}

    def search(h: tuple[Fraction, ...], left: int, used: frozenset, picks: list[int], failed: set) -> list[int] | None:
        v = next((u for u in range(n) if h[u] < 1), None)
        if v is None:
            return picks
        if left == 0:
            return None
        if best_single[v] * left < 1 - h[v]:
            return None
        deficit = sum(1 - x for x in h if x < 1)
        if best_total * left < deficit:
            return None
        key = (h, left) if allow_repeats else (h, left, used)
        if key in failed:
            return None
        for m, p in containing[v]:
            if not allow_repeats and m in used:
                continue
            step = Fraction(1, p)
            nh = tuple(x + step if m >> u & 1 else x for u, x in enumerate(h))
            found = search(nh, left - 1, used | {m}, picks + [m], failed)
            if found is not None:
                return found
        failed.add(key)
        return None

    for k in range(1, k_max + 1):
        found = search(tuple([Fraction(0)] * n), k, frozenset(), [], set())
        if found is not None:
            subsets = [[v for v in range(n) if m >> v & 1] for m in found]
            budgets = [float(subset_budget(g, s, psi, a, mode)) for s in subsets]
            family = CoverFamily.build(g, subsets, psi, budgets)
            return k, family
    raise ValueError(f"no cover family with at most {k_max} subsets")
