"""Graph representation, file formats, generators and basic statistics.

Vertices are always ``0..n-1``.  Edges are stored as sorted pairs ``(i, j)``
with ``i < j``; a weighted graph additionally carries one real weight per
edge.  Graphs are immutable once built.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

Edge = tuple[int, int]

GRAPH6_MAX_N = 1 << 18
PAIRING_ATTEMPT_CAP = 1000


class GraphFormatError(ValueError):
    """Raised when a graph file or string cannot be parsed."""


class GenerationError(RuntimeError):
    """Raised when a random generator cannot produce a graph."""


def _norm_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with optional real edge weights.

    ``weight`` is ``None`` for a unit-weight graph; otherwise it maps every
    edge (and nothing else) to its weight.
    """

    n: int
    edges: frozenset[Edge]
    weight: Mapping[Edge, float] | None = None
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad edge ({i}, {j}) for n={self.n}")
            adj[i].append(j)
            adj[j].append(i)
        if self.weight is not None:
            if set(self.weight) != set(self.edges):
                raise ValueError("weight support must equal the edge set")
            object.__setattr__(self, "weight", dict(sorted(self.weight.items())))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int]], weights: Iterable[float] | None = None
    ) -> "WeightedGraph":
        """Build a graph from possibly unordered pairs; rejects loops and duplicates."""
        pairs = [tuple(e) for e in edges]
        ws = None if weights is None else list(weights)
        if ws is not None and len(ws) != len(pairs):
            raise ValueError("one weight per edge required")
        seen: dict[Edge, float] = {}
        for k, (i, j) in enumerate(pairs):
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            e = _norm_edge(int(i), int(j))
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen[e] = 1.0 if ws is None else float(ws[k])
        return cls(n, frozenset(seen), None if ws is None else seen)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_weighted(self) -> bool:
        return self.weight is not None

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def w(self, i: int, j: int) -> float:
        e = _norm_edge(i, j)
        if e not in self.edges:
            return 0.0
        return 1.0 if self.weight is None else self.weight[e]

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def matrix(self) -> np.ndarray:
        """Dense symmetric (weighted) adjacency matrix."""
        a = np.zeros((self.n, self.n))
        for (i, j) in self.edges:
            a[i, j] = a[j, i] = self.w(i, j)
        return a

    def induced(self, vertices: Iterable[int]) -> "WeightedGraph":
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in sorted order."""
        vs = sorted(set(vertices))
        index = {v: k for k, v in enumerate(vs)}
        sub = [e for e in self.sorted_edges() if e[0] in index and e[1] in index]
        new_edges = [(index[i], index[j]) for i, j in sub]
        weights = None if self.weight is None else [self.weight[e] for e in sub]
        return WeightedGraph.from_edges(len(vs), new_edges, weights)

    def induced_edges(self, vertices: Iterable[int]) -> list[Edge]:
        """Edges of ``G[vertices]`` in original labels."""
        s = set(vertices)
        return [e for e in self.sorted_edges() if e[0] in s and e[1] in s]

    def with_weights(self, weights: Mapping[Edge, float]) -> "WeightedGraph":
        return WeightedGraph(self.n, self.edges, dict(weights))

    def unweighted(self) -> "WeightedGraph":
        return WeightedGraph(self.n, self.edges)

    def relabel(self, perm: list[int]) -> "WeightedGraph":
        """Apply the vertex map ``v -> perm[v]``."""
        edges = [(perm[i], perm[j]) for i, j in self.sorted_edges()]
        weights = None if self.weight is None else [self.weight[e] for e in self.sorted_edges()]
        return WeightedGraph.from_edges(self.n, edges, weights)

    def with_edge(self, i: int, j: int) -> "WeightedGraph":
        if self.weight is not None:
            raise ValueError("with_edge is only defined for unit-weight graphs")
        return WeightedGraph(self.n, self.edges | {_norm_edge(i, j)})


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _decode_n(data: bytes) -> tuple[int, int]:
    if not data:
        raise GraphFormatError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise GraphFormatError("truncated 36-bit graph6 length header")
        n = 0
        for c in data[2:8]:
            n = (n << 6) | (c - 63)
        return n, 8
    if len(data) < 4:
        raise GraphFormatError("truncated 18-bit graph6 length header")
    n = 0
    for c in data[1:4]:
        n = (n << 6) | (c - 63)
    return n, 4


def parse_graph6(text: str | bytes) -> WeightedGraph:
    """Decode one graph6 line (an optional ``>>graph6<<`` header is accepted)."""
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<"):]
    for c in data:
        if not 63 <= c <= 126:
            raise GraphFormatError(f"character {chr(c)!r} out of graph6 range 63..126")
    n, pos = _decode_n(data)
    if n > GRAPH6_MAX_N:
        raise GraphFormatError(f"n={n} exceeds the supported maximum {GRAPH6_MAX_N}")
    nbits = n * (n - 1) // 2
    body = data[pos:]
    need = (nbits + 5) // 6
    if len(body) != need:
        raise GraphFormatError(f"expected {need} data bytes for n={n}, got {len(body)}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    if nbits % 6:
        if (body[-1] - 63) & ((1 << (6 - nbits % 6)) - 1):
            raise GraphFormatError("nonzero padding bits")
    return WeightedGraph(n, frozenset(edges))


def _encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def emit_graph6(g: WeightedGraph) -> str:
    if g.is_weighted:
        raise GraphFormatError("graph6 cannot carry edge weights")
    out = bytearray(_encode_n(g.n))
    acc = nacc = 0
    for j in range(1, g.n):
        for i in range(j):
            acc = (acc << 1) | ((i, j) in g.edges)
            nacc += 1
            if nacc == 6:
                out.append(acc + 63)
                acc = nacc = 0
    if nacc:
        out.append((acc << (6 - nacc)) + 63)
    return out.decode("ascii")


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

def parse_weighted_edgelist(text: str) -> WeightedGraph:
    """Parse ``n <count>`` followed by ``i j w`` lines (0-based, whitespace separated).

    Blank lines and ``#`` comments are ignored.
    """
    n = None
    pairs: list[Edge] = []
    weights: list[float] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "n":
            if n is not None or len(tok) != 2:
                raise GraphFormatError(f"line {lineno}: bad or repeated header")
            n = int(tok[1])
            continue
        if n is None:
            raise GraphFormatError(f"line {lineno}: edge before 'n <count>' header")
        if len(tok) != 3:
            raise GraphFormatError(f"line {lineno}: expected 'i j w'")
        try:
            i, j = int(tok[0]), int(tok[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex id") from None
        try:
            w = float(tok[2])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-numeric weight {tok[2]!r}") from None
        if not np.isfinite(w) or w == 0.0:
            raise GraphFormatError(f"line {lineno}: weight must be finite and nonzero")
        if i == j:
            raise GraphFormatError(f"line {lineno}: self-loop at {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise GraphFormatError(f"line {lineno}: vertex out of range")
        e = _norm_edge(i, j)
        if e in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {e}")
        seen.add(e)
        pairs.append(e)
        weights.append(w)
    if n is None:
        raise GraphFormatError("missing 'n <count>' header")
    return WeightedGraph.from_edges(n, pairs, weights)


def emit_weighted_edgelist(g: WeightedGraph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"{i} {j} {g.w(i, j)!r}" for i, j in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> WeightedGraph:
    """DIMACS ``.col`` (``p edge n m`` / ``e u v``, 1-based). Repeated edges are merged."""
    n = None
    edges: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "p":
            if n is not None or len(tok) < 3 or tok[1] not in ("edge", "col"):
                raise GraphFormatError(f"line {lineno}: bad problem line")
            n = int(tok[2])
        elif tok[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before problem line")
            u, v = int(tok[1]) - 1, int(tok[2]) - 1
            if u == v:
                raise GraphFormatError(f"line {lineno}: self-loop")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: vertex out of range")
            edges.add(_norm_edge(u, v))
        else:
            raise GraphFormatError(f"line {lineno}: unknown line type {tok[0]!r}")
    if n is None:
        raise GraphFormatError("missing problem line")
    return WeightedGraph(n, frozenset(edges))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def complete(n: int) -> WeightedGraph:
    return WeightedGraph(n, frozenset(itertools.combinations(range(n), 2)))


def cycle(n: int) -> WeightedGraph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return WeightedGraph(n, frozenset(_norm_edge(i, (i + 1) % n) for i in range(n)))


def path(n: int) -> WeightedGraph:
    return WeightedGraph(n, frozenset((i, i + 1) for i in range(n - 1)))


def empty(n: int) -> WeightedGraph:
    return WeightedGraph(n, frozenset())


def complete_bipartite(a: int, b: int) -> WeightedGraph:
    return WeightedGraph(a + b, frozenset((i, a + j) for i in range(a) for j in range(b)))


def petersen() -> WeightedGraph:
    """Kneser graph K(5,2): 2-subsets of a 5-set, adjacent when disjoint."""
    pairs = list(itertools.combinations(range(5), 2))
    edges = [
        (x, y)
        for x, y in itertools.combinations(range(len(pairs)), 2)
        if not set(pairs[x]) & set(pairs[y])
    ]
    return WeightedGraph(10, frozenset(edges))


def erdos_renyi(n: int, p: float, seed: int) -> WeightedGraph:
    rng = np.random.default_rng(seed)
    draws = rng.random(n * (n - 1) // 2)
    pairs = itertools.combinations(range(n), 2)
    return WeightedGraph(n, frozenset(e for e, u in zip(pairs, draws) if u < p))


def random_regular(n: int, d: int, seed: int) -> WeightedGraph:
    """Random d-regular graph from the pairing model.

    Stubs are paired uniformly; pairs that would form a loop or a repeated
    edge are returned to the pool and re-paired.  An attempt that gets stuck
    is discarded, up to ``PAIRING_ATTEMPT_CAP`` attempts.
    """
    if (n * d) % 2:
        raise GenerationError("n*d must be even")
    if not 0 <= d < n:
        raise GenerationError("need 0 <= d < n")
    rng = np.random.default_rng(seed)
    for _ in range(PAIRING_ATTEMPT_CAP):
        edges = _pairing_attempt(n, d, rng)
        if edges is not None:
            return WeightedGraph(n, frozenset(edges))
    raise GenerationError(f"pairing model failed after {PAIRING_ATTEMPT_CAP} attempts")


def _pairing_attempt(n: int, d: int, rng: np.random.Generator) -> set[Edge] | None:
    edges: set[Edge] = set()
    stubs = np.repeat(np.arange(n), d)
    while stubs.size:
        rng.shuffle(stubs)
        leftover: dict[int, int] = defaultdict(int)
        for a, b in stubs.reshape(-1, 2).tolist():
            e = _norm_edge(a, b)
            if a != b and e not in edges:
                edges.add(e)
            else:
                leftover[a] += 1
                leftover[b] += 1
        if leftover and not _can_progress(edges, leftover):
            return None
        stubs = np.array([v for v, c in sorted(leftover.items()) for _ in range(c)], dtype=int)
    return edges


def _can_progress(edges: set[Edge], leftover: dict[int, int]) -> bool:
    verts = sorted(leftover)
    return any(
        (a, b) not in edges for a, b in itertools.combinations(verts, 2)
    )


def generate(spec: str) -> WeightedGraph:
    """Build a graph from a family description such as ``"cycle 5"``.

    Families: ``complete n``, ``cycle n``, ``path n``, ``empty n``,
    ``bipartite a b``, ``petersen``, ``random_regular n d seed``,
    ``erdos_renyi n p seed``.
    """
    tok = spec.split()
    if not tok:
        raise ValueError("empty generator spec")
    kind, args = tok[0], tok[1:]
    try:
        if kind == "complete":
            return complete(int(args[0]))
        if kind == "cycle":
            return cycle(int(args[0]))
        if kind == "path":
            return path(int(args[0]))
        if kind == "empty":
            return empty(int(args[0]))
        if kind == "bipartite":
            return complete_bipartite(int(args[0]), int(args[1]))
        if kind == "petersen":
            return petersen()
        if kind == "random_regular":
            return random_regular(int(args[0]), int(args[1]), _seed(args[2]))
        if kind == "erdos_renyi":
            return erdos_renyi(int(args[0]), float(args[1]), _seed(args[2]))
    except IndexError:
        raise ValueError(f"missing arguments for {kind!r}") from None
    raise ValueError(f"unknown graph family {kind!r}")


def _seed(s: str) -> int:
    v = int(s)
    if not 0 <= v < 1 << 64:
        raise ValueError("seeds are unsigned 64-bit integers")
    return v


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    d: float
    max_degree: int
    degeneracy: int
    peeling_order: tuple[int, ...]


def stats(g: WeightedGraph) -> GraphStats:
    """Counts, average degree, max degree and degeneracy.

    The degeneracy comes from repeatedly deleting a minimum-degree vertex
    (lowest index on ties); ``peeling_order`` lists vertices in deletion order.
    """
    deg = [g.degree(v) for v in range(g.n)]
    alive = [True] * g.n
    order = []
    dgn = 0
    for _ in range(g.n):
        v = min((v for v in range(g.n) if alive[v]), key=lambda u: (deg[u], u))
        dgn = max(dgn, deg[v])
        alive[v] = False
        order.append(v)
        for u in g.neighbors(v):
            if alive[u]:
                deg[u] -= 1
    d = 2.0 * g.m / g.n if g.n else 0.0
    delta = max((g.degree(v) for v in range(g.n)), default=0)
    return GraphStats(g.n, g.m, d, delta, dgn, tuple(order))


ENUMERATE_MAX_N = 5


def all_graphs(n: int) -> list[WeightedGraph]:
    """One representative per isomorphism class of graphs on n vertices.

    Brute force over edge subsets and vertex permutations, so n is capped at
    ``ENUMERATE_MAX_N``.  The representative is the member with the smallest
    edge bitmask; output is sorted by (edge count, bitmask).
    """
    if n > ENUMERATE_MAX_N:
        raise ValueError(f"enumeration is capped at n={ENUMERATE_MAX_N}")
    pairs = list(itertools.combinations(range(n), 2))
    bit = {e: k for k, e in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    seen: set[int] = set()
    reps = []
    for mask in range(1 << len(pairs)):
        if mask in seen:
            continue
        present = [e for e, k in bit.items() if mask >> k & 1]
        orbit = set()
        for p in perms:
            m = 0
            for i, j in present:
                m |= 1 << bit[_norm_edge(p[i], p[j])]
            orbit.add(m)
        seen |= orbit
        reps.append(min(orbit))
    graphs = [
        WeightedGraph(n, frozenset(e for e, k in bit.items() if m >> k & 1)) for m in reps
    ]
    return sorted(graphs, key=lambda g: (g.m, sum(1 << bit[e] for e in g.edges)))
