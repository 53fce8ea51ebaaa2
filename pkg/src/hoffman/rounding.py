"""Random and derandomized assignment of vertices to simplex vectors through a cover family.

Vertex v picks subset j (with v in S_j) with probability
``p_{v,j} = (1/psi(S_j)) / h_v``.  An edge is bad when both endpoints pick
the same subset index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .covers import CoverFamily, EdgeCover, as_fraction, find_edge_cover
from .graph import WeightedGraph
from .spectral import GramConfiguration
from .vector_coloring import simplex_frame


@dataclass(frozen=True)
class RoundingDistribution:
    # probs[v] maps subset index -> exact probability
    probs: tuple[dict[int, Fraction], ...]

    def p(self, v: int, j: int) -> Fraction:
        return self.probs[v].get(j, Fraction(0))


@dataclass(frozen=True)
class RoundingOutcome:
    choice: tuple[int, ...]
    bad_edges: int
    gram: GramConfiguration


@dataclass(frozen=True)
class Expectation:
    exact: Fraction
    cover_sum: Fraction
    cover_chain: Fraction
    alpha_n: Fraction | None


def rounding_distribution(g: WeightedGraph, family: CoverFamily) -> RoundingDistribution:
    h = family.masses(g.n)
    probs: list[dict[int, Fraction]] = [dict() for _ in range(g.n)]
    for j, (s, p) in enumerate(zip(family.subsets, family.psi_values)):
        for v in s:
            probs[v][j] = Fraction(1, p)
    for v in range(g.n):
        if h[v] == 0:
            raise ValueError(f"vertex {v} lies in no subset")
        probs[v] = {j: q / h[v] for j, q in probs[v].items()}
        assert sum(probs[v].values()) == 1
    return RoundingDistribution(tuple(probs))


def expected_bad_edges(
    g: WeightedGraph, family: CoverFamily, alpha=None
) -> Expectation:
    """Exact expected number of bad edges, plus the cover-based sums that bound it.

    ``cover_sum`` regroups the edge sum by owner in each subset's cover;
    ``cover_chain`` replaces the partner probability by 1/psi(S_j), the
    first inequality of the bad-edge bound.  With per-subset budgets it is at
    most ``alpha * n``.
    """
    dist = rounding_distribution(g, family)
    exact = Fraction(0)
    for i, j in g.sorted_edges():
        for t in dist.probs[i].keys() & dist.probs[j].keys():
            exact += dist.p(i, t) * dist.p(j, t)
    cover_sum = Fraction(0)
    chain = Fraction(0)
    for t, (s, p) in enumerate(zip(family.subsets, family.psi_values)):
        cover = family.covers[t] if t < len(family.covers) else None
        inner = g.induced_edges(s)
        if cover is None or not cover.is_valid_for(inner):
            found = find_edge_cover(g, len(inner), s)
            assert isinstance(found, EdgeCover)
            cover = found
        for (a, b), owner in cover.owner.items():
            other = b if owner == a else a
            cover_sum += dist.p(owner, t) * dist.p(other, t)
        for v, load in cover.loads.items():
            chain += dist.p(v, t) * load * Fraction(1, p)
    alpha_n = None if alpha is None else as_fraction(alpha) * g.n
    return Expectation(exact, cover_sum, chain, alpha_n)


def _row_width(n: int) -> int:
    # Philox emits 4 words per counter block; padding rows to a multiple of 4
    # makes trial t start exactly at block t * width / 4
    return 4 * max(1, -(-n // 4))


def _uniforms(seed: int, n: int, first: int, count: int) -> np.ndarray:
    """Uniforms for trials ``first .. first+count-1``; row t depends only on (seed, t)."""
    width = _row_width(n)
    bits = np.random.Philox(key=seed)
    bits.advance(first * width // 4)
    return np.random.Generator(bits).random((count, width))[:, :n]


def _cumulative(dist: RoundingDistribution) -> tuple[np.ndarray, np.ndarray]:
    """Padded per-vertex cumulative probabilities and the matching subset indices."""
    width = max(len(p) for p in dist.probs)
    cum = np.full((len(dist.probs), width), 2.0)
    idx = np.zeros((len(dist.probs), width), dtype=int)
    for v, probs in enumerate(dist.probs):
        js = sorted(probs)
        c = np.cumsum([float(probs[j]) for j in js])
        c[-1] = 1.0
        cum[v, : len(js)] = c
        idx[v, : len(js)] = js
    return cum, idx


def _choose(table: tuple[np.ndarray, np.ndarray], u: np.ndarray) -> np.ndarray:
    cum, idx = table
    pos = np.sum(u[..., None] >= cum, axis=-1)
    return np.take_along_axis(idx, pos.T, axis=1).T if u.ndim == 2 else idx[np.arange(len(u)), pos]


def sample(dist: RoundingDistribution, seed: int, trial: int) -> tuple[int, ...]:
    """The choices of one trial; identical to trial ``trial`` inside :func:`simulate`."""
    u = _uniforms(seed, len(dist.probs), trial, 1)[0]
    return tuple(int(x) for x in _choose(_cumulative(dist), u))


def count_bad(g: WeightedGraph, choice) -> int:
    return sum(choice[i] == choice[j] for i, j in g.edges)


def simulate(g: WeightedGraph, family: CoverFamily, trials: int, seed: int, alpha=None) -> dict:
    """Monte Carlo bad-edge statistics next to the exact expectation."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    dist = rounding_distribution(g, family)
    table = _cumulative(dist)
    edges = np.array(g.sorted_edges(), dtype=int).reshape(-1, 2)
    counts = np.zeros(trials, dtype=int)
    for first in range(0, trials, 4096):
        block = min(4096, trials - first)
        choice = _choose(table, _uniforms(seed, g.n, first, block))
        if len(edges):
            counts[first : first + block] = np.sum(choice[:, edges[:, 0]] == choice[:, edges[:, 1]], axis=1)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    hist = np.bincount(counts, minlength=1)
    exp = expected_bad_edges(g, family, alpha)
    return {
        "trials": trials,
        "seed": seed,
        "mean_bad_edges": mean,
        "stderr": stderr,
        "histogram": [int(x) for x in hist],
        "exact_expectation": str(exp.exact),
        "exact_expectation_float": float(exp.exact),
        "cover_sum": str(exp.cover_sum),
        "cover_chain_bound": str(exp.cover_chain),
        "alpha_n": None if exp.alpha_n is None else str(exp.alpha_n),
    }


def derandomize(g: WeightedGraph, family: CoverFamily) -> RoundingOutcome:
    """Method of conditional expectations, fixing vertices 0, 1, ... in turn.

    Each vertex takes the subset minimizing the conditional expected number
    of bad edges (lowest index on ties), so the final count never exceeds
    the initial expectation.
    """
    dist = rounding_distribution(g, family)
    fixed: dict[int, int] = {}

    def conditional() -> Fraction:
        total = Fraction(0)
        for i, j in g.sorted_edges():
            if i in fixed and j in fixed:
                total += fixed[i] == fixed[j]
            elif i in fixed:
                total += dist.p(j, fixed[i])
            elif j in fixed:
                total += dist.p(i, fixed[j])
            else:
                total += sum(dist.p(i, t) * dist.p(j, t) for t in dist.probs[i].keys() & dist.probs[j].keys())
        return total

    for v in range(g.n):
        best_t, best_val = None, None
        for t in sorted(dist.probs[v]):
            fixed[v] = t
            val = conditional()
            if best_val is None or val < best_val:
                best_t, best_val = t, val
        fixed[v] = best_t
    choice = tuple(fixed[v] for v in range(g.n))
    k = max(family.k, 2)
    return RoundingOutcome(choice, count_bad(g, choice), outcome_to_gram(choice, k))


def outcome_to_gram(outcome: RoundingOutcome | tuple[int, ...], k: int) -> GramConfiguration:
    """Vertex v gets the simplex vector of the subset it chose."""
    choice = outcome.choice if isinstance(outcome, RoundingOutcome) else outcome
    frame = simplex_frame(k).vectors
    return GramConfiguration(frame[list(choice)])
