"""Chromatic number, clustering number, edge covers and cover-family search
against brute-force enumeration."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hoffman.clustering import (
    InfeasibleThreshold,
    clustering_number_exact,
    is_clustering,
    make_clustering,
)
from hoffman.coloring import CapExceeded, chromatic_number, greedy_clique
from hoffman.covers import (
    BudgetMode,
    CoverFamily,
    DenseWitness,
    EdgeCover,
    Psi,
    as_fraction,
    covering_number_exact,
    default_cover,
    find_edge_cover,
    psi_value,
    verify_cover_family,
    verify_relaxed_cover,
)
from hoffman.graph import (
    WeightedGraph,
    all_graphs,
    complete,
    complete_bipartite,
    cycle,
    erdos_renyi,
    path,
    petersen,
    stats,
)


def brute_chromatic(g):
    for k in range(1, g.n + 1):
        for col in itertools.product(range(k), repeat=g.n):
            if all(col[i] != col[j] for i, j in g.edges):
                return k
    return 0


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for k in range(len(p)):
            yield p[:k] + [[first] + p[k]] + p[k + 1:]


def brute_clustering(g, lam):
    a = g.matrix()
    best = None
    for p in set_partitions(list(range(g.n))):
        if all(np.linalg.eigvalsh(a[np.ix_(b, b)])[-1] <= lam + 1e-9 for b in p):
            best = len(p) if best is None else min(best, len(p))
    return best


def max_density(g, vertices):
    """max |E(H)| / |H| over nonempty H inside ``vertices``."""
    best = Fraction(0)
    for r in range(1, len(vertices) + 1):
        for h in itertools.combinations(vertices, r):
            best = max(best, Fraction(len(g.induced_edges(h)), r))
    return best


small_graphs = st.integers(1, 7).flatmap(
    lambda n: st.integers(0, 2**16).map(lambda s: erdos_renyi(n, 0.5, s))
)


# -- chromatic number -------------------------------------------------------

@pytest.mark.parametrize("g, k", [(complete(5), 5), (cycle(5), 3), (petersen(), 3),
                                  (cycle(6), 2), (WeightedGraph(3, frozenset()), 1)])
def test_chromatic_examples(g, k):
    chi, col = chromatic_number(g)
    assert chi == k and col.is_proper(g) and len(set(col.color)) == k


def test_petersen_has_no_two_coloring():
    g = petersen()
    assert not any(all(c[i] != c[j] for i, j in g.edges) for c in itertools.product((0, 1), repeat=10))


@settings(max_examples=100, deadline=None)
@given(small_graphs)
def test_chromatic_matches_brute_force(g):
    chi, col = chromatic_number(g)
    assert chi == brute_chromatic(g)
    assert col.is_proper(g)
    clique = greedy_clique(g)
    assert all((min(u, v), max(u, v)) in g.edges for u, v in itertools.combinations(clique, 2))
    assert len(clique) <= chi


def test_chromatic_cap():
    with pytest.raises(CapExceeded):
        chromatic_number(cycle(12), cap=10)


# -- clustering -------------------------------------------------------------

def test_clustering_examples():
    assert clustering_number_exact(cycle(5), 0.0)[0] == 3
    k, cl = clustering_number_exact(complete(4), 1.0)
    assert k == 2 and all(len(c) == 2 for c in cl.clusters)
    lam1 = float(np.linalg.eigvalsh(petersen().matrix())[-1])
    assert clustering_number_exact(petersen(), lam1)[0] == 1


def test_negative_threshold_is_infeasible():
    with pytest.raises(InfeasibleThreshold):
        clustering_number_exact(cycle(5), -0.1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(0, 2**16), st.sampled_from([0.0, 0.5, 1.0, 1.5, 2.0]))
def test_clustering_matches_partition_enumeration(n, seed, lam):
    g = erdos_renyi(n, 0.5, seed)
    k, cl = clustering_number_exact(g, lam)
    assert k == brute_clustering(g, lam)
    assert is_clustering(g, cl, lam)


@settings(max_examples=60, deadline=None)
@given(small_graphs)
def test_zero_clustering_is_chromatic_number(g):
    assert clustering_number_exact(g, 0.0)[0] == chromatic_number(g)[0]


def test_weighted_clustering_matches_enumeration():
    rng = np.random.default_rng(0)
    g = erdos_renyi(6, 0.7, 1)
    w = g.with_weights({e: float(rng.uniform(-1, 1)) for e in g.edges})
    for lam in (0.0, 0.3, 0.8):
        assert clustering_number_exact(w, lam)[0] == brute_clustering(w, lam)


def test_make_clustering_requires_contiguous_labels():
    with pytest.raises(ValueError):
        make_clustering(path(3), [0, 2, 0])
    assert not is_clustering(path(3), make_clustering(path(3), [0, 0, 0]), 1.0)


# -- edge covers ------------------------------------------------------------

def test_find_edge_cover_examples():
    star = complete_bipartite(1, 3)
    cover = find_edge_cover(star, 1)
    assert isinstance(cover, EdgeCover) and cover.c == 1
    assert isinstance(find_edge_cover(complete(3), 1), EdgeCover)
    witness = find_edge_cover(complete(4), 1)
    assert isinstance(witness, DenseWitness)
    assert witness.edges > witness.c * len(witness.vertices)
    assert witness.vertices == (0, 1, 2, 3)


@settings(max_examples=80, deadline=None)
@given(small_graphs, st.integers(0, 4))
def test_edge_cover_feasible_iff_every_subgraph_is_sparse(g, c):
    found = find_edge_cover(g, c)
    feasible = max_density(g, range(g.n)) <= c
    assert isinstance(found, EdgeCover) == feasible
    if feasible:
        assert found.is_valid_for(g.edges) and found.c <= c
    else:
        assert Fraction(len(g.induced_edges(found.vertices)), len(found.vertices)) > c


def test_edge_cover_on_subset_keeps_labels():
    g = complete(5)
    cover = find_edge_cover(g, 1, [1, 3, 4])
    assert isinstance(cover, EdgeCover)
    assert set(cover.owner) == {(1, 3), (1, 4), (3, 4)}


def test_default_cover_examples():
    tree = path(6)
    assert default_cover(tree, Psi.DEGENERACY_PLUS_1).c == 1
    assert default_cover(cycle(5), Psi.MAXDEG_PLUS_1).c == 1
    assert default_cover(complete(4), Psi.MAXDEG_PLUS_1).c == 2


@settings(max_examples=80, deadline=None)
@given(small_graphs)
def test_default_covers_meet_their_budgets(g):
    st_ = stats(g)
    deg = default_cover(g, Psi.DEGENERACY_PLUS_1)
    assert deg.is_valid_for(g.edges) and deg.c <= st_.degeneracy
    mx = default_cover(g, Psi.MAXDEG_PLUS_1)
    assert mx.is_valid_for(g.edges) and mx.c <= math.ceil(st_.max_degree / 2)


def test_psi_values():
    for psi in Psi:
        assert psi_value(psi, cycle(6), [0, 2, 4]) == 1
    assert psi_value(Psi.MAXDEG_PLUS_1, cycle(5), range(5)) == 3
    assert psi_value(Psi.DEGENERACY_PLUS_1, path(5), range(5)) == 2
    assert psi_value(Psi.EXACT_CHROMATIC, petersen(), range(10)) == 3


def test_as_fraction_is_decimal_exact():
    assert as_fraction(0.3) == Fraction(3, 10)
    assert as_fraction(0.5) == Fraction(1, 2)
    assert as_fraction(2) == 2


# -- cover families ---------------------------------------------------------

def color_class_family(g, psi):
    _, col = chromatic_number(g)
    return CoverFamily.build(g, col.classes(), psi)


def test_color_classes_pass_at_alpha_zero():
    g = petersen()
    fam = color_class_family(g, Psi.MAXDEG_PLUS_1)
    assert fam.k == 3 and set(fam.psi_values) == {1}
    assert verify_cover_family(g, fam, Psi.MAXDEG_PLUS_1, 0.0).passed
    assert verify_relaxed_cover(g, fam, Psi.MAXDEG_PLUS_1, 0.0).passed


def test_k2_family_examples():
    k2 = complete(2)
    twice = CoverFamily.build(k2, [[0, 1], [0, 1]], Psi.MAXDEG_PLUS_1)
    rep = verify_cover_family(k2, twice, Psi.MAXDEG_PLUS_1, 0.5)
    assert rep.passed and rep.masses == [1, 1]
    once = CoverFamily.build(k2, [[0, 1]], Psi.MAXDEG_PLUS_1)
    rep = verify_cover_family(k2, once, Psi.MAXDEG_PLUS_1, 0.5)
    assert not rep.passed and rep.masses == [Fraction(1, 2)] * 2
    assert verify_relaxed_cover(k2, twice, Psi.MAXDEG_PLUS_1, 0.5).passed


def test_relaxed_cover_rejects_dense_subset():
    k3 = complete(3)
    fam = CoverFamily.build(k3, [[0, 1, 2]], Psi.MAXDEG_PLUS_1)
    rep = verify_relaxed_cover(k3, fam, Psi.MAXDEG_PLUS_1, 0.3)
    assert not rep.passed and any("3 edges" in v for v in rep.violations)


def test_global_budget_is_looser():
    # per-subset: a K2 subset of K4 has psi=2 so budget 1; globally psi=4 gives 2
    g = complete(4)
    fam = CoverFamily.build(g, [[0, 1, 2, 3]] * 4, Psi.MAXDEG_PLUS_1)
    assert verify_cover_family(g, fam, Psi.MAXDEG_PLUS_1, 0.5, BudgetMode.PER_SUBSET).passed
    k_sub = covering_number_exact(g, Psi.MAXDEG_PLUS_1, 0.25)[0]
    k_glob = covering_number_exact(g, Psi.MAXDEG_PLUS_1, 0.25, mode=BudgetMode.GLOBAL)[0]
    assert k_glob <= k_sub


@pytest.mark.parametrize("g, psi, alpha, k", [
    (WeightedGraph(4, frozenset()), Psi.MAXDEG_PLUS_1, 0.5, 1),
    (WeightedGraph(3, frozenset()), Psi.DEGENERACY_PLUS_1, 0.0, 1),
    (complete(2), Psi.MAXDEG_PLUS_1, 0.5, 2),
    (complete(3), Psi.MAXDEG_PLUS_1, 0.5, 3),
])
def test_covering_number_examples(g, psi, alpha, k):
    found, fam = covering_number_exact(g, psi, alpha)
    assert found == k == fam.k
    assert verify_cover_family(g, fam, psi, alpha).passed


def brute_covering(g, psi, alpha, k_max):
    """Smallest multiset of admissible subsets with every mass >= 1."""
    a = as_fraction(alpha)
    cands = []
    for r in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), r):
            p = psi_value(psi, g, s)
            if max_density(g, s) <= math.floor(a * p):
                cands.append((s, p))
    for k in range(1, k_max + 1):
        for fam in itertools.combinations_with_replacement(cands, k):
            h = [Fraction(0)] * g.n
            for s, p in fam:
                for v in s:
                    h[v] += Fraction(1, p)
            if all(x >= 1 for x in h):
                return k
    return None


@pytest.mark.parametrize("psi, alpha", [(Psi.MAXDEG_PLUS_1, 0.5), (Psi.DEGENERACY_PLUS_1, 1.0),
                                        (Psi.MAXDEG_PLUS_1, 0.0), (Psi.EXACT_CHROMATIC, 0.5)])
def test_covering_number_matches_brute_force(psi, alpha):
    for g in [g for n in range(1, 5) for g in all_graphs(n)]:
        k, fam = covering_number_exact(g, psi, alpha)
        assert k == brute_covering(g, psi, alpha, g.n)
        assert verify_cover_family(g, fam, psi, alpha).passed


def test_covering_number_at_alpha_zero_is_chromatic_number():
    for seed in range(8):
        g = erdos_renyi(6, 0.5, seed)
        assert covering_number_exact(g, Psi.MAXDEG_PLUS_1, 0.0)[0] == chromatic_number(g)[0]


def test_covering_number_is_monotone_in_alpha_and_sandwiched():
    for seed in range(6):
        g = erdos_renyi(6, 0.6, seed)
        chi = chromatic_number(g)[0]
        ks = [covering_number_exact(g, Psi.MAXDEG_PLUS_1, a)[0] for a in (0.0, 0.5, 1.0)]
        assert ks == sorted(ks, reverse=True)
        half = ks[1]
        assert math.sqrt(chi) - 1e-9 <= half <= chi


def test_covering_without_repeats_never_beats_with_repeats():
    g = complete(3)
    k_rep = covering_number_exact(g, Psi.MAXDEG_PLUS_1, 0.5)[0]
    k_set = covering_number_exact(g, Psi.MAXDEG_PLUS_1, 0.5, allow_repeats=False)[0]
    assert k_set >= k_rep


def test_family_json_round_trip():
    g = cycle(5)
    _, fam = covering_number_exact(g, Psi.MAXDEG_PLUS_1, 0.5)
    back = CoverFamily.from_json(g, fam.to_json(), Psi.MAXDEG_PLUS_1)
    assert back == fam


def test_covering_cap():
    with pytest.raises(CapExceeded):
        covering_number_exact(petersen(), Psi.MAXDEG_PLUS_1, 0.5)
