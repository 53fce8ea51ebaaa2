import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hoffman.graph import WeightedGraph, complete, cycle, petersen, random_regular
from hoffman.spectral import (
    GramConfiguration,
    extreme_eigenpairs,
    gram_quotient,
    jacobi_eigh,
    minimize_gram_quotient,
)


def random_symmetric(rng, n):
    a = rng.uniform(-1, 1, (n, n))
    a = (a + a.T) / 2
    np.fill_diagonal(a, 0.0)
    return a


@pytest.mark.parametrize(
    "g, lam1, lamn",
    [
        (complete(4), 3.0, -1.0),
        (WeightedGraph(3, frozenset()), 0.0, 0.0),
        (petersen(), 3.0, -2.0),
        (cycle(5), 2.0, 2 * math.cos(4 * math.pi / 5)),
        (cycle(6), 2.0, -2.0),
    ],
)
def test_extreme_eigenpairs_examples(g, lam1, lamn):
    sp = extreme_eigenpairs(g)
    assert sp.lambda_1 == pytest.approx(lam1, abs=1e-10)
    assert sp.lambda_n == pytest.approx(lamn, abs=1e-10)
    assert max(sp.residuals) <= 1e-9


def test_eigenvectors_are_unit_and_sign_fixed():
    sp = extreme_eigenpairs(petersen())
    a = petersen().matrix()
    for v, lam in ((sp.v_top, sp.lambda_1), (sp.v_bot, sp.lambda_n)):
        assert np.linalg.norm(v) == pytest.approx(1.0)
        assert np.linalg.norm(a @ v - lam * v) < 1e-9
        assert v[np.argmax(np.abs(v))] > 0


@pytest.mark.parametrize("n", [1, 2, 5, 13, 40])
def test_jacobi_matches_numpy(n):
    a = random_symmetric(np.random.default_rng(n), n)
    w, vecs = jacobi_eigh(a)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(vecs.T @ vecs, np.eye(n), atol=1e-10)
    assert np.allclose(a @ vecs, vecs * w, atol=1e-9)


def test_lanczos_on_large_regular_graph():
    g = random_regular(200, 5, 1)
    sp = extreme_eigenpairs(g)
    w = np.linalg.eigvalsh(g.matrix())
    assert sp.method == "lanczos"
    assert sp.lambda_1 == pytest.approx(5.0, abs=1e-7)
    assert sp.lambda_n == pytest.approx(w[0], abs=1e-7)


def test_weighted_spectrum_matches_numpy():
    g = WeightedGraph.from_edges(3, [(0, 1), (1, 2)], [2.5, -1.0])
    sp = extreme_eigenpairs(g)
    w = np.linalg.eigvalsh(g.matrix())
    assert (sp.lambda_1, sp.lambda_n) == pytest.approx((w[-1], w[0]), abs=1e-12)


def test_gram_quotient_examples():
    k2 = complete(2)
    assert gram_quotient(k2, np.array([[1.0], [-1.0]])) == pytest.approx(-1.0)
    assert gram_quotient(k2, np.eye(2)) == pytest.approx(0.0)
    for g in (cycle(5), petersen(), complete(5)):
        sp = extreme_eigenpairs(g)
        cfg = GramConfiguration(sp.v_bot[:, None] * np.array([[1.0, 0.0]]))
        assert gram_quotient(g, cfg) == pytest.approx(sp.lambda_n, abs=1e-12)


def test_gram_quotient_rejects_zero_configuration():
    with pytest.raises(ValueError):
        gram_quotient(complete(2), np.zeros((2, 3)))


@settings(max_examples=200, deadline=None)
@given(
    st.integers(2, 7).flatmap(lambda n: st.tuples(
        st.integers(0, 2**32 - 1),
        arrays(np.float64, (n, 3), elements=st.floats(-10, 10)),
    ))
)
def test_gram_quotient_never_below_least_eigenvalue(args):
    seed, v = args
    if not np.any(np.abs(v) > 1e-6):
        return
    a = random_symmetric(np.random.default_rng(seed), v.shape[0])
    lamn = np.linalg.eigvalsh(a)[0]
    assert gram_quotient(a, v) >= lamn - 1e-9


def test_gram_quotient_invariances():
    rng = np.random.default_rng(5)
    g = petersen()
    v = rng.standard_normal((10, 4))
    q = gram_quotient(g, v)
    # scaling, rotating the vectors, and relabeling vertices together
    assert gram_quotient(g, 3.7 * v) == pytest.approx(q)
    rot, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    assert gram_quotient(g, v @ rot) == pytest.approx(q)
    perm = rng.permutation(10)
    h = g.relabel({int(old): new for new, old in enumerate(perm)})
    assert gram_quotient(h, v[perm]) == pytest.approx(q)


def test_minimize_examples():
    assert minimize_gram_quotient(complete(2), dim=1)[1] == pytest.approx(-1.0, abs=1e-9)
    cfg, val = minimize_gram_quotient(cycle(5), dim=5)
    assert val == pytest.approx(2 * math.cos(4 * math.pi / 5), abs=1e-8)
    assert cfg.vectors.shape == (5, 5)


def test_minimize_random_matrix_matches_jacobi():
    a = random_symmetric(np.random.default_rng(17), 6)
    _, val = minimize_gram_quotient(a, seed=3)
    assert val == pytest.approx(jacobi_eigh(a)[0][0], abs=1e-6)


def test_minimize_is_seeded():
    a = minimize_gram_quotient(petersen(), seed=9)
    b = minimize_gram_quotient(petersen(), seed=9)
    assert np.array_equal(a[0].vectors, b[0].vectors)
