"""Vector chromatic number: simplex frames, a numerical solver and a certificate checker.

The solver minimizes ``t(U) = max_{ij in E} <u_i, u_j>`` over unit vectors.
The max is smoothed as ``tau * logsumexp(<u_i,u_j> / tau)`` and ``tau`` is
annealed towards zero, each stage solved with L-BFGS over unnormalized
rows (the objective normalizes them).  Any configuration it returns is a
feasible vector coloring for ``k = 1 - 1/t``, so ``k_upper`` is a true upper
bound on the vector chromatic number; ``k_lower`` is the Hoffman bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp, softmax

from .bounds import hoffman_bound
from .graph import WeightedGraph
from .spectral import GramConfiguration

NORM_TOL = 1e-9
EDGE_TOL = 1e-9
TEMPERATURES = np.geomspace(0.1, 1e-8, 15)
STAGE_MAXITER = 3000


class SolverFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class SimplexFrame:
    k: int
    vectors: np.ndarray  # k x (k-1)

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T


def simplex_frame(k: int) -> SimplexFrame:
    """Vertices of the regular simplex with k unit vectors in R^(k-1), centred at 0.

    The centred, rescaled standard basis of R^k is written in the orthonormal
    Helmert basis of the hyperplane orthogonal to the all-ones vector.
    """
    if k < 2:
        raise ValueError("simplex frame needs k >= 2")
    helmert = np.zeros((k - 1, k))
    for row in range(1, k):
        helmert[row - 1, :row] = 1.0
        helmert[row - 1, row] = -row
        helmert[row - 1] /= math.sqrt(row * (row + 1))
    centred = np.eye(k) - 1.0 / k
    vecs = centred @ helmert.T / math.sqrt((k - 1) / k)
    vecs.setflags(write=False)
    return SimplexFrame(k, vecs)


@dataclass(frozen=True)
class VectorColoringResult:
    k_upper: float
    k_lower: float
    assignment: GramConfiguration
    max_edge_ip: float
    rank: int
    restarts: int


@dataclass(frozen=True)
class VectorColoringCheck:
    passed: bool
    k: float
    worst_norm_error: float
    worst_edge_violation: float
    worst_edge: tuple[int, int] | None


def default_rank(n: int) -> int:
    return min(n, math.ceil(math.sqrt(2 * n)) + 2)


def _edge_index(g: WeightedGraph) -> tuple[np.ndarray, np.ndarray]:
    e = np.array(g.sorted_edges(), dtype=int).reshape(-1, 2)
    return e[:, 0], e[:, 1]


def _normalize(x: np.ndarray) -> np.ndarray:
    nr = np.linalg.norm(x, axis=1, keepdims=True)
    nr[nr == 0] = 1.0
    return x / nr


def max_edge_inner_product(g: WeightedGraph, vectors: np.ndarray) -> float:
    if g.m == 0:
        return -math.inf
    i, j = _edge_index(g)
    return float(np.max(np.sum(vectors[i] * vectors[j], axis=1)))


def _anneal(x: np.ndarray, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    n, r = x.shape
    for tau in TEMPERATURES:

        def objective(flat: np.ndarray) -> tuple[float, np.ndarray]:
            y = flat.reshape(n, r)
            nr = np.linalg.norm(y, axis=1, keepdims=True)
            nr = np.maximum(nr, 1e-300)
            u = y / nr
            s = np.sum(u[i] * u[j], axis=1)
            w = softmax(s / tau)
            gu = np.zeros_like(u)
            np.add.at(gu, i, w[:, None] * u[j])
            np.add.at(gu, j, w[:, None] * u[i])
            gy = (gu - np.sum(gu * u, axis=1, keepdims=True) * u) / nr
            return float(tau * logsumexp(s / tau)), gy.ravel()

        res = minimize(
            objective, x.ravel(), jac=True, method="L-BFGS-B",
            options={"maxiter": STAGE_MAXITER, "ftol": 1e-16, "gtol": 1e-14},
        )
        x = _normalize(res.x.reshape(n, r))
    return x


def _numerical_rank(u: np.ndarray) -> int:
    sv = np.linalg.svd(u, compute_uv=False)
    return int(np.sum(sv > 1e-4 * sv[0]))


def solve_vector_chromatic(
    g: WeightedGraph,
    rank: int | None = None,
    restarts: int = 3,
    seed: int = 0,
    tol: float = 1e-9,
) -> VectorColoringResult:
    """Upper and lower estimates of the vector chromatic number with a certificate.

    Runs ``restarts`` seeded starts at the given embedding rank (default
    ``min(n, ceil(sqrt(2n)) + 2)``).  If the best configuration uses every
    available dimension the low rank may be binding, so the search is
    repeated at rank n and the better result kept.
    """
    if g.is_weighted:
        raise ValueError("vector coloring is defined on unit-weight graphs")
    if g.m == 0:
        u = np.zeros((g.n, 1))
        u[:, 0] = 1.0
        return VectorColoringResult(1.0, 1.0, GramConfiguration(u), -math.inf, 1, 0)
    n = g.n
    r = default_rank(n) if rank is None else rank
    if r < 1:
        raise ValueError("rank must be >= 1")
    i, j = _edge_index(g)
    rng = np.random.default_rng(seed)

    def run(dim: int) -> tuple[float, np.ndarray]:
        best_t, best_u = math.inf, None
        for _ in range(max(1, restarts)):
            u = _anneal(rng.standard_normal((n, dim)), i, j)
            t = max_edge_inner_product(g, u)
            # strict comparison keeps the lowest restart index on ties
            if t < best_t:
                best_t, best_u = t, u
        return best_t, best_u

    t_best, u_best = run(r)
    if r < n and _numerical_rank(u_best) >= r:
        t_full, u_full = run(n)
        if t_full < t_best:
            t_best, u_best, r = t_full, u_full, n
    if t_best >= 0:
        raise SolverFailure(f"best max edge inner product {t_best:.3g} >= 0; increase restarts")
    cert = GramConfiguration(u_best)
    check = verify_vector_coloring(g, cert, 1.0 - 1.0 / t_best)
    if not check.passed:
        raise SolverFailure(f"certificate failed re-verification: {check}")
    return VectorColoringResult(
        1.0 - 1.0 / t_best, hoffman_bound(g), cert, t_best, r, max(1, restarts)
    )


def verify_vector_coloring(
    g: WeightedGraph, assignment: GramConfiguration | np.ndarray, k: float
) -> VectorColoringCheck:
    """Check unit norms and ``<u_i,u_j> <= -1/(k-1)`` on every edge, both to 1e-9."""
    u = assignment.vectors if isinstance(assignment, GramConfiguration) else np.atleast_2d(assignment)
    if u.shape[0] != g.n:
        raise ValueError(f"assignment has {u.shape[0]} vectors for {g.n} vertices")
    norm_err = float(np.max(np.abs(np.linalg.norm(u, axis=1) - 1.0), initial=0.0))
    worst, worst_edge = -math.inf, None
    if g.m:
        if k <= 1:
            limit = -math.inf
        else:
            limit = -1.0 / (k - 1.0)
        i, j = _edge_index(g)
        viol = np.sum(u[i] * u[j], axis=1) - limit
        at = int(np.argmax(viol))
        worst, worst_edge = float(viol[at]), (int(i[at]), int(j[at]))
    passed = norm_err <= NORM_TOL and worst <= EDGE_TOL
    return VectorColoringCheck(passed, k, norm_err, worst, worst_edge)


def coloring_to_vectors(color: list[int] | dict[int, int], k: int) -> GramConfiguration:
    """Map a proper k-coloring to vectors through the simplex frame."""
    frame = simplex_frame(k).vectors
    cols = [color[v] for v in range(len(color))]
    return GramConfiguration(frame[cols])


def dump_assignment(cfg: GramConfiguration) -> str:
    return "".join("\t".join(repr(float(x)) for x in row) + "\n" for row in cfg.vectors)


def load_assignment(text: str) -> GramConfiguration:
    rows = [[float(x) for x in line.split("\t")] for line in text.splitlines() if line.strip()]
    if len({len(r) for r in rows}) > 1:
        raise ValueError("ragged vector file")
    return GramConfiguration(np.array(rows))
