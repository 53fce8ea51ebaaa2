"""Extreme eigenpairs of symmetric matrices and the Gram-form Rayleigh quotient.

Small matrices (n <= 64) are diagonalized with cyclic Jacobi rotations in
round-robin order, so each round is a batch of disjoint rotations applied as
one orthogonal similarity.  Larger ones use Lanczos with full
reorthogonalization.  Every returned eigenpair carries its residual
``||A v - lambda v||``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .graph import WeightedGraph

JACOBI_MAX_N = 64
JACOBI_MAX_SWEEPS = 60
LANCZOS_SEED = 0x5EED


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass(frozen=True)
class Spectrum:
    lambda_1: float
    lambda_n: float
    v_top: np.ndarray
    v_bot: np.ndarray
    residuals: tuple[float, float]
    method: str = "jacobi"


@dataclass(frozen=True)
class GramConfiguration:
    """One real vector per vertex, stored as the rows of an ``n x r`` array."""

    vectors: np.ndarray

    def __post_init__(self) -> None:
        v = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        if v.ndim != 2 or v.shape[1] < 1:
            raise ValueError("vectors must form an n x r array with r >= 1")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T


def default_tol(n: int) -> float:
    return 1e-9 if n <= JACOBI_MAX_N else 1e-7


def as_matrix(g: WeightedGraph | np.ndarray) -> np.ndarray:
    if isinstance(g, WeightedGraph):
        return g.matrix()
    a = np.asarray(g, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12):
        raise ValueError("matrix is not symmetric")
    return (a + a.T) / 2


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint index pairs covering every pair exactly once."""
    m = n + (n % 2)
    rounds = []
    for r in range(m - 1):
        pairs = [(m - 1, r)]
        pairs += [((r + k) % (m - 1), (r - k) % (m - 1)) for k in range(1, m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        if pairs:
            p, q = map(np.array, zip(*pairs))
            rounds.append((p, q))
    return rounds


def jacobi_eigh(a: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """All eigenvalues (ascending) and eigenvectors (columns) of a symmetric matrix."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    if n <= 1:
        return np.diag(a).copy(), v
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-15 * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            live = np.abs(apq) > 1e-300
            if not live.any():
                continue
            p, q, apq = p[live], q[live], apq[live]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            j = np.eye(n)
            j[p, p] = c
            j[q, q] = c
            j[p, q] = s
            j[q, p] = -s
            a = j.T @ a @ j
            a = (a + a.T) / 2
            a[p, q] = a[q, p] = 0.0
            v = v @ j
    else:
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        raise ConvergenceError("Jacobi sweeps exhausted", off)
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _fix_sign(x: np.ndarray) -> np.ndarray:
    x = x / np.linalg.norm(x)
    k = int(np.argmax(np.abs(x) - 1e-12 * np.arange(x.size)))
    return -x if x[k] < 0 else x


def _lanczos_extremes(a: np.ndarray, tol: float, seed: int = LANCZOS_SEED):
    n = a.shape[0]
    rng = np.random.default_rng(seed)
    q = np.zeros((n, n))
    alpha: list[float] = []
    beta: list[float] = []
    x = rng.standard_normal(n)
    q[:, 0] = x / np.linalg.norm(x)
    best = np.inf
    for k in range(n):
        w = a @ q[:, k]
        alpha.append(float(q[:, k] @ w))
        w -= q[:, : k + 1] @ (q[:, : k + 1].T @ w)
        w -= q[:, : k + 1] @ (q[:, : k + 1].T @ w)
        b = float(np.linalg.norm(w))
        if k + 1 == n:
            beta_next = 0.0
        elif b <= 1e-12 * max(1.0, abs(alpha[-1])):
            # invariant subspace: continue from a fresh orthogonal direction
            x = rng.standard_normal(n)
            for _ in range(2):
                x -= q[:, : k + 1] @ (q[:, : k + 1].T @ x)
            q[:, k + 1] = x / np.linalg.norm(x)
            beta_next = 0.0
        else:
            q[:, k + 1] = w / b
            beta_next = b
        if (k + 1) % 8 == 0 or k + 1 == n or beta_next == 0.0:
            theta, s = eigh_tridiagonal(np.array(alpha), np.array(beta))
            res = np.abs(beta_next * s[-1, [0, -1]])
            best = min(best, float(res.max()))
            if res.max() <= tol * 0.1 or k + 1 == n:
                basis = q[:, : k + 1]
                v_bot = basis @ s[:, 0]
                v_top = basis @ s[:, -1]
                return theta[-1], theta[0], v_top, v_bot
        beta.append(beta_next)
    raise ConvergenceError("Lanczos did not converge", best)


def extreme_eigenpairs(g: WeightedGraph | np.ndarray, tol: float | None = None) -> Spectrum:
    """Largest and least eigenvalue of the (weighted) adjacency matrix, with eigenvectors."""
    a = as_matrix(g)
    n = a.shape[0]
    if n < 1:
        raise ValueError("need at least one vertex")
    tol = default_tol(n) if tol is None else tol
    if not a.any():
        e = np.zeros(n)
        e[0] = 1.0
        return Spectrum(0.0, 0.0, e, e.copy(), (0.0, 0.0), "trivial")
    if n <= JACOBI_MAX_N:
        w, vecs = jacobi_eigh(a)
        lam1, lamn, vt, vb = w[-1], w[0], vecs[:, -1], vecs[:, 0]
        method = "jacobi"
    else:
        lam1, lamn, vt, vb = _lanczos_extremes(a, tol)
        method = "lanczos"
    vt, vb = _fix_sign(vt), _fix_sign(vb)
    # refine the eigenvalues as Rayleigh quotients of the normalized vectors
    lam1, lamn = float(vt @ a @ vt), float(vb @ a @ vb)
    res = (float(np.linalg.norm(a @ vt - lam1 * vt)), float(np.linalg.norm(a @ vb - lamn * vb)))
    if max(res) > tol:
        raise ConvergenceError("eigenpair residual above tolerance", max(res))
    return Spectrum(lam1, lamn, vt, vb, res, method)


def largest_eigenvalue(a: np.ndarray) -> float:
    """lambda_1 of a small dense symmetric matrix (0 for the empty matrix)."""
    if a.size == 0 or not a.any():
        return 0.0
    return float(jacobi_eigh(a)[0][-1])


def gram_quotient(g: WeightedGraph | np.ndarray, cfg: GramConfiguration | np.ndarray) -> float:
    """``sum_ij A_ij <v_i, v_j> / sum_i ||v_i||^2``."""
    a = as_matrix(g)
    v = cfg.vectors if isinstance(cfg, GramConfiguration) else np.atleast_2d(np.asarray(cfg, float))
    if v.shape[0] != a.shape[0]:
        raise ValueError("need one vector per vertex")
    denom = float(np.sum(v * v))
    if denom <= 0.0:
        raise ValueError("configuration is all zero")
    return float(np.sum(a * (v @ v.T)) / denom)


def minimize_gram_quotient(
    g: WeightedGraph | np.ndarray,
    dim: int | None = None,
    restarts: int = 3,
    seed: int = 0,
    tol: float = 1e-9,
    max_iter: int = 20000,
) -> tuple[GramConfiguration, float]:
    """Numerically minimize the Gram quotient over ``n x dim`` configurations.

    Uses only products with the matrix.  Each step moves within the span of
    the current configuration, its projected gradient and the previous step,
    choosing the best point of that span exactly (a 3x3 Rayleigh-Ritz
    problem), then renormalizes.  Returns the best configuration over all
    restarts and its quotient.
    """
    a = as_matrix(g)
    n = a.shape[0]
    r = n if dim is None else dim
    if r < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.abs(a).sum(axis=1).max(initial=0.0)))
    gtol = 1e-3 * tol * scale
    best_v, best_q = None, np.inf
    for _ in range(max(1, restarts)):
        v = rng.standard_normal((n, r))
        v /= np.linalg.norm(v)
        prev = np.zeros_like(v)
        for _ in range(max_iter):
            av = a @ v
            q = float(np.sum(v * av))
            grad = av - q * v
            if np.linalg.norm(grad) <= gtol:
                break
            basis = [v.ravel(), grad.ravel()]
            if np.any(prev):
                basis.append(prev.ravel())
            qmat, rmat = np.linalg.qr(np.column_stack(basis))
            keep = np.abs(np.diag(rmat)) > 1e-13 * np.abs(rmat[0, 0])
            qmat = qmat[:, keep]
            mats = qmat.T.reshape(-1, n, r)
            proj = np.array([[np.sum(x * (a @ y)) for y in mats] for x in mats])
            _, c = np.linalg.eigh((proj + proj.T) / 2)
            new = np.tensordot(c[:, 0], mats, axes=1)
            new /= np.linalg.norm(new)
            prev = new - v * float(np.sum(new * v))
            v = new
        q = float(np.sum(v * (a @ v)))
        if q < best_q:
            best_v, best_q = v, q
    return GramConfiguration(best_v), gram_quotient(a, best_v)
