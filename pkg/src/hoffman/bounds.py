"""Hoffman-type spectral lower bounds.

All bounds take the convention that an edgeless graph has every parameter
equal to 1.  Values are real; no rounding is applied here.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .graph import WeightedGraph, stats
from .spectral import Spectrum, extreme_eigenpairs, jacobi_eigh


class BoundUndefined(ValueError):
    """The bound's denominator is not negative (or positive, as required)."""


def _spectrum(g: WeightedGraph, spectrum: Spectrum | None) -> Spectrum:
    return extreme_eigenpairs(g) if spectrum is None else spectrum


def hoffman_bound(g: WeightedGraph, spectrum: Spectrum | None = None) -> float:
    """``1 - lambda_1 / lambda_n`` of the (weighted) adjacency matrix."""
    if g.m == 0:
        return 1.0
    sp = _spectrum(g, spectrum)
    if sp.lambda_n >= 0:
        raise BoundUndefined("bound undefined: least eigenvalue is not negative")
    return 1.0 - sp.lambda_1 / sp.lambda_n


def covering_bound(g: WeightedGraph, alpha: float, spectrum: Spectrum | None = None) -> float:
    """``(d - lambda_n) / (2 alpha - lambda_n)`` with d the average degree."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if g.m == 0:
        return 1.0
    sp = _spectrum(g, spectrum)
    if sp.lambda_n >= 0:
        raise BoundUndefined("bound undefined: least eigenvalue is not negative")
    d = 2.0 * g.m / g.n
    return (d - sp.lambda_n) / (2.0 * alpha - sp.lambda_n)


def clustering_bound(g: WeightedGraph, lam: float, spectrum: Spectrum | None = None) -> float:
    """``(lambda_1 - lambda_n) / (lam - lambda_n)``; requires ``lam > lambda_n``."""
    if g.m == 0:
        if lam < 0:
            raise BoundUndefined("no clustering exists for a negative threshold")
        return 1.0
    sp = _spectrum(g, spectrum)
    if lam <= sp.lambda_n:
        raise BoundUndefined(f"threshold {lam} must exceed lambda_n = {sp.lambda_n}")
    return (sp.lambda_1 - sp.lambda_n) / (lam - sp.lambda_n)


def _ratio_bound(a: np.ndarray) -> float:
    w = jacobi_eigh(a)[0]
    if w[0] >= 0:
        return -math.inf
    return 1.0 - w[-1] / w[0]


def improve_weight_bound(
    g: WeightedGraph, iterations: int = 20, seed: int = 0, restarts: int = 3
) -> tuple[WeightedGraph, float]:
    """Search edge weightings W for a larger ``1 - lambda_1(W)/lambda_n(W)``.

    Coordinate search: for each edge in a seeded random order try doubling,
    halving or negating its weight, keep the change if the bound improves.
    The first restart starts from the adjacency matrix, later ones from
    seeded random positive perturbations of it.  Weights are rescaled to
    max |w| = 1, which leaves the bound unchanged.
    """
    if g.m == 0:
        raise ValueError("graph has no edges")
    edges = g.sorted_edges()
    idx = np.array(edges).T
    rng = np.random.default_rng(seed)

    def build(w: np.ndarray) -> np.ndarray:
        a = np.zeros((g.n, g.n))
        a[idx[0], idx[1]] = w
        a[idx[1], idx[0]] = w
        return a

    base = np.ones(len(edges))
    best_w, best_val = base, _ratio_bound(build(base))
    for r in range(max(1, restarts)):
        w = base.copy() if r == 0 else rng.uniform(0.5, 1.5, len(edges))
        w /= np.abs(w).max()
        val = _ratio_bound(build(w))
        for _ in range(iterations):
            improved = False
            for e in rng.permutation(len(edges)):
                for factor in (2.0, 0.5, -1.0):
                    trial = w.copy()
                    trial[e] *= factor
                    trial /= np.abs(trial).max()
                    tv = _ratio_bound(build(trial))
                    if tv > val + 1e-12:
                        w, val, improved = trial, tv, True
            if not improved:
                break
        if val > best_val + 1e-12:
            best_w, best_val = w, val
    weights = {e: float(x) for e, x in zip(edges, best_w)}
    return g.with_weights(weights), float(best_val)


def weight_digest(g: WeightedGraph) -> str:
    body = ";".join(f"{i},{j},{g.w(i, j)!r}" for i, j in g.sorted_edges())
    return hashlib.sha256(body.encode()).hexdigest()[:16]


@dataclass
class BoundReport:
    graph_id: str
    n: int
    m: int
    d: float
    lambda_1: float
    lambda_n: float
    hoffman: float | None
    covering: dict[str, float] | None = None
    clustering: dict[str, float] | None = None
    weight_bound: dict[str, Any] | None = None
    status: str = "ok"
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        out = {
            "v": "v1",
            "graph": self.graph_id,
            "n": self.n,
            "m": self.m,
            "d": self.d,
            "lambda_1": self.lambda_1,
            "lambda_n": self.lambda_n,
            "hoffman": self.hoffman,
            "hoffman_ceil": _ceil(self.hoffman),
            "covering": self.covering,
            "clustering": self.clustering,
            "weight_bound": self.weight_bound,
            "status": self.status,
        }
        if self.notes:
            out["notes"] = self.notes
        return out


def _ceil(x: float | None) -> int | None:
    # guard against 2.0000000000000004 style noise before taking the ceiling
    return None if x is None else int(math.ceil(x - 1e-9))


def bound_report(
    graph_id: str,
    g: WeightedGraph,
    alpha: float | None = None,
    lam: float | None = None,
    improve: tuple[int, int] | None = None,
) -> BoundReport:
    st = stats(g)
    sp = extreme_eigenpairs(g) if g.n else None
    rep = BoundReport(
        graph_id, g.n, g.m, st.d,
        sp.lambda_1 if sp else 0.0, sp.lambda_n if sp else 0.0, None,
    )
    if g.m == 0:
        rep.status = "degenerate-edgeless"
    try:
        rep.hoffman = hoffman_bound(g, sp)
    except BoundUndefined as exc:
        rep.status = "undefined"
        rep.notes.append(str(exc))
    if alpha is not None:
        try:
            v = covering_bound(g, alpha, sp)
            rep.covering = {"alpha": alpha, "value": v, "ceil": _ceil(v)}
        except BoundUndefined as exc:
            rep.notes.append(str(exc))
    if lam is not None:
        try:
            v = clustering_bound(g, lam, sp)
            rep.clustering = {"lambda": lam, "value": v, "ceil": _ceil(v)}
        except BoundUndefined as exc:
            rep.notes.append(str(exc))
    if improve is not None and g.m > 0:
        w, v = improve_weight_bound(g, improve[0], improve[1])
        rep.weight_bound = {"digest": weight_digest(w), "value": v, "ceil": _ceil(v)}
    return rep
