"""Sentence mover's distance between two weighted documents.

Three solvers over a Euclidean ground-distance matrix:

* exact: the transportation linear program, globally optimal;
* relaxed: drop one marginal constraint, send each mass to its nearest
  counterpart, take the max of the two directions (lower bound);
* greedy: move maximal flow along sentence pairs in ascending distance
  order, keeping both constraints (feasible, upper bound).

A vertex-enumeration oracle for tiny instances validates the exact solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.optimize import linprog
from scipy.spatial.distance import cdist

from .corpus import EmbeddingMatrix, SentenceVocabulary
from .weighting import MassDistribution

MARGINAL_TOL = 1e-7
RESIDUAL_TOL = 1e-9
FEAS_TOL = 1e-6


class InvariantError(RuntimeError):
    """An internal numerical invariant was violated."""


class Solver(Enum):
    EXACT = "exact"
    RELAXED_MAX = "relaxed"
    GREEDY = "greedy"


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Nonnegative flow matrix with prescribed row/column sums."""

    flows: np.ndarray  # (n_src, n_tgt)
    src_marginals: MassDistribution
    tgt_marginals: MassDistribution

    def validate(self, atol: float = MARGINAL_TOL) -> None:
        if np.any(self.flows < 0):
            raise InvariantError("transport plan has negative flow")
        row_err = np.abs(self.flows.sum(axis=1) - self.src_marginals.weights).max()
        col_err = np.abs(self.flows.sum(axis=0) - self.tgt_marginals.weights).max()
        if row_err > atol or col_err > atol:
            raise InvariantError(
                f"transport plan violates marginals (row err {row_err:g}, col err {col_err:g})"
            )


@dataclass(frozen=True, eq=False)
class SmdResult:
    distance: float
    solver: Solver
    plan: TransportPlan | None = None


def cost_matrix(
    src_vocab: SentenceVocabulary, tgt_vocab: SentenceVocabulary, emb: EmbeddingMatrix
) -> np.ndarray:
    """Pairwise Euclidean distances between the two vocabularies' embeddings."""
    src = emb.data[src_vocab.emb_rows].astype(np.float64)
    tgt = emb.data[tgt_vocab.emb_rows].astype(np.float64)
    if src.shape[1] != tgt.shape[1]:
        raise ValueError(f"embedding dim mismatch: {src.shape[1]} vs {tgt.shape[1]}")
    return cdist(src, tgt, metric="euclidean")


def _check_instance(cost: np.ndarray, a: MassDistribution, b: MassDistribution) -> None:
    n, m = cost.shape
    if len(a) != n or len(b) != m:
        raise ValueError(
            f"marginal sizes ({len(a)}, {len(b)}) do not match cost matrix {cost.shape}"
        )
    if abs(a.weights.sum() - b.weights.sum()) > FEAS_TOL:
        raise ValueError("infeasible marginals: total masses differ")


def exact_smd(cost: np.ndarray, a: MassDistribution, b: MassDistribution) -> SmdResult:
    """Solve the transportation LP to global optimality."""
    _check_instance(cost, a, b)
    n, m = cost.shape
    row_con = sparse.kron(sparse.eye(n), np.ones((1, m)), format="csr")
    col_con = sparse.kron(np.ones((1, n)), sparse.eye(m), format="csr")
    a_eq = sparse.vstack([row_con, col_con], format="csr")
    b_eq = np.concatenate([a.weights, b.weights])
    res = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise InvariantError(f"transportation LP failed: {res.message}")
    flows = np.clip(res.x.reshape(n, m), 0.0, None)
    plan = TransportPlan(flows=flows, src_marginals=a, tgt_marginals=b)
    return SmdResult(distance=float(res.fun), solver=Solver.EXACT, plan=plan)


def relaxed_directions(
    cost: np.ndarray, a: MassDistribution, b: MassDistribution
) -> tuple[float, float]:
    """One-sided optima: each source mass to its nearest target, and back."""
    _check_instance(cost, a, b)
    forward = float(a.weights @ cost.min(axis=1))
    backward = float(b.weights @ cost.min(axis=0))
    return forward, backward


def relaxed_smd(cost: np.ndarray, a: MassDistribution, b: MassDistribution) -> SmdResult:
    """Max of the two one-sided relaxations; lower bound on the exact distance."""
    forward, backward = relaxed_directions(cost, a, b)
    return SmdResult(distance=max(forward, backward), solver=Solver.RELAXED_MAX, plan=None)


def greedy_smd(cost: np.ndarray, a: MassDistribution, b: MassDistribution) -> SmdResult:
    """Greedy mover's distance: visit sentence pairs in ascending distance
    order (ties by source then target index) and move the maximal feasible
    flow at each. Keeps both marginals; upper bound on the exact distance."""
    _check_instance(cost, a, b)
    n, m = cost.shape
    rem_a = a.weights.copy()
    rem_b = b.weights.copy()
    flows = np.zeros((n, m))
    distance = 0.0
    remaining = float(rem_a.sum())
    # stable argsort on the raveled C-order matrix breaks ties by (i, j)
    for idx in np.argsort(cost.ravel(), kind="stable"):
        i, j = divmod(int(idx), m)
        flow = min(rem_a[i], rem_b[j])
        if flow > 0.0:
            rem_a[i] -= flow
            rem_b[j] -= flow
            flows[i, j] = flow
            distance += cost[i, j] * flow
            remaining -= flow
            if remaining <= 1e-15:
                break
    residual = float(rem_a.sum() + rem_b.sum())
    if residual > RESIDUAL_TOL:
        raise InvariantError(f"greedy mover's distance left {residual:g} mass unmoved")
    plan = TransportPlan(flows=flows, src_marginals=a, tgt_marginals=b)
    return SmdResult(distance=float(distance), solver=Solver.GREEDY, plan=plan)


# ---------------------------------------------------------------------------
# Independent small-instance oracle: vertex enumeration via spanning trees
# ---------------------------------------------------------------------------
#
# Vertices of the transportation polytope have forest support, so the optimum
# is attained at the leaf-elimination solution of some spanning tree of the
# complete bipartite graph. For each tree the flow on every edge is a fixed
# +/-1 combination of the marginals, precomputed once per matrix shape.

ORACLE_MAX_SIDE = 4


def _is_spanning_tree(cells: tuple[int, ...], n: int, m: int) -> bool:
    parent = list(range(n + m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cell in cells:
        i, j = divmod(cell, m)
        ri, rj = find(i), find(n + j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


@lru_cache(maxsize=None)
def _tree_tables(n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """All spanning trees of K_{n,m} as (coeffs, cells) arrays.

    coeffs has shape (trees, n+m-1, n+m): flows = coeffs @ concat(a, b).
    cells has shape (trees, n+m-1): raveled cost-matrix index per tree edge.
    """
    n_edges = n + m - 1
    all_coeffs = []
    all_cells = []
    for combo in itertools.combinations(range(n * m), n_edges):
        if not _is_spanning_tree(combo, n, m):
            continue
        adj: dict[int, list[tuple[int, int]]] = {u: [] for u in range(n + m)}
        for e_idx, cell in enumerate(combo):
            i, j = divmod(cell, m)
            adj[i].append((n + j, e_idx))
            adj[n + j].append((i, e_idx))
        # leaf elimination: each node's remaining mass as coefficients on [a; b]
        supply = np.eye(n + m)
        degree = {u: len(edges) for u, edges in adj.items()}
        removed_edges: set[int] = set()
        removed_nodes: set[int] = set()
        coeffs = np.zeros((n_edges, n + m))
        for _ in range(n_edges):
            leaf = next(
                u for u in range(n + m)
                if u not in removed_nodes and degree[u] == 1
            )
            other, e_idx = next(
                (v, e) for v, e in adj[leaf]
                if e not in removed_edges and v not in removed_nodes
            )
            coeffs[e_idx] = supply[leaf]
            supply[other] -= supply[leaf]
            removed_nodes.add(leaf)
            removed_edges.add(e_idx)
            degree[leaf] -= 1
            degree[other] -= 1
        all_coeffs.append(coeffs)
        all_cells.append(np.array(combo, dtype=np.intp))
    return np.stack(all_coeffs), np.stack(all_cells)


def oracle_smd(cost: np.ndarray, a: MassDistribution, b: MassDistribution) -> SmdResult:
    """Exact optimum by brute-force vertex enumeration; instances up to 4x4."""
    _check_instance(cost, a, b)
    n, m = cost.shape
    if n > ORACLE_MAX_SIDE or m > ORACLE_MAX_SIDE:
        raise ValueError(f"oracle instance too large: {n}x{m} (max {ORACLE_MAX_SIDE} per side)")
    coeffs, cells = _tree_tables(n, m)
    x = np.concatenate([a.weights, b.weights])
    flows = coeffs @ x  # (trees, n+m-1)
    feasible = flows.min(axis=1) >= -1e-12
    edge_costs = cost.ravel()[cells]  # (trees, n+m-1)
    totals = (np.clip(flows, 0.0, None) * edge_costs).sum(axis=1)
    if not feasible.any():
        raise InvariantError("oracle found no feasible vertex")
    best = int(np.flatnonzero(feasible)[np.argmin(totals[feasible])])
    plan_flows = np.zeros((n, m))
    plan_flows.ravel()[cells[best]] = np.clip(flows[best], 0.0, None)
    plan = TransportPlan(flows=plan_flows, src_marginals=a, tgt_marginals=b)
    return SmdResult(distance=float(totals[best]), solver=Solver.EXACT, plan=plan)
