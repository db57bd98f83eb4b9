"""
Directed-edge (Hashimoto) operator machinery
Non-backtracking operator B, incidence operators S and E, A_{r+1} = S B^r E and spectral radii
"""

import math
import logging
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy import linalg, sparse

from config import ENGINE_CONFIG, SPECTRAL_CONFIG
from errors import ConvergenceError, GraphError, PreconditionError, WorkCapExceeded
from graph_core import Graph, check_tree_degrees, sphere_size

logger = logging.getLogger(__name__)

_INT64_SAFE = 2 ** 62


class DirectedEdgeSpace:
    """
    Directed edges of a graph

    The m-th undirected edge (u, v), u < v in sorted order, gives index 2m
    to u->v and 2m+1 to v->u, so the reversal of i is i ^ 1.
    """

    def __init__(self, g: Graph):
        self.graph = g
        start: List[int] = []
        end: List[int] = []
        for u, v in g.edges():
            start.extend((u, v))
            end.extend((v, u))
        self.start = np.array(start, dtype=np.int64)
        self.end = np.array(end, dtype=np.int64)
        self.size = len(start)
        self.index = {(int(s), int(t)): i for i, (s, t) in enumerate(zip(start, end))}
        self.successors: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(self.index[(t, w)] for w in g.adjacency[t] if w != s)
            for s, t in zip(start, end)
        )
        self._B = None

    @staticmethod
    def reversal(i: int) -> int:
        return i ^ 1

    def out_degree(self, i: int) -> int:
        return len(self.successors[i])

    @property
    def B(self) -> sparse.csr_matrix:
        if self._B is None:
            self._B = hashimoto_matrix(self)
        return self._B

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"<DirectedEdgeSpace {self.graph.name or 'graph'}: {self.size} directed edges>"


def directed_edge_space(g: Graph) -> DirectedEdgeSpace:
    return DirectedEdgeSpace(g)


def hashimoto_matrix(space: DirectedEdgeSpace, dtype=np.int64) -> sparse.csr_matrix:
    """B[e0, e] = 1 when end(e0) = start(e) and e is not the reversal of e0"""
    indptr = np.zeros(space.size + 1, dtype=np.int64)
    np.cumsum([len(s) for s in space.successors], out=indptr[1:])
    indices = np.fromiter((j for s in space.successors for j in s), dtype=np.int64,
                          count=int(indptr[-1]))
    data = np.ones(len(indices), dtype=dtype)
    return sparse.csr_matrix((data, indices, indptr), shape=(space.size, space.size))


def incidence_matrices(space: DirectedEdgeSpace, dtype=np.int64) -> Tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """
    (S, E) with S[v, e] = 1 when start(e) = v and E[e, w] = 1 when end(e) = w

    S E = A and S B^r E = A_{r+1}.
    """
    n = space.graph.vertex_count
    edge_ids = np.arange(space.size)
    ones = np.ones(space.size, dtype=dtype)
    S = sparse.csr_matrix((ones, (space.start, edge_ids)), shape=(n, space.size))
    E = sparse.csr_matrix((ones, (edge_ids, space.end)), shape=(space.size, n))
    return S, E


def incidence_norms(space: DirectedEdgeSpace) -> Tuple[float, float]:
    """Operator 2-norms (largest singular values) of S and E"""
    S, E = incidence_matrices(space, dtype=np.float64)
    if space.size == 0:
        return 0.0, 0.0
    return float(linalg.norm(S.toarray(), 2)), float(linalg.norm(E.toarray(), 2))


def hashimoto_apply(space: DirectedEdgeSpace, vec) -> np.ndarray:
    """One application of B: (B vec)(e0) = sum of vec over the successors of e0"""
    vec = np.asarray(vec)
    if vec.shape != (space.size,):
        raise GraphError(f"Vector of shape {vec.shape} does not match {space.size} directed edges")
    if vec.dtype == object:
        out = np.empty(space.size, dtype=object)
        for i, succ in enumerate(space.successors):
            out[i] = sum((vec[j] for j in succ), 0)
        return out
    return space.B @ vec


def nbw_via_hashimoto(g: Graph, r: int, work_cap: Optional[int] = None) -> np.ndarray:
    """
    Exact A_{r+1} as S B^r E

    Columns of E are pushed through B r times, then collected by S. Uses
    sparse int64 products while (max degree - 1)^r stays safely in range,
    otherwise Python integers.
    """
    if r < 0:
        raise GraphError(f"Power must be non-negative, got {r}")
    space = directed_edge_space(g)
    n = g.vertex_count
    cap = ENGINE_CONFIG['work_cap'] if work_cap is None else work_cap
    work = space.size * n * max(r, 1)
    if work > cap:
        raise WorkCapExceeded(f"S B^{r} E needs ~{work} operations, cap is {cap}")

    S, E = incidence_matrices(space)
    growth = max(g.max_degree - 1, 1)
    if growth ** r * max(g.max_degree, 1) < _INT64_SAFE:
        X = E
        for _ in range(r):
            X = space.B @ X
        return np.array((S @ X).toarray(), dtype=object)

    X = np.array(E.toarray(), dtype=object)
    for _ in range(r):
        X = np.array([hashimoto_apply(space, X[:, w]) for w in range(n)], dtype=object).T
    result = np.zeros((n, n), dtype=object)
    for i in range(space.size):
        result[space.start[i]] += X[i]
    return result


def power_iteration(M, tol: Optional[float] = None, max_iter: Optional[int] = None,
                    lazy: bool = True) -> Tuple[float, np.ndarray]:
    """
    Perron value of a non-negative operator by power iteration

    Iterates the 1-normalized vector under I + M (or M when lazy is False)
    from the all-ones start and stops when successive 1-norm ratios agree
    to tol relative. The shift keeps peripheral eigenvalues of the same
    modulus from stalling convergence.

    Returns:
        (Perron value of M, normalized Perron vector)
    """
    tol = SPECTRAL_CONFIG['power_tol'] if tol is None else tol
    max_iter = SPECTRAL_CONFIG['power_max_iter'] if max_iter is None else max_iter
    n = M.shape[0]
    if n == 0:
        return 0.0, np.zeros(0)
    x = np.full(n, 1.0 / n)
    shift = 1.0 if lazy else 0.0
    previous = None
    for iteration in range(max_iter):
        y = M @ x
        if lazy:
            y = y + x
        ratio = float(np.abs(y).sum())
        if ratio == 0.0:
            return 0.0, x
        x = y / ratio
        if previous is not None and abs(ratio - previous) < tol * ratio:
            logger.info(f"Power iteration converged after {iteration + 1} steps")
            return max(ratio - shift, 0.0), x
        previous = ratio
    raise ConvergenceError(f"Power iteration did not converge in {max_iter} steps "
                           f"(last ratio {previous})")


def hashimoto_spectral_radius_finite(space: DirectedEdgeSpace, tol: Optional[float] = None,
                                     max_iter: Optional[int] = None) -> float:
    """
    Spectral radius of B on a finite connected graph with minimum degree 2

    On bipartite graphs B^2 is iterated and the square root taken.
    """
    g = space.graph
    if g.vertex_count == 0 or not g.is_connected():
        raise PreconditionError("Hashimoto spectral radius needs a connected graph")
    if min(g.degrees) < 2:
        raise PreconditionError("Hashimoto spectral radius needs minimum degree 2")
    B = hashimoto_matrix(space, dtype=np.float64)
    if g.side is not None or _is_bipartite(g):
        value, _ = power_iteration(B @ B, tol, max_iter)
        return math.sqrt(value)
    value, _ = power_iteration(B, tol, max_iter)
    return value


def _is_bipartite(g: Graph) -> bool:
    return nx.is_bipartite(g.to_networkx())


def tree_growth_limit(k: int, l: int) -> float:
    """((k-1)(l-1))^(1/4), the spectral radius of B on the (k,l) tree"""
    check_tree_degrees(k, l)
    return ((k - 1) * (l - 1)) ** 0.25


def tree_ball_growth_rate(k: int, l: int, r_max: int) -> np.ndarray:
    """
    Estimates sqrt(|B(v,r)|^(1/r)) for r = 1..r_max (entry r-1)

    Ball sizes are exact integers; the estimates converge to tree_growth_limit(k, l).
    """
    check_tree_degrees(k, l)
    if r_max < 1:
        raise GraphError(f"r_max must be at least 1, got {r_max}")
    estimates = np.empty(r_max)
    size = 1
    for r in range(1, r_max + 1):
        size += sphere_size(k, l, r)
        estimates[r - 1] = math.exp(math.log(size) / (2 * r))
    return estimates
