"""Limit of PageRank as the damping factor tends to one.

With ``eps = 1 - c`` the Google matrix is ``P + eps * (E/n - P)``, a
singularly perturbed chain whose unperturbed part has the Pure-OUT sink
SCCs as ergodic classes. The limit puts mass ``nu_i`` on class ``i``, spread
by the class's own stationary distribution ``mu_i``; the transient states
(transient Pure OUT and the whole ESCC) get nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError, DegenerateStructureError
from .graph import PrincipalBlock, WebGraph

SOLVE_TOL = 1e-12


def _require_classes(dec):
    if dec.m == 0:
        raise DegenerateStructureError(
            "no ergodic Pure-OUT classes; limit is the unperturbed ESCC problem")
    if not dec.leaky:
        raise DegenerateStructureError(
            "the ESCC contains a closed class; it is not transient at c = 1")


def class_stationary(graph: WebGraph, dec, i, tolerance=SOLVE_TOL, max_iterations=10_000_000):
    """Stationary distribution of the walk confined to ergodic class ``i``.

    Uses the lazy chain ``x <- (x + x Q_i) / 2``: same fixed point, and it
    converges for periodic classes too.
    """
    nodes = dec.ergodic_classes[i]
    Q = PrincipalBlock(graph, nodes)
    x = np.full(Q.size, 1.0 / Q.size)
    residual = math.inf
    for _ in range(max_iterations):
        xq = Q.apply_row(x)
        residual = float(np.abs(xq - x).sum())
        if residual <= tolerance:
            return x
        x = 0.5 * (x + xq)
        x /= x.sum()
    raise ConvergenceError(f"stationary distribution of class {i} did not converge",
                           residual, max_iterations)


def _neumann(apply, b, tolerance=SOLVE_TOL, max_iterations=10_000_000):
    """``sum_k B^k b`` for a contraction ``B`` given as ``apply``.

    Stops when the geometric tail estimate ``|t_k| r / (1 - r)`` drops below
    ``tolerance``, with ``r`` the observed ratio of successive term norms.
    """
    term = np.array(b, dtype=float)
    acc = term.copy()
    prev = np.abs(term).max()
    if prev == 0.0:
        return acc
    for _ in range(max_iterations):
        term = apply(term)
        acc += term
        size = np.abs(term).max()
        if size == 0.0:
            return acc
        r = size / prev
        prev = size
        if r < 1.0 and size * r / (1.0 - r) <= tolerance:
            return acc
    raise ConvergenceError("Neumann series did not converge", float(prev), max_iterations)


def _exit_matrix(graph: WebGraph, dec):
    """Sparse ``n_transient x m`` matrix with column ``i`` equal to ``R~_i 1``."""
    trans = dec.transient
    cls = dec.class_index()
    pos = np.full(graph.n, -1, dtype=np.int64)
    pos[trans] = np.arange(trans.size)
    src, dst = graph.edges()
    hit = (pos[src] >= 0) & (cls[dst] >= 0)
    w = 1.0 / graph.out_degree[src[hit]]
    B = sp.coo_matrix((w, (pos[src[hit]], cls[dst[hit]])), shape=(trans.size, dec.m)).tocsr()
    d_rows = pos[graph.dangling]
    if d_rows.size:
        sizes = np.array([q.size for q in dec.ergodic_classes], dtype=float) / graph.n
        rows = np.repeat(d_rows, dec.m)
        cols = np.tile(np.arange(dec.m), d_rows.size)
        B = B + sp.coo_matrix((np.tile(sizes, d_rows.size), (rows, cols)),
                              shape=B.shape).tocsr()
    return B


def absorption_weights(graph: WebGraph, dec):
    """``u_T~ [I - T~]^{-1}``: expected visits to each transient state from a uniform start."""
    _require_classes(dec)
    Tt = PrincipalBlock(graph, dec.transient)
    u = np.full(Tt.size, 1.0 / Tt.size)
    return _neumann(Tt.apply_row, u)


def class_masses(graph: WebGraph, dec) -> np.ndarray:
    """Limit PageRank mass of every ergodic class.

    ``n_i/n + (n_T~/n) u_T~ [I - T~]^{-1} R~_i 1``: the class's own share
    plus what drains into it from the transient states.
    """
    w = absorption_weights(graph, dec)
    drained = np.asarray(_exit_matrix(graph, dec).T @ w).ravel()
    sizes = np.array([q.size for q in dec.ergodic_classes], dtype=float)
    return (sizes + dec.transient.size * drained) / graph.n


def absorption_mass(graph: WebGraph, dec, i):
    """Limit mass of class ``i`` and its absorption vector ``phi_i = [I - T~]^{-1} R~_i 1``."""
    _require_classes(dec)
    Tt = PrincipalBlock(graph, dec.transient)
    b = np.asarray(_exit_matrix(graph, dec)[:, i].todense()).ravel()
    phi = _neumann(Tt.apply_column, b)
    mass = (dec.ergodic_classes[i].size + phi.sum()) / graph.n
    return float(mass), phi


@dataclass(frozen=True)
class LimitVector:
    values: np.ndarray
    per_class_mass: np.ndarray


def limit_pagerank(graph: WebGraph, dec) -> LimitVector:
    """``lim_{c -> 1}`` of the PageRank vector."""
    _require_classes(dec)
    masses = class_masses(graph, dec)
    values = np.zeros(graph.n)
    for i, nodes in enumerate(dec.ergodic_classes):
        values[nodes] = masses[i] * class_stationary(graph, dec, i)
    return LimitVector(values=values, per_class_mass=masses)


@dataclass(frozen=True)
class AggregatedChain:
    """Aggregated description of the undamped chain.

    ``absorption_vectors[:, i]`` is the probability that the walk started
    at each transient state (ordered as ``dec.transient``) ends in class
    ``i``.
    """

    class_distributions: list
    absorption_vectors: np.ndarray
    aggregated_stationary: np.ndarray

    def generator(self):
        """Aggregated generator ``D = 1 nu - I`` (identical rows plus ``-I``)."""
        m = self.aggregated_stationary.size
        return np.tile(self.aggregated_stationary, (m, 1)) - np.eye(m)


def aggregated_generator(graph: WebGraph, dec) -> AggregatedChain:
    """Aggregated chain with ``nu`` from the identical-rows formula.

    ``D + I`` has every row equal to
    ``(n_i + n_T~ u_T~ [I - T~]^{-1} R~_i 1) / n``, so ``nu`` is that row.
    The absorption vectors are summed through ``u_T~ / n`` as a second
    route to the same numbers.
    """
    _require_classes(dec)
    mus = [class_stationary(graph, dec, i) for i in range(dec.m)]
    Tt = PrincipalBlock(graph, dec.transient)
    B = _exit_matrix(graph, dec).toarray()
    phi = _neumann(Tt.apply_column, B)
    sizes = np.array([q.size for q in dec.ergodic_classes], dtype=float)
    nu = (sizes + phi.sum(axis=0)) / graph.n
    return AggregatedChain(class_distributions=mus, absorption_vectors=phi,
                           aggregated_stationary=nu)


def dense_aggregated_generator(graph: WebGraph, dec) -> np.ndarray:
    """``D = M C Q`` from explicit dense matrices. Small graphs only.

    ``M`` stacks the class stationary distributions, ``Q`` holds class
    membership with the absorption probabilities ``[I - T~]^{-1} R~_i 1`` on
    the transient rows, and ``C = E/n - P`` is the perturbation direction.
    Everything is solved directly, independent of the iterative routes.
    """
    _require_classes(dec)
    n = graph.n
    P = graph.dense_P()
    m = dec.m
    trans = dec.transient
    M = np.zeros((m, n))
    Qm = np.zeros((n, m))
    for i, nodes in enumerate(dec.ergodic_classes):
        Pi = P[np.ix_(nodes, nodes)]
        k = nodes.size
        # mu (I - Q_i + 1 1^T) = 1^T
        mu = np.linalg.solve((np.eye(k) - Pi + np.ones((k, k))).T, np.ones(k))
        M[i, nodes] = mu
        Qm[nodes, i] = 1.0
    Tt = P[np.ix_(trans, trans)]
    for i, nodes in enumerate(dec.ergodic_classes):
        r = P[np.ix_(trans, nodes)].sum(axis=1)
        Qm[trans, i] = np.linalg.solve(np.eye(trans.size) - Tt, r)
    C = np.full((n, n), 1.0 / n) - P
    return M @ C @ Qm


def class_entropy(mu) -> float:
    mu = np.asarray(mu)
    nz = mu[mu > 0]
    return float(-(nz * np.log(nz)).sum())
