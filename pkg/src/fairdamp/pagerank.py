"""PageRank vectors and the PageRank mass of the extended SCC as a function of c."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError
from .graph import PrincipalBlock, TransitionOperator, WebGraph, apply_G

DEFAULT_TOL = 1e-12
DEFAULT_TERMS = 5000
DEFAULT_TAIL_TOL = 1e-13
# far below any tail that matters, far above the subnormal range
UNDERFLOW_GUARD = 1e-250


@dataclass(frozen=True)
class PageRankVector:
    values: np.ndarray
    damping: float
    residual: float
    iterations: int

    def __len__(self):
        return self.values.size


def default_max_iterations(c, tolerance=DEFAULT_TOL):
    """Iteration cap from the contraction modulus ``c`` of the Google matrix."""
    if c <= 0.0:
        return 1000
    if c >= 1.0:
        raise ValueError("power iteration needs c < 1")
    return max(1000, 10 * math.ceil(math.log(tolerance) / math.log(c)))


def pagerank(op: TransitionOperator, tolerance=DEFAULT_TOL, max_iterations=None) -> PageRankVector:
    """Power iteration ``x <- x G`` from the uniform vector.

    Stops once the L1 change between iterates is at most ``tolerance``.
    Raises :class:`ConvergenceError` if that does not happen within
    ``max_iterations`` steps.
    """
    c = op.damping
    if not 0.0 <= c < 1.0:
        raise ValueError(f"PageRank needs c in [0, 1), got {c}")
    if max_iterations is None:
        max_iterations = default_max_iterations(c, tolerance)
    n = op.graph.n
    x = np.full(n, 1.0 / n)
    residual = math.inf
    for it in range(1, max_iterations + 1):
        y = apply_G(op, x)
        # renormalize against rounding drift; G preserves the sum exactly in theory
        y /= y.sum()
        residual = float(np.abs(y - x).sum())
        x = y
        if residual <= tolerance:
            return PageRankVector(x, c, residual, it)
    raise ConvergenceError("PageRank did not converge", residual, max_iterations)


def pagerank_resolvent(graph: WebGraph, c) -> PageRankVector:
    """Dense direct solve of ``pi = (1 - c)/n 1^T [I - cP]^{-1}``.

    Builds ``P`` explicitly; meant for small graphs and cross-checks.
    """
    if not 0.0 <= c < 1.0:
        raise ValueError(f"[I - cP] is singular at c = {c}")
    n = graph.n
    A = np.eye(n) - c * graph.dense_P()
    pi = np.linalg.solve(A.T, np.full(n, (1.0 - c) / n))
    return PageRankVector(pi, c, 0.0, 0)


def mass_of(nodes, pr: PageRankVector):
    """PageRank mass of a node set and its fairness ratio ``mass / (|set| / n)``."""
    nodes = np.asarray(nodes, dtype=np.int64)
    n = pr.values.size
    if nodes.size and (nodes.min() < 0 or nodes.max() >= n):
        raise DimensionError("node id outside the PageRank vector")
    mass = float(pr.values[nodes].sum())
    share = nodes.size / n
    ratio = mass / share if share else math.nan
    return mass, ratio


@dataclass(frozen=True)
class MassCurve:
    """Coefficients ``a_k = u_T T^k 1`` of the ESCC mass series.

    ``||pi_T(c)||_1 = (1 - c) * alpha * sum_k c^k a_k``. ``ratios`` holds
    ``a_k / a_{k-1}`` as measured on the normalized iterate, which stays
    exact after the coefficients themselves become negligibly small.
    """

    alpha: float
    coefficients: np.ndarray
    n_escc: int
    ratios: np.ndarray | None = None

    def __post_init__(self):
        if self.ratios is None:
            a = self.coefficients
            with np.errstate(divide="ignore", invalid="ignore"):
                object.__setattr__(self, "ratios", a[1:] / a[:-1])

    @property
    def K(self) -> int:
        return self.coefficients.size - 1

    def truncation_bound(self, c) -> float:
        """Upper bound on the mass dropped by truncating at ``K`` terms.

        Uses ``a_k <= a_K`` for ``k > K`` (``T`` is substochastic).
        """
        if c >= 1.0:
            return 0.0
        return self.alpha * float(self.coefficients[-1]) * c ** (self.K + 1)

    def series(self, c) -> float:
        """Truncated ``sum_k c^k a_k`` (a lower estimate of ``u_T [I - cT]^{-1} 1``)."""
        powers = np.power(float(c), np.arange(self.coefficients.size))
        return float(powers @ self.coefficients)


def escc_mass_curve(graph: WebGraph, dec, K=DEFAULT_TERMS, tail_tol=DEFAULT_TAIL_TOL,
                    ratio_tol=1e-12, ratio_patience=5) -> MassCurve:
    """Power iterations of the ESCC block against the all-ones vector.

    Iteration stops at ``K`` terms, or once ``a_k < tail_tol`` and the
    ratios ``a_k / a_{k-1}`` have settled to within ``ratio_tol`` for
    ``ratio_patience`` consecutive steps. The extra steps past ``tail_tol``
    keep the dominant-eigenvalue estimate usable when ``a_k`` decays fast.
    It also stops before ``a_k`` would leave the normal float range, which
    happens when the ratios never settle (periodic ``T``).
    """
    T = PrincipalBlock(graph, dec.escc)
    if T.size == 0:
        raise ValueError("empty ESCC")
    coeffs = [1.0]
    ratios = []
    y = np.ones(T.size)
    a_prev = 1.0
    ratio_prev = math.nan
    settled = 0
    for _ in range(K):
        y = T.apply_column(y)
        s = float(y.mean())
        if s == 0.0:
            coeffs.append(0.0)
            ratios.append(0.0)
            break
        ratio = s
        y /= s
        a = a_prev * ratio
        coeffs.append(a)
        ratios.append(ratio)
        a_prev = a
        settled = settled + 1 if abs(ratio - ratio_prev) < ratio_tol else 0
        ratio_prev = ratio
        if a < tail_tol and (settled >= ratio_patience or a < UNDERFLOW_GUARD):
            break
    return MassCurve(alpha=dec.alpha, coefficients=np.asarray(coeffs), n_escc=T.size,
                     ratios=np.asarray(ratios))


def evaluate_mass(curve: MassCurve, c) -> float:
    """ESCC PageRank mass ``||pi_T(c)||_1`` from the stored series.

    ``c = 1`` returns the exact limit 0. The truncated series is a lower
    estimate; :meth:`MassCurve.truncation_bound` gives the gap.
    """
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"c must lie in [0, 1], got {c}")
    if c == 1.0:
        return 0.0
    if c == 0.0:
        return curve.alpha
    return (1.0 - c) * curve.alpha * curve.series(c)


def evaluate_mass_with_bound(curve: MassCurve, c):
    return evaluate_mass(curve, c), curve.truncation_bound(c)


def escc_pagerank_block(graph: WebGraph, dec, c) -> np.ndarray:
    """Dense ``alpha (1 - c) u_T [I - cT]^{-1}``, the ESCC part of PageRank."""
    T = PrincipalBlock(graph, dec.escc).dense()
    nT = T.shape[0]
    rhs = np.full(nT, dec.alpha * (1.0 - c) / nT)
    return np.linalg.solve((np.eye(nT) - c * T).T, rhs)
