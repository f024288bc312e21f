"""Choosing the damping factor so the ESCC keeps a fair share of PageRank.

For a reference distribution ``v`` on the ESCC the target mass is
``gamma * alpha`` with ``gamma = v T 1``, and ``c*`` solves
``||pi_T(c*)||_1 = gamma * alpha``. Three choices of ``v`` are supported:
the quasi-stationary distribution (``gamma = lambda1``), the uniform
distribution (``gamma = p1``) and the normalized ESCC PageRank itself,
where the equation reduces to a crossing with ``r(c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import TransitionOperator
from .pagerank import MassCurve, evaluate_mass, mass_of, pagerank

CSTAR_TOL = 1e-6

QUASI = "quasi_stationary"
UNIFORM = "uniform"
NORMALIZED = "normalized_pagerank"
CHOICES = (QUASI, UNIFORM, NORMALIZED)


@dataclass(frozen=True)
class BoundHypotheses:
    """Hypotheses of the ESCC mass bounds.

    ``upper`` (p1 < lambda1) guarantees the curve lies below
    ``alpha(1-c)/(1-c lambda1)``; ``lower`` (1/(1-p1) < u_T [I-T]^{-1} 1)
    guarantees it lies above ``alpha(1-c)/(1-c p1)``. ``lower`` is ``None``
    when the series truncation leaves the comparison undecided.
    """

    upper: bool
    lower: bool | None

    @property
    def held(self) -> bool:
        return bool(self.upper and self.lower)


def expected_exit_time(curve: MassCurve, lambda1):
    """Bracket for ``u_T [I - T]^{-1} 1 = sum_k a_k``.

    The tail past ``K`` is estimated geometrically with ratio ``lambda1``.
    """
    head = float(curve.coefficients.sum())
    aK = float(curve.coefficients[-1])
    if aK == 0.0:
        return head, head
    if lambda1 >= 1.0:
        return head, math.inf
    return head, head + aK * lambda1 / (1.0 - lambda1)


def check_prop2(summary, curve: MassCurve) -> BoundHypotheses:
    upper = summary.p1 < summary.lambda1
    if summary.p1 >= 1.0:
        return BoundHypotheses(upper=upper, lower=False)
    threshold = 1.0 / (1.0 - summary.p1)
    lo, hi = expected_exit_time(curve, summary.lambda1)
    if threshold < lo:
        lower = True
    elif threshold >= hi:
        lower = False
    else:
        lower = None
    return BoundHypotheses(upper=upper, lower=lower)


def bound_curve(alpha, rate, c) -> float:
    """``alpha (1 - c) / (1 - c * rate)``, with the value 0 at ``c = 1``."""
    if c >= 1.0:
        return 0.0
    return alpha * (1.0 - c) / (1.0 - c * rate)


def mass_bounds(alpha, p1, lambda1, c):
    """``(lower, upper)`` envelopes of the ESCC mass at ``c``."""
    return bound_curve(alpha, p1, c), bound_curve(alpha, lambda1, c)


def r_of_c(alpha, c) -> float:
    """ESCC mass at which the normalized-PageRank criterion is met."""
    if c <= 0.5:
        return alpha
    return alpha * (1.0 - c) / c


def _ratio(num, den):
    # 0/0 when T is stochastic (p1 = lambda1 = 1): no bound exists
    return num / den if den else math.nan


def quasi_bounds(p1, lambda1):
    """``(c1, c2)`` bracketing ``c*`` for ``v`` the quasi-stationary distribution."""
    c1 = _ratio(1.0 - lambda1, 1.0 - lambda1 * p1)
    c2 = 1.0 / (lambda1 + 1.0)
    return c1, c2


def uniform_bounds(p1, lambda1):
    """``(c3, c4)`` bracketing ``c*`` for ``v`` uniform on the ESCC."""
    c3 = 1.0 / (1.0 + p1)
    c4 = _ratio(1.0 - p1, 1.0 - lambda1 * p1)
    return c3, c4


def pagerank_bounds(p1, lambda1):
    """``(1/(1+lambda1), 1/(1+p1))`` bracketing ``c*`` for ``v`` the normalized PageRank."""
    return 1.0 / (1.0 + lambda1), 1.0 / (1.0 + p1)


@dataclass(frozen=True)
class DampingReport:
    choice: str
    gamma: float | None
    c_star: float | None
    lower_bound: float
    upper_bound: float
    bound_names: tuple
    hypotheses: BoundHypotheses | None = None
    degenerate: bool = False
    notes: tuple = field(default=())

    @property
    def hypotheses_held(self) -> bool:
        return self.hypotheses is not None and self.hypotheses.held

    def brackets(self) -> bool:
        return self.c_star is not None and self.lower_bound < self.c_star < self.upper_bound


def _bisect(f, lo, hi, tol=CSTAR_TOL):
    """Root of ``f`` on ``[lo, hi]`` given ``f(lo) < 0 < f(hi)`` (or the reverse)."""
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _mass_midpoint(curve, c):
    # the truncated series undershoots by at most the tail bound
    return evaluate_mass(curve, c) + 0.5 * curve.truncation_bound(c)


def _solve_level(curve: MassCurve, gamma):
    """``c`` in (0, 1) where the ESCC mass falls to ``gamma * alpha``."""
    target = gamma * curve.alpha
    if gamma >= 1.0:
        return 0.0, True
    if gamma <= 0.0:
        return 1.0, True
    return _bisect(lambda c: target - _mass_midpoint(curve, c), 0.0, 1.0), False


def solve_cstar_quasi(summary, curve: MassCurve) -> DampingReport:
    lam, p1 = summary.lambda1, summary.p1
    c_star, degenerate = _solve_level(curve, lam)
    c1, c2 = quasi_bounds(p1, lam)
    return DampingReport(
        choice=QUASI, gamma=lam, c_star=c_star, lower_bound=c1, upper_bound=c2,
        bound_names=("c1", "c2"), hypotheses=check_prop2(summary, curve),
        degenerate=degenerate,
    )


def solve_cstar_uniform(summary, curve: MassCurve) -> DampingReport:
    lam, p1 = summary.lambda1, summary.p1
    c_star, degenerate = _solve_level(curve, p1)
    c3, c4 = uniform_bounds(p1, lam)
    return DampingReport(
        choice=UNIFORM, gamma=p1, c_star=c_star, lower_bound=c3, upper_bound=c4,
        bound_names=("c3", "c4"), hypotheses=check_prop2(summary, curve),
        degenerate=degenerate,
    )


def solve_cstar_pagerank(summary, curve: MassCurve) -> DampingReport:
    """Crossing of the ESCC mass with ``r(c)`` on ``(1/2, 1)``.

    Divided by ``alpha (1 - c)`` the crossing condition reads
    ``sum_k c^k a_k = 1/c``; the left side minus the right is negative at
    ``c = 1/2`` and tends to ``u_T [I - T]^{-1} 1 - 1`` as ``c -> 1``.
    """
    alpha = curve.alpha
    # both branches of r meet at c = 1/2
    assert r_of_c(alpha, 0.5) == alpha * (1.0 - 0.5) / 0.5
    lo_b, hi_b = pagerank_bounds(summary.p1, summary.lambda1)
    flags = check_prop2(summary, curve)
    assert evaluate_mass(curve, 0.5) <= alpha

    def g(c):
        return curve.series(c) + 0.5 * curve.truncation_bound(c) / alpha - 1.0 / c

    degenerate = False
    hi = 1.0 - 1e-12
    if g(0.5) >= 0.0:
        c_star, degenerate = 0.5, True
    elif g(hi) <= 0.0:
        c_star, degenerate = None, True
    else:
        c_star = _bisect(g, 0.5, hi)
    return DampingReport(
        choice=NORMALIZED, gamma=None, c_star=c_star, lower_bound=lo_b, upper_bound=hi_b,
        bound_names=("1/(1+lambda1)", "1/(1+p1)"), hypotheses=flags, degenerate=degenerate,
    )


def reports_from_scalars(alpha, p1, lambda1):
    """Bound-only reports from published ``(alpha, p1, lambda1)``; ``c_star`` is ``None``."""
    c1, c2 = quasi_bounds(p1, lambda1)
    c3, c4 = uniform_bounds(p1, lambda1)
    lo, hi = pagerank_bounds(p1, lambda1)
    return [
        DampingReport(QUASI, lambda1, None, c1, c2, ("c1", "c2")),
        DampingReport(UNIFORM, p1, None, c3, c4, ("c3", "c4")),
        DampingReport(NORMALIZED, None, None, lo, hi, ("1/(1+lambda1)", "1/(1+p1)")),
    ]


def solve_all(summary, curve):
    return [solve_cstar_quasi(summary, curve),
            solve_cstar_uniform(summary, curve),
            solve_cstar_pagerank(summary, curve)]


def fairness_at(graph, dec, c, pr=None):
    """Fairness ratio ``mass / (size / n)`` of the ESCC, Pure OUT and each class."""
    if not 0.0 <= c < 1.0:
        raise ValueError(f"c must lie in [0, 1), got {c}")
    if pr is None:
        pr = pagerank(TransitionOperator(graph, c))
    ratios = {"ESCC": mass_of(dec.escc, pr)[1], "PureOUT": mass_of(dec.pure_out, pr)[1]}
    for k, q in enumerate(dec.ergodic_classes, start=1):
        ratios[f"Q{k}"] = mass_of(q, pr)[1]
    return ratios
