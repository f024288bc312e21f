"""Dominant eigenvalue and quasi-stationary distribution of the ESCC block."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateStructureError
from .graph import PrincipalBlock
from .pagerank import MassCurve

RATIO_TOL = 1e-12
RATIO_PATIENCE = 5
MAX_PERIOD = 64


@dataclass(frozen=True)
class SpectralSummary:
    """Retention statistics of the ESCC block ``T``.

    Attributes
    ----------
    lambda1 : float
        Estimate of the Perron-Frobenius eigenvalue: the last ratio, or the
        geometric mean of the last ``period`` ratios when they cycle.
    p1 : float
        One-step retention ``u_T T 1`` from the uniform start.
    lambda_seq : ndarray
        Ratios ``a_k / a_{k-1}`` for ``k = 1..K``.
    p_sup, p_inf : float
        Extremes of ``a_k^{1/k}`` over the computed range ``1 <= k <= k_max``.
    monotone : bool
        Whether ``lambda_seq`` is non-decreasing over the computed range.
    converged : bool
        Whether the ratios settled (``RATIO_PATIENCE`` steps within ``RATIO_TOL``),
        possibly onto a cycle of length ``period``.
    degenerate : bool
        Whether some ``a_k`` vanished, cutting the ratio sequence short.
    """

    lambda1: float
    p1: float
    lambda_seq: np.ndarray
    p_sup: float
    p_inf: float
    monotone: bool
    converged: bool
    degenerate: bool
    k_max: int
    period: int = 1


def _settled_run(seq, lag):
    """Length of the trailing run where ``seq[j]`` matches ``seq[j - lag]``."""
    diffs = np.abs(seq[lag:] - seq[:-lag])
    bad = np.flatnonzero(diffs[::-1] >= RATIO_TOL)
    return int(bad[0]) if bad.size else int(diffs.size)


def _period(seq):
    """Smallest cycle length of the trailing ratios, or 0 if they have not settled."""
    for p in range(1, min(MAX_PERIOD, seq.size // 3) + 1):
        if _settled_run(seq, p) >= max(RATIO_PATIENCE, 2 * p):
            return p
    return 0


def lambda_sequence(curve: MassCurve) -> SpectralSummary:
    """Ratio sequence ``a_k / a_{k-1}`` and the estimates drawn from it.

    A periodic ESCC block makes the ratios cycle instead of converge; the
    product of one full cycle still tends to ``lambda1 ** period``.
    """
    a = curve.coefficients
    if a.size < 2:
        raise ValueError("need at least two coefficients")
    seq = np.asarray(curve.ratios, dtype=float)
    degenerate = bool(a[-1] == 0.0)
    p1 = float(seq[0])

    period = 0 if degenerate else _period(seq)
    converged = period > 0
    if period > 1:
        lambda1 = float(np.exp(np.log(seq[-period:]).mean()))
    else:
        lambda1 = float(seq[-1])

    k = np.arange(1, a.size)
    pos = a[1:] > 0
    roots = np.exp(np.log(a[1:][pos]) / k[pos]) if pos.any() else np.zeros(1)
    p_sup = float(roots.max())
    p_inf = float(roots.min()) if pos.all() else 0.0
    # tolerate rounding noise once the ratios have flattened out
    monotone = bool(np.all(np.diff(seq) >= -1e-14))
    return SpectralSummary(
        lambda1=lambda1,
        p1=p1,
        lambda_seq=seq,
        p_sup=p_sup,
        p_inf=p_inf,
        monotone=monotone,
        converged=converged,
        degenerate=degenerate,
        k_max=int(a.size - 1),
        period=max(period, 1),
    )


@dataclass(frozen=True)
class QuasiStationary:
    distribution: np.ndarray
    eigenvalue: float
    residual: float
    iterations: int


def quasi_stationary(graph, dec, tolerance=1e-12, max_iterations=1_000_000) -> QuasiStationary:
    """Normalized left Perron vector of the ESCC block by power iteration.

    Starts from the uniform distribution on the ESCC. If the L1 change has
    not decreased for 10 consecutive steps (a sign of periodicity), the
    iteration switches to the averaged map ``x <- (x + xT/|xT|) / 2``, which
    has the same fixed point and cannot oscillate.
    """
    T = PrincipalBlock(graph, dec.escc)
    x = np.full(T.size, 1.0 / T.size)
    damped = False
    best = math.inf
    stale = 0
    change = math.inf
    for it in range(1, max_iterations + 1):
        y = T.apply_row(x)
        lam = float(y.sum())
        if lam == 0.0:
            raise DegenerateStructureError("ESCC block is nilpotent; no quasi-stationary distribution")
        y /= lam
        if damped:
            y = 0.5 * (x + y)
        change = float(np.abs(y - x).sum())
        x = y
        if change < tolerance:
            break
        if change < best:
            best = change
            stale = 0
        else:
            stale += 1
            if stale >= 10 and not damped:
                damped = True
                stale = 0
    else:
        raise ConvergenceError("quasi-stationary iteration did not converge", change, max_iterations)
    xT = T.apply_row(x)
    lam = float(xT.sum())
    residual = float(np.abs(xT - lam * x).sum())
    return QuasiStationary(distribution=x, eigenvalue=lam, residual=residual, iterations=it)


def one_step_retention(graph, dec) -> float:
    """``u_T T 1``: chance that one step from a uniform ESCC node stays in the ESCC."""
    T = PrincipalBlock(graph, dec.escc)
    return float(T.row_sums().mean())
