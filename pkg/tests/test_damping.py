import math

import numpy as np
import pytest

from fairdamp.damping import (
    NORMALIZED, QUASI, UNIFORM, BoundHypotheses, check_prop2, expected_exit_time, fairness_at,
    mass_bounds, pagerank_bounds, quasi_bounds, r_of_c, reports_from_scalars, solve_all,
    uniform_bounds,
)
from fairdamp.pagerank import MassCurve, escc_mass_curve, evaluate_mass
from fairdamp.spectral import lambda_sequence
from fairdamp.structure import decompose

import oracles
from graphgen import graph_corpus


def analysed(corpus):
    for g in corpus:
        dec = decompose(g)
        if dec.pure_out.size and dec.leaky:
            curve = escc_mass_curve(g, dec)
            yield g, dec, curve, lambda_sequence(curve)


@pytest.mark.parametrize("p1, lam", [(0.97557, 0.99954), (0.99659, 0.99937), (0.5, 0.7)])
def test_bounds_solve_their_defining_equations(p1, lam):
    c1, c2 = quasi_bounds(p1, lam)
    c3, c4 = uniform_bounds(p1, lam)
    assert (1 - c1) / (1 - p1 * c1) == pytest.approx(lam)
    assert (1 - c2) / (1 - lam * c2) == pytest.approx(lam)
    assert (1 - c3) / (1 - p1 * c3) == pytest.approx(p1)
    assert (1 - c4) / (1 - lam * c4) == pytest.approx(p1)
    assert pagerank_bounds(p1, lam) == (c2, c3)


def test_stochastic_block_has_no_bounds():
    c1, _ = quasi_bounds(1.0, 1.0)
    _, c4 = uniform_bounds(1.0, 1.0)
    assert math.isnan(c1) and math.isnan(c4)


def test_r_of_c():
    assert r_of_c(0.4, 0.3) == 0.4
    assert r_of_c(0.4, 0.5) == 0.4
    assert r_of_c(0.4, 0.8) == pytest.approx(0.1)


def test_mass_bounds_shape():
    lo, hi = mass_bounds(0.5, 0.6, 0.9, 0.5)
    assert lo == pytest.approx(0.5 * 0.5 / 0.7)
    assert hi == pytest.approx(0.5 * 0.5 / 0.55)
    assert mass_bounds(0.5, 0.6, 0.9, 1.0) == (0.0, 0.0)


def test_reports_from_scalars():
    reps = reports_from_scalars(0.5, 0.97557, 0.99954)
    assert [r.choice for r in reps] == [QUASI, UNIFORM, NORMALIZED]
    assert all(r.c_star is None for r in reps)
    assert reps[0].lower_bound == pytest.approx(0.0184, abs=5e-4)


def test_check_prop2_tri_state():
    class S:
        p1 = 0.5
        lambda1 = 0.9

    # threshold 1/(1 - p1) = 2; stored terms sum to 1.55 and the tail adds 9 * a_K
    undecided = MassCurve(alpha=1.0, coefficients=np.array([1.0, 0.45, 0.1]), n_escc=1)
    assert check_prop2(S, undecided) == BoundHypotheses(upper=True, lower=None)
    assert not check_prop2(S, undecided).held
    yes = MassCurve(alpha=1.0, coefficients=np.array([1.0, 0.5, 0.45, 0.2]), n_escc=1)
    assert check_prop2(S, yes).lower is True
    no = MassCurve(alpha=1.0, coefficients=np.array([1.0, 0.5, 0.0]), n_escc=1)
    assert check_prop2(S, no).lower is False


def test_expected_exit_time_brackets_dense(corpus):
    for g, dec, curve, summary in analysed(corpus):
        T = oracles.dense_T(g, dec.escc)
        u = np.full(T.shape[0], 1.0 / T.shape[0])
        exact = u @ np.linalg.solve(np.eye(T.shape[0]) - T, np.ones(T.shape[0]))
        lo, hi = expected_exit_time(curve, summary.lambda1)
        assert lo - 1e-9 <= exact <= hi + 1e-9


def test_cstar_solves_level_equations(corpus):
    for g, dec, curve, summary in list(analysed(corpus))[:25]:
        quasi, uniform, normalized = solve_all(summary, curve)

        def level(gamma):
            return oracles.bisect(
                lambda c: oracles.escc_mass_dense(g, dec.escc, c) - gamma * dec.alpha,
                1e-12, 1 - 1e-12)

        assert quasi.c_star == pytest.approx(level(summary.lambda1), abs=2e-6)
        assert uniform.c_star == pytest.approx(level(summary.p1), abs=2e-6)
        if normalized.c_star is not None and not normalized.degenerate:
            c = normalized.c_star
            ref = oracles.bisect(
                lambda x: oracles.escc_mass_dense(g, dec.escc, x) - r_of_c(dec.alpha, x),
                0.5, 1 - 1e-12)
            assert c == pytest.approx(ref, abs=2e-6)


def test_fixture_cstar_inside_bounds(fixture_graph, fixture_dec):
    curve = escc_mass_curve(fixture_graph, fixture_dec)
    summary = lambda_sequence(curve)
    reports = solve_all(summary, curve)
    for rep in reports:
        assert rep.hypotheses_held
        assert rep.brackets(), rep


def test_bounds_hold_for_monotone_ratio_sequences():
    """With a non-decreasing ratio sequence the envelopes and brackets hold.

    Such graphs are rare in random corpora, so two of them are scanned.
    """
    seen = 0
    graphs = graph_corpus(seed=7, count=300) + graph_corpus(seed=1729, count=240)
    for g, dec, curve, summary in analysed(graphs):
        if not (check_prop2(summary, curve).held and summary.monotone):
            continue
        seen += 1
        for c in np.linspace(0.0, 1.0, 101):
            lower, upper = mass_bounds(curve.alpha, summary.p1, summary.lambda1, c)
            value = evaluate_mass(curve, c)
            assert lower - 1e-12 <= value
            assert value + curve.truncation_bound(c) <= upper + 1e-12
        assert all(rep.brackets() for rep in solve_all(summary, curve))
    assert seen > 0


def test_gamma_one_is_degenerate():
    curve = MassCurve(alpha=0.5, coefficients=np.ones(10), n_escc=2)

    class S:
        p1 = 1.0
        lambda1 = 1.0

    quasi, uniform, _ = solve_all(S, curve)
    assert quasi.degenerate and quasi.c_star == 0.0
    assert uniform.degenerate


def test_fairness_on_fixture(fixture_graph, fixture_dec):
    ratios = fairness_at(fixture_graph, fixture_dec, 0.85)
    assert ratios["ESCC"] < 1.0 < ratios["PureOUT"]
    assert set(ratios) == {"ESCC", "PureOUT", "Q1", "Q2"}
    with pytest.raises(ValueError):
        fairness_at(fixture_graph, fixture_dec, 1.0)
