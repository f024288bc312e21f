import math

import numpy as np
import pytest

from fairdamp.errors import DegenerateStructureError
from fairdamp.graph import WebGraph
from fairdamp.pagerank import MassCurve, escc_mass_curve
from fairdamp.spectral import lambda_sequence, one_step_retention, quasi_stationary
from fairdamp.structure import StructureDecomposition, decompose

import oracles


def test_geometric_sequence():
    a = 0.8 ** np.arange(30)
    s = lambda_sequence(MassCurve(alpha=0.5, coefficients=a, n_escc=3))
    assert s.lambda1 == pytest.approx(0.8)
    assert s.p1 == pytest.approx(0.8)
    assert s.converged and s.monotone and not s.degenerate
    assert s.period == 1
    assert s.p_sup == pytest.approx(0.8) and s.p_inf == pytest.approx(0.8)


def test_degenerate_sequence():
    s = lambda_sequence(MassCurve(alpha=0.5, coefficients=np.array([1.0, 0.5, 0.0]), n_escc=2))
    assert s.degenerate and not s.converged
    assert s.lambda1 == 0.0
    assert s.p_inf == 0.0


def test_needs_two_coefficients():
    with pytest.raises(ValueError):
        lambda_sequence(MassCurve(alpha=1.0, coefficients=np.array([1.0]), n_escc=1))


def test_periodic_block():
    # T = [[0, 1], [1/2, 0]]: eigenvalues +-sqrt(1/2), ratios alternate forever
    g = WebGraph(4, [0, 1, 1, 2, 3], [1, 0, 2, 3, 2])
    dec = decompose(g)
    s = lambda_sequence(escc_mass_curve(g, dec))
    assert s.period == 2
    assert s.converged
    assert s.lambda1 == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert not s.monotone


def test_fixture_spectrum(fixture_graph, fixture_dec):
    s = lambda_sequence(escc_mass_curve(fixture_graph, fixture_dec))
    T = oracles.dense_T(fixture_graph, fixture_dec.escc)
    assert s.lambda1 == pytest.approx(oracles.dominant_eigen(T), abs=1e-10)
    assert s.p1 == pytest.approx(5 / 6)
    assert s.p1 == pytest.approx(one_step_retention(fixture_graph, fixture_dec))
    assert s.p1 < s.lambda1


def test_lambda_matches_dense(corpus):
    for g in corpus:
        dec = decompose(g)
        if not (dec.pure_out.size and dec.leaky):
            continue
        s = lambda_sequence(escc_mass_curve(g, dec))
        T = oracles.dense_T(g, dec.escc)
        assert s.lambda1 == pytest.approx(oracles.dominant_eigen(T), abs=1e-8)
        assert s.p1 == pytest.approx(T.sum(axis=1).mean(), abs=1e-14)


def test_quasi_stationary_matches_left_perron(corpus):
    for g in corpus:
        dec = decompose(g)
        if not (dec.pure_out.size and dec.leaky):
            continue
        qs = quasi_stationary(g, dec)
        lam, vec = oracles.left_perron(oracles.dense_T(g, dec.escc))
        assert qs.eigenvalue == pytest.approx(lam, abs=1e-9)
        assert qs.residual <= 1e-9
        assert qs.distribution.sum() == pytest.approx(1.0)
        if np.sort(np.abs(np.linalg.eigvals(oracles.dense_T(g, dec.escc))))[-2] < lam - 1e-3:
            assert np.abs(qs.distribution - vec).sum() <= 1e-6


def test_quasi_stationary_periodic():
    g = WebGraph(4, [0, 1, 1, 2, 3], [1, 0, 2, 3, 2])
    qs = quasi_stationary(g, decompose(g))
    assert qs.eigenvalue == pytest.approx(math.sqrt(0.5), abs=1e-10)
    assert qs.residual <= 1e-9


def test_quasi_stationary_nilpotent_block():
    g = WebGraph(3, [0, 1, 2], [1, 2, 2])
    escc = np.array([0, 1])
    dec = StructureDecomposition(
        n=3, escc=escc, ergodic_classes=[np.array([2])], transient_out=np.array([], dtype=int),
        ordering=np.array([2, 0, 1]), labels=np.array([2, 1, 0]))
    with pytest.raises(DegenerateStructureError):
        quasi_stationary(g, dec)
