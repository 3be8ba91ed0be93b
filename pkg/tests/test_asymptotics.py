#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from degseq.asymptotics import (check_cds_condition, check_corollary, check_theorem4, cds_dominance_gap,
                                existence_bounds, expected_degrees, mc_existence_probability)
from degseq.errors import ParameterError
from degseq.geometry import p_family_masks
from degseq.tables import BetaParams, generate_graph


D_BAR = expected_degrees(BetaParams(np.zeros(10)))


def test_expected_degrees():
    np.testing.assert_allclose(D_BAR, 4.5)


def test_theorem_conditions_on_uniform_graph():
    report = check_theorem4(D_BAR, n=10, N=1, c=0.6, C=0.1)
    assert report.radius == pytest.approx(3.72, abs=5e-3)
    assert report.gate
    assert not report.condition_i
    assert report.margin_i == pytest.approx(4.5 - 2 * report.radius - 0.1)
    assert report.certified
    assert report.checked_pairs == len(p_family_masks(10)[0])
    assert not report.holds
    assert report.bound == pytest.approx(1 - 2 / 10 ** 0.2)


def test_theorem_conditions_with_many_trials():
    report = check_theorem4(D_BAR, n=10, N=50, c=0.6, C=0.1)
    assert report.condition_i and report.condition_ii
    assert report.holds
    worst = report.to_dict()['worst_pair']
    assert set(worst) == {'S', 'T'}


@pytest.mark.parametrize('c, C', [(0.5, 0.1), (0.6, 0.), (0.6, 1.)])
def test_theorem_parameter_errors(c, C):
    with pytest.raises(ParameterError):
        check_theorem4(D_BAR, n=10, N=1, c=c, C=C)


def test_corollary():
    report = check_corollary(D_BAR, n=10, N=1, c=0.6, C=0.1)
    assert report.radius == pytest.approx(math.sqrt(6 * math.log(10)))
    assert report.bound == pytest.approx(1 - 2 / 10 ** 0.2)
    # only pairs with min(|S|, |T|) > r + C are checked
    assert 0 < report.checked_pairs < len(p_family_masks(10)[0])
    with pytest.raises(ParameterError):
        check_corollary(D_BAR, n=10, N=2, c=0.6, C=0.1)


def test_existence_bounds():
    theorem, corollary = existence_bounds(100, 1, 0.6)
    assert theorem == corollary == pytest.approx(1 - 2 / 100 ** 0.2)
    assert existence_bounds(100, 5, 0.6) == (pytest.approx(1 - 2 / 100 ** 0.2), None)
    assert existence_bounds(100, 5, 0.4) == (None, None)


def test_cds_condition():
    report = check_cds_condition(D_BAR, n=10, c1=0.1, c2=0.9, c3=0.01)
    assert report.holds
    assert report.margin == pytest.approx(8.)
    assert report.to_dict()['worst_set'] == [1, 2]
    assert not check_cds_condition(np.full(10, 0.5), n=10, c1=0.1, c2=0.9, c3=0.01).degrees_ok
    with pytest.raises(ParameterError):
        check_cds_condition(D_BAR, n=10, c1=1., c2=0.9, c3=0.01)


@given(st.integers(4, 7).flatmap(lambda n: st.lists(st.floats(0., n - 1.), min_size=n, max_size=n)))
def test_cds_gap_is_nonnegative(d):
    assert cds_dominance_gap(d, len(d)) >= -1e-9


@pytest.mark.parametrize('n', range(4, 11))
def test_cds_gap_over_the_whole_family(n):
    rng = np.random.default_rng(n)
    for d in [np.zeros(n), np.full(n, n - 1.), np.full(n, (n - 1) / 2), *rng.uniform(0, n - 1, size=(5, n))]:
        assert cds_dominance_gap(d, n) >= -1e-9


def test_monte_carlo_on_three_nodes():
    report = mc_existence_probability(BetaParams([0., 0., 0.]), replicates=100)
    assert report.exist_rate == 0.
    assert report.nonexist_rate == 1.
    assert 'verdicts' not in report.to_dict()
    assert len(report.verdicts_frame()) == 100


def test_monte_carlo_is_reproducible():
    params = BetaParams([0.2, -0.1, 0.0, 0.3, -0.4])
    a = mc_existence_probability(params, N=2, replicates=100, seed=5)
    b = mc_existence_probability(params, N=2, replicates=100, seed=5, threads=2)
    assert a.verdicts == b.verdicts


def test_monte_carlo_needs_replicates():
    with pytest.raises(ParameterError):
        mc_existence_probability(BetaParams([0., 0., 0., 0.]), replicates=99)


def test_monte_carlo_isolated_node_floor():
    beta = BetaParams([-6.] + [0.] * 7)
    report = mc_existence_probability(beta, replicates=100, seed=2)
    isolated = [generate_graph(beta, 1, seed=[2, r]).counts[:7].sum() == 0 for r in range(100)]
    # an isolated node sits on a degree facet
    assert not any(exists for exists, alone in zip(report.verdicts, isolated) if alone)
    assert report.nonexist_rate >= sum(isolated) / 100
    assert sum(isolated) >= 90


@pytest.mark.slow
def test_monte_carlo_acceptance_configuration():
    report = mc_existence_probability(BetaParams(np.zeros(10)), replicates=2000, c=0.6, threads=2)
    sigma = math.sqrt(report.nonexist_rate * (1 - report.nonexist_rate) / 2000)
    assert report.nonexist_rate <= 2 / 10 ** (2 * 0.6 - 1) + 3 * sigma


@pytest.mark.slow
def test_monte_carlo_above_bound():
    # n = 10 meets the sufficient conditions only with many trials per pair
    report = mc_existence_probability(BetaParams(np.zeros(10)), N=50, replicates=200, seed=1)
    assert report.exist_rate >= 0.99
    assert report.exist_rate >= report.theorem_bound
