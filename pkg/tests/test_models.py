#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import numpy as np
import pytest

from degseq.design import beta_design, poisson_design
from degseq.errors import ParameterError, SizeError
from degseq.geometry import cofacial_sets
from degseq.models import (P1Params, RaschTable, bt_existence, bt_facet_count, bt_lp_existence, describe_cone,
                           describe_p1_cone, generate_dyads, haberman_certificate, p1_dyad_probabilities,
                           p1_existence, parse_rasch, poisson_existence, poisson_existence_bound,
                           poisson_facial_catalog, poisson_rasch_existence, rasch_existence, wins_graph)
from degseq.survey import dyads_from_code
from degseq.tables import DirectedCountTable, DyadTable, parse_table


def test_rasch_identity_exists(data_path):
    verdict = rasch_existence(parse_rasch(data_path('rasch_identity.csv')))
    assert verdict.exists
    assert verdict.certificate is None
    assert verdict.to_dict() == {'exists': True}


def test_rasch_blocked(data_path):
    t = parse_rasch(data_path('rasch_blocked.csv'))
    verdict = rasch_existence(t)
    assert not verdict.exists
    assert verdict.certificate.to_dict() == {'A': [2], 'B': [1], 'C': [2, 3], 'D': [1]}
    assert verdict.facial_set.is_proper
    # item 1 answered by everybody, item 3 by nobody
    x = t.responses
    assert np.all(x[[i - 1 for i in verdict.certificate.A]][:, [j - 1 for j in verdict.certificate.C]] == 0)
    assert np.all(x[[i - 1 for i in verdict.certificate.B]][:, [j - 1 for j in verdict.certificate.D]] == 1)


def test_rasch_errors():
    with pytest.raises(ParameterError):
        rasch_existence(RaschTable([[1, 0, 1]]))
    with pytest.raises(SizeError):
        haberman_certificate(RaschTable(np.eye(3, dtype=int)), cap=2)


def test_poisson_rasch():
    assert poisson_rasch_existence([[1, 0], [0, 3]]) == (True, {'rows': [], 'columns': []})
    assert poisson_rasch_existence([[0, 0], [1, 2]]) == (False, {'rows': [1], 'columns': []})


def test_bradley_terry_verdicts(data_path):
    cycle = parse_table(data_path('cycle3.csv'), kind='directed')
    assert bt_existence(cycle).exists
    assert bt_lp_existence(cycle)

    transitive = DirectedCountTable(3, {(1, 2): 1, (1, 3): 1, (2, 3): 1})
    verdict = bt_existence(transitive)
    assert not verdict.exists
    assert verdict.to_dict() == {'exists': False, 'never_loses': [1]}
    assert not bt_lp_existence(transitive)
    assert sorted(wins_graph(transitive).edges) == [(1, 2), (1, 3), (2, 3)]


def test_bradley_terry_uncompared_pairs():
    # 1 and 3 never met, the wins graph is still strongly connected
    t = DirectedCountTable(3, {(1, 2): 1, (2, 1): 1, (2, 3): 1, (3, 2): 1})
    assert bt_existence(t).exists
    assert bt_lp_existence(t)


def test_bt_facet_count():
    assert bt_facet_count(4) == 14
    assert bt_facet_count(3) == 6


@pytest.mark.parametrize('n', [4, 5])
def test_poisson_directed_cone(n):
    design = poisson_design(n)
    summary = describe_cone(design)
    assert summary.rank == 2 * n - 1
    assert summary.n_facets == 3 * n
    catalog = poisson_facial_catalog(n)
    assert len(catalog) == 3 * n
    assert set(cofacial_sets(summary.description, design, model_only=False)) == set(catalog)


@pytest.mark.parametrize('n, count', [(3, 3), (4, 8), (5, 10)])
def test_poisson_undirected_cone(n, count):
    design = beta_design(n)
    summary = describe_cone(design)
    assert summary.n_facets == count
    assert set(cofacial_sets(summary.description, design, model_only=False)) == \
        set(poisson_facial_catalog(n, directed=False))


def test_poisson_catalog_needs_enough_nodes():
    with pytest.raises(ParameterError):
        poisson_facial_catalog(3)


def test_poisson_existence():
    ones = np.ones((4, 4), dtype=int)
    exists, fs = poisson_existence(DirectedCountTable(4, ones))
    assert exists and not fs.is_proper

    silent = ones.copy()
    silent[0] = 0
    exists, fs = poisson_existence(DirectedCountTable(4, silent))
    assert not exists
    assert set(fs.cofacial) == {(1, 2), (1, 3), (1, 4)}

    exists, fs = poisson_existence(DirectedCountTable(4, silent), directed=False)
    assert not exists
    assert set(fs.cofacial) == {(1, 2), (1, 3), (1, 4)}


def test_poisson_bounds():
    means = np.ones((4, 4))
    directed = poisson_existence_bound(means)
    assert directed.three_term == pytest.approx(8 * np.exp(-3) + 4 * np.exp(-6))
    assert directed.simplified == pytest.approx(12 * np.exp(-3))
    assert not directed.simplified_valid
    undirected = poisson_existence_bound(means, directed=False)
    assert undirected.three_term == pytest.approx(8 * np.exp(-3))
    assert undirected.simplified_valid
    assert poisson_existence_bound(np.full((10, 10), 5.)).three_term < 1e-10
    with pytest.raises(ParameterError):
        poisson_existence_bound(np.zeros((4, 4)))


def test_p1_cycle(data_path):
    cycle = parse_table(data_path('cycle3.csv'), kind='dyad')
    assert p1_existence(cycle, 'zero').exists
    for variant in ('constant', 'edge-dependent'):
        verdict = p1_existence(cycle, variant)
        assert not verdict.exists
        assert verdict.facial_set.is_proper
        assert verdict.to_dict()['variant'] == variant


def test_p1_zero_on_three_nodes():
    existing = [code for code in range(64) if p1_existence(dyads_from_code(3, code), 'zero',
                                                           with_facial_set=False).exists]
    assert len(existing) == 2
    for code in existing:
        adjacency = dyads_from_code(3, code).adjacency()
        # the two directed 3-cycles
        assert adjacency.sum(axis=0).tolist() == adjacency.sum(axis=1).tolist() == [1, 1, 1]


def test_p1_needs_three_nodes():
    with pytest.raises(ParameterError):
        p1_existence(DyadTable(2, {(1, 2): (1, 0)}))


@pytest.mark.parametrize('variant, rank, facets', [('zero', 8, 30), ('constant', 9, 56)])
def test_p1_cone_n3(variant, rank, facets):
    summary = describe_p1_cone(3, variant)
    assert summary.rank == rank
    assert summary.n_facets == facets
    assert summary.to_dict()['model'] == 'p1-{}'.format(variant)


def test_p1_edge_dependent_cone_n3():
    assert describe_p1_cone(3, 'edge-dependent').n_facets == 15


def test_p1_probabilities_and_sampling():
    params = P1Params(-0.5, [0.1, 0.2, -0.3], [0., 0.4, -0.1], rho=1.2, variant='constant')
    probabilities = p1_dyad_probabilities(params)
    p = probabilities[(1, 2)]
    assert p.sum() == pytest.approx(1.)
    forward, backward = np.exp(-0.5 + 0.1 + 0.4), np.exp(-0.5 + 0.2 + 0.)
    assert p[3] / p[0] == pytest.approx(forward * backward * np.exp(1.2))
    assert probabilities.vector().shape == (12,)
    assert generate_dyads(probabilities, seed=3).dyads == generate_dyads(probabilities, seed=3).dyads
    with pytest.raises(AssertionError):
        P1Params(0., [0., 0.], [0.], variant='zero')
