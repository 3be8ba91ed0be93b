#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from degseq.errors import ConsistencyError, ParseError
from degseq.tables import (BetaParams, DirectedCountTable, DyadTable, EdgeCountTable, degree_stats, generate_directed,
                           generate_graph, lift_table, lifted_cells, node_pairs, pair_position, parse_table,
                           read_integer_matrix)


TABLE2 = {(1, 2): 0, (1, 3): 1, (1, 4): 2, (2, 3): 2, (2, 4): 1, (3, 4): 3}


@st.composite
def edge_tables(draw, min_n=2, max_n=7, max_trials=5):
    n = draw(st.integers(min_n, max_n))
    trials = draw(st.lists(st.integers(1, max_trials), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    counts = [draw(st.integers(0, nt)) for nt in trials]
    return EdgeCountTable(n, counts, trials)


def test_node_pairs_and_lifted_cells():
    assert node_pairs(3) == [(1, 2), (1, 3), (2, 3)]
    assert lifted_cells(3) == [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)]
    assert all(pair_position(i, j, 6) == k for k, (i, j) in enumerate(node_pairs(6)))
    assert pair_position(4, 2, 6) == pair_position(2, 4, 6)


def test_degree_stats_table2():
    stats = degree_stats(EdgeCountTable(4, TABLE2, 3))
    assert stats.d.tolist() == [3, 3, 6, 6]
    assert stats.d_tilde == (Fraction(1), Fraction(1), Fraction(2), Fraction(2))
    assert stats.is_exact


def test_degree_stats_table3_handshake():
    t = parse_table(b'x,2,1,2\n1,x,0,1\n2,3,x,3\n1,2,0,x\n', trials=3)
    stats = degree_stats(t)
    assert sum(stats.d_tilde) == Fraction(2 * (2 + 1 + 2 + 0 + 1 + 3), 3) == 6
    assert stats.d_tilde == (Fraction(5, 3), Fraction(1), Fraction(4, 3), Fraction(2))


def test_heterogeneous_trials():
    t = EdgeCountTable(3, {(1, 2): 1, (1, 3): 2, (2, 3): 0}, {(1, 2): 2, (1, 3): 4, (2, 3): 1})
    assert degree_stats(t).d_tilde == (Fraction(1), Fraction(1, 2), Fraction(1, 2))
    values, den = degree_stats(t).scaled_integers()
    assert den == 2 and values.tolist() == [2, 1, 1]


def test_large_trials_fall_back_to_floats():
    t = EdgeCountTable(3, [10 ** 6, 1, 2], [2 * 10 ** 6, 3, 3])
    stats = degree_stats(t)
    assert not stats.is_exact
    np.testing.assert_allclose(stats.d_tilde_float(), [0.5 + 1 / 3, 0.5 + 2 / 3, 1.])


def test_lift_table():
    t = EdgeCountTable(4, TABLE2, 3)
    x = lift_table(t)
    assert x.tolist() == [0, 3, 1, 2, 2, 1, 2, 1, 1, 2, 3, 0]
    assert dict(zip(lifted_cells(4), x))[(4, 3)] == 0


def test_parse_csv_with_and_without_lower_triangle(data_path):
    full = parse_table(data_path('table2.csv'), trials=3)
    inferred = parse_table(data_path('table2.csv'))
    upper_only = parse_table(b'x,0,1,2\n,x,2,1\n,,x,3\n,,,x\n', trials=3)
    for t in (inferred, upper_only):
        assert t.counts.tolist() == full.counts.tolist()
        assert t.trials.tolist() == full.trials.tolist()


def test_parse_json(data_path):
    t = parse_table(data_path('table2.json'), format='json')
    assert t.counts.tolist() == [0, 1, 2, 2, 1, 3]
    assert t.trials.tolist() == [3] * 6


def test_parse_trials_matrix(data_path):
    trials = read_integer_matrix(b'x,3,3,3\n3,x,3,3\n3,3,x,3\n3,3,3,x\n', allow_diagonal=True)
    t = parse_table(data_path('table2.csv'), trials=trials)
    assert t.trials.tolist() == [3] * 6


@pytest.mark.parametrize('raw, error', [
    (b'x,0,1\n1,x,1\n', ParseError),                # not square
    (b'0,0,1\n1,x,0\n0,1,x\n', ParseError),         # diagonal
    (b'x,a,1\n1,x,0\n0,1,x\n', ParseError),         # not a number
    (b'x,0.5,1\n1,x,0\n0,1,x\n', ParseError),       # not an integer
    (b'x,1,1\n1,x,0\n0,1,x\n', ConsistencyError),   # x_12 + x_21 != N
    (b'x,4,1\n,x,0\n,,x\n', ConsistencyError),      # count above N
])
def test_parse_errors(raw, error):
    with pytest.raises(error):
        parse_table(raw, trials=1)


def test_parse_json_errors():
    with pytest.raises(ParseError):
        parse_table(b'{"n": 3, "counts": {"1,2": 0}}', format='json', trials=1)
    with pytest.raises(ParseError):
        parse_table(b'{"n": 3', format='json')


@pytest.mark.parametrize('kind, raw', [
    ('dyad', b'{"n": 3, "counts": {"0,2": 1}}'),
    ('directed', b'{"n": 3, "counts": {"1,4": 2}}'),
    ('beta', b'{"n": 3, "counts": {"1,2": 0, "1,3": 1, "2,3": 0, "2,2": 1}}'),
])
def test_parse_json_cells_out_of_range(kind, raw):
    with pytest.raises(ParseError):
        parse_table(raw, format='json', kind=kind, trials=1)


def test_directed_and_dyad_tables(data_path):
    directed = parse_table(data_path('cycle3.csv'), kind='directed')
    assert directed.vector().tolist() == [1, 0, 0, 1, 1, 0]
    assert directed.comparisons()[0, 1] == 1
    dyads = parse_table(data_path('cycle3.csv'), kind='dyad')
    assert dyads.dyads == {(1, 2): (1, 0), (1, 3): (0, 1), (2, 3): (1, 0)}
    assert dyads.vector().reshape(3, 4).sum(axis=1).tolist() == [1, 1, 1]
    with pytest.raises(ConsistencyError):
        DyadTable.from_adjacency(np.array([[0, 2], [0, 0]]))


@given(edge_tables())
def test_csv_round_trip(t):
    parsed = parse_table(t.to_csv().encode())
    assert parsed.counts.tolist() == t.counts.tolist()
    assert parsed.trials.tolist() == t.trials.tolist()


@given(edge_tables(), st.randoms(use_true_random=False))
def test_degree_permutation_equivariance(t, random):
    perm = list(range(1, t.n + 1))
    random.shuffle(perm)
    d = degree_stats(t).d_tilde
    permuted = degree_stats(t.permute(perm)).d_tilde
    for i in range(t.n):
        assert permuted[perm[i] - 1] == d[i]


def test_directed_and_dyad_permute():
    counts = np.array([[0, 1, 2], [3, 0, 4], [5, 6, 0]])
    t = DirectedCountTable(3, counts).permute([2, 3, 1])
    assert t.counts[1, 2] == 1 and t.counts[2, 0] == 4
    d = DyadTable(3, {(1, 2): (1, 0), (1, 3): (1, 1), (2, 3): (0, 0)}).permute([2, 3, 1])
    assert d.dyads[(2, 3)] == (1, 0) and d.dyads[(1, 2)] == (1, 1)


def test_generate_graph_is_reproducible():
    params = BetaParams([0.3, -0.2, 0.1, 0.0, 0.5])
    a = generate_graph(params, trials=4, seed=11)
    b = generate_graph(params, trials=4, seed=11)
    assert a.counts.tolist() == b.counts.tolist()
    assert np.all(a.counts <= 4)
    assert generate_graph(params, seed=[11, 3]).is_graph


def test_generate_directed():
    t = generate_directed([0., 0.5, 1.], [0.2, 0., -0.3], seed=2)
    assert t.n == 3
    assert np.all(np.diag(t.counts) == 0)
    assert t.counts.tolist() == generate_directed([0., 0.5, 1.], [0.2, 0., -0.3], seed=2).counts.tolist()
    # saturated means leave no zero off the diagonal
    assert np.all(generate_directed([5.] * 4, [5.] * 4).vector() > 0)


def test_beta_params():
    params = BetaParams([-0.237, -1.002, -0.237, 1.205])
    assert params.edge_probabilities()[0] == pytest.approx(0.225, abs=1e-3)
    m = params.probability_matrix()
    assert np.isnan(m[0, 0]) and m[0, 1] == m[1, 0]
    with pytest.raises(ValueError):
        BetaParams([0., np.inf])
