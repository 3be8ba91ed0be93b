#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import numpy as np
import pytest

from degseq.design import (DesignMatrix, beta_design, bt_design, cayley_design, design_for_model, p1_design,
                           poisson_design, rasch_design)
from degseq.errors import ParameterError, SizeError
from degseq.tables import EdgeCountTable, degree_stats, lifted_cells


def test_beta_design_is_incidence_matrix():
    a = beta_design(4)
    assert a.entries.shape == (4, 6)
    assert a.entries.sum(axis=0).tolist() == [2] * 6
    assert a.entries.sum(axis=1).tolist() == [3] * 4
    assert a.rank == 4


@pytest.mark.parametrize('n', [3, 4, 5, 6])
def test_reduced_cayley_has_full_row_rank(n):
    c = cayley_design(n, reduced=True)
    assert c.rows == n * (n - 1) // 2 + n
    assert c.cols == n * (n - 1)
    assert c.rank == c.rows
    assert c.col_labels == lifted_cells(n)


def test_cayley_statistics_recover_trials_and_degrees():
    t = EdgeCountTable(4, [0, 1, 2, 2, 1, 3], 3)
    c = cayley_design(4)
    stat = c.apply(t.lifted())
    n_pairs = 6
    assert stat[:n_pairs].tolist() == [3] * n_pairs
    assert stat[n_pairs:n_pairs + 4].tolist() == degree_stats(t).d.tolist()
    # non-degrees: (n - 1) N - d
    assert stat[n_pairs + 4:].tolist() == [9 - d for d in degree_stats(t).d.tolist()]


def test_poisson_and_bt_designs():
    p = poisson_design(4)
    assert p.entries.shape == (8, 12)
    assert p.rank == 7
    bt = bt_design(4)
    assert bt.entries.shape == (10, 12)
    assert bt.rank == 9
    assert bt.row_labels[-1] == 'out_4'


def test_rasch_design_rank():
    r = rasch_design(2, 3)
    assert r.entries.shape == (6 + 5, 12)
    assert r.rank == 6 + 5 - 1


@pytest.mark.parametrize('variant, rows, rank', [('zero', 10, 8), ('constant', 11, 9), ('edge-dependent', 14, 11)])
def test_p1_design_n3(variant, rows, rank):
    a = p1_design(3, variant)
    assert a.rows == rows
    assert a.cols == 12
    assert a.rank == rank
    # the (1,1) state of a dyad carries both arcs
    col = a.column_index((1, 2, '11'))
    assert a.entries[a.row_index('theta'), col] == 2
    assert a.entries[a.row_index('alpha_1'), col] == a.entries[a.row_index('beta_2'), col] == 1


def test_p1_lambda_rows_are_sampling_constraints():
    a = p1_design(4, 'zero')
    lambdas = a.entries[[k for k, label in enumerate(a.row_labels) if label.startswith('lambda_')]]
    assert np.all(lambdas.sum(axis=1) == 4)
    assert len(a.dyad_columns) == 6
    assert a.without_rows('lambda_').rows == a.rows - 6


def test_design_for_model_aliases():
    assert design_for_model('p1-const', 3).name == 'p1-constant'
    assert design_for_model('cayley-reduced', 5).rows == 15
    assert design_for_model('rasch', k=3, l=2).cols == 12
    frame = design_for_model('beta', 3).to_frame()
    assert list(frame.index) == ['beta_1', 'beta_2', 'beta_3']
    assert list(frame.columns) == ['1-2', '1-3', '2-3']


@pytest.mark.parametrize('build, error', [
    (lambda: beta_design(1), SizeError),
    (lambda: cayley_design(1, reduced=True), SizeError),
    (lambda: rasch_design(1, 3), SizeError),
    (lambda: p1_design(2), SizeError),
    (lambda: p1_design(3, 'mutual'), ParameterError),
    (lambda: design_for_model('ergm', 4), ParameterError),
])
def test_invalid_designs(build, error):
    with pytest.raises(error):
        build()


def test_rank_is_exact():
    # determinant 1, far below the floating point tolerance for entries of this size
    a = DesignMatrix(np.array([[10 ** 9, 10 ** 9 + 1], [10 ** 9 - 1, 10 ** 9]]), ['a', 'b'], [(1,), (2,)])
    assert a.rank == 2
