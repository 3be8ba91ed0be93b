#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from degseq.design import cayley_design, p1_design
from degseq.lp import LinearProgram, exact_rank, independent_rows, solve_lp


def test_small_lp_exact_and_float():
    lp = LinearProgram([1, 1], A_ineq=[[1, 2], [3, 1]], b_ineq=[4, 6])
    exact = solve_lp(lp, mode='exact')
    assert exact.is_optimal
    assert exact.objective_value == Fraction(14, 5)
    assert exact.x == [Fraction(8, 5), Fraction(6, 5)]
    assert exact.dual_objective == exact.objective_value
    assert exact.max_reduced_cost <= 0

    approx = solve_lp(lp, mode='float')
    assert approx.objective_value == pytest.approx(2.8)
    np.testing.assert_allclose(approx.x, [1.6, 1.2])


def test_infeasible_and_unbounded():
    assert solve_lp(LinearProgram([1], A_eq=[[1]], b_eq=[-1]), mode='exact').status == 'infeasible'
    assert solve_lp(LinearProgram([1, 0], A_ineq=[[1, -1]], b_ineq=[1]), mode='exact').status == 'unbounded'
    assert solve_lp(LinearProgram([1, 0], A_ineq=[[1, -1]], b_ineq=[1]), mode='float').status == 'unbounded'


def test_bounds_senses_and_minimization():
    lp = LinearProgram([1, 2], A_ineq=[[1, 1]], b_ineq=[-5], senses=['>='], bounds=[(-3, None), (0, 4)],
                       maximize=False)
    solution = solve_lp(lp, mode='exact')
    assert solution.objective_value == -3
    assert solution.x[0] == -3


@pytest.mark.parametrize('mode', ['exact', 'float'])
def test_degenerate_lp_terminates(mode):
    # cycles under the largest coefficient rule without an anti-cycling fallback
    lp = LinearProgram([0.75, -20, 0.5, -6],
                       A_ineq=[[0.25, -8, -1, 9], [0.5, -12, -0.5, 3], [0, 0, 1, 0]],
                       b_ineq=[0, 0, 1])
    solution = solve_lp(lp, mode=mode)
    assert solution.is_optimal
    assert float(solution.objective_value) == pytest.approx(1.25)


def test_redundant_equalities():
    lp = LinearProgram([1, 1, 1], A_eq=[[1, 1, 0], [0, 1, 1], [1, 2, 1]], b_eq=[1, 1, 2])
    solution = solve_lp(lp, mode='exact')
    assert solution.is_optimal
    assert solution.objective_value == 2


@st.composite
def random_lps(draw, max_vars=30, max_rows=8):
    n = draw(st.integers(2, max_vars))
    m = draw(st.integers(1, max_rows))
    coefficient = st.integers(-5, 5)
    rows = draw(st.lists(st.lists(coefficient, min_size=n, max_size=n), min_size=m, max_size=m))
    rhs = draw(st.lists(st.integers(-10, 10), min_size=m, max_size=m))
    senses = draw(st.lists(st.sampled_from(['<=', '>=', '=']), min_size=m, max_size=m))
    objective = draw(st.lists(coefficient, min_size=n, max_size=n))
    return LinearProgram(objective, A_ineq=rows, b_ineq=rhs, senses=senses, maximize=draw(st.booleans()))


@settings(max_examples=200)
@given(random_lps())
def test_float_agrees_with_exact(lp):
    exact = solve_lp(lp, mode='exact')
    approx = solve_lp(lp, mode='float')
    assert approx.status == exact.status
    if exact.is_optimal:
        assert approx.objective_value == pytest.approx(float(exact.objective_value), rel=1e-6, abs=1e-6)
        assert exact.residual == 0


@given(st.lists(st.lists(st.integers(0, 5), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(-3, 5), min_size=3, max_size=3),
       st.integers(1, 20))
def test_bounded_lps_are_solved(rows, objective, rhs):
    lp = LinearProgram(objective, A_ineq=rows, b_ineq=[rhs] * len(rows), bounds=[(0, 10)] * 3)
    exact = solve_lp(lp, mode='exact')
    assert exact.is_optimal
    assert solve_lp(lp, mode='float').objective_value == pytest.approx(float(exact.objective_value), abs=1e-6)


def test_independent_rows():
    assert independent_rows(np.array([[1, 2], [2, 4], [0, 1]])) == [0, 2]
    assert exact_rank(np.zeros((3, 3), dtype=int)) == 0
    assert exact_rank(cayley_design(5, reduced=True).entries) == 15
    assert exact_rank(p1_design(3, 'edge-dependent').entries) == 11
