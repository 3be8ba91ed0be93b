#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import CONST
from .errors import NumericalFailure

logger = logging.getLogger(__name__)

LP_MODES = ('float', 'exact')
SENSES = ('<=', '>=', '=')

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'


class LinearProgram:
    """
    max (or min) c.x  s.t.  A_eq x = b_eq,  A_ineq x (sense) b_ineq,  lo <= x <= hi.

    :ivar objective: c
    :vartype objective: list
    :ivar A_eq: equality constraint rows
    :vartype A_eq: list
    :ivar b_eq: equality right hand sides
    :vartype b_eq: list
    :ivar A_ineq: inequality constraint rows
    :vartype A_ineq: list
    :ivar b_ineq: inequality right hand sides
    :vartype b_ineq: list
    :ivar senses: one of '<=', '>=', '=' per inequality row
    :vartype senses: List[str]
    :ivar bounds: (lo, hi) per variable, None or +-inf for no bound. Default (0, None)
    :vartype bounds: List[tuple]
    :ivar maximize: maximize (default) or minimize
    :vartype maximize: bool
    """
    def __init__(self, objective: Sequence, A_eq=None, b_eq=None, A_ineq=None, b_ineq=None,
                 senses: Optional[Sequence[str]] = None, bounds: Optional[Sequence[tuple]] = None,
                 maximize: bool = True):
        self.objective = list(objective)
        nvar = len(self.objective)
        self.A_eq = [list(row) for row in (A_eq if A_eq is not None else list())]
        self.b_eq = list(b_eq if b_eq is not None else list())
        self.A_ineq = [list(row) for row in (A_ineq if A_ineq is not None else list())]
        self.b_ineq = list(b_ineq if b_ineq is not None else list())
        self.senses = list(senses) if senses is not None else ['<='] * len(self.A_ineq)
        self.bounds = list(bounds) if bounds is not None else [(0, None)] * nvar
        self.maximize = maximize

        assert len(self.A_eq) == len(self.b_eq), 'A_eq and b_eq differ in length'
        assert len(self.A_ineq) == len(self.b_ineq) == len(self.senses), 'Inequality blocks differ in length'
        assert all(len(row) == nvar for row in self.A_eq + self.A_ineq), \
            'Constraint rows must have {} entries'.format(nvar)
        assert len(self.bounds) == nvar, 'One (lo, hi) bound per variable is required'
        assert all(s in SENSES for s in self.senses), 'Senses must be among {}'.format(SENSES)

    @property
    def n_variables(self) -> int:
        return len(self.objective)


class LpSolution:
    """
    Result of :func:`solve_lp`.

    ``dual`` holds the multipliers of the rows of the internal standard form and ``dual_objective`` the matching
    dual bound, so that ``objective_value == dual_objective`` at an optimum (strong duality) and
    ``max_reduced_cost <= 0`` certifies dual feasibility.
    """
    def __init__(self, status: str, x=None, objective_value=None, dual=None, dual_objective=None,
                 max_reduced_cost=None, residual=None, mode: str = 'float', iterations: int = 0):
        self.status = status
        self.x = x
        self.objective_value = objective_value
        self.dual = dual
        self.dual_objective = dual_objective
        self.max_reduced_cost = max_reduced_cost
        self.residual = residual
        self.mode = mode
        self.iterations = iterations

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    def __repr__(self):
        return 'LpSolution(status={}, objective={}, mode={})'.format(self.status, self.objective_value, self.mode)


def _is_infinite(v) -> bool:
    return v is None or (isinstance(v, float) and math.isinf(v))


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    return Fraction(float(v))


def _converter(mode: str):
    return _to_fraction if mode == 'exact' else float


def _normalize_mode(mode: str) -> str:
    if mode in ('exact', 'exact-rational', 'rational'):
        return 'exact'
    assert mode == 'float', 'Unknown lp mode {}'.format(mode)
    return 'float'


class _StandardForm:
    """max c.u + const  s.t.  A u = b, u >= 0, b >= 0 with x = offset + M u."""

    def __init__(self, lp: LinearProgram, num):
        nvar = lp.n_variables
        sign = 1 if lp.maximize else -1
        zero = num(0)

        offset = [zero] * nvar
        mapping = list()  # (original variable, +-1) per structural column
        bound_rows = list()
        self.trivially_infeasible = False
        for k, (lo, hi) in enumerate(lp.bounds):
            if not _is_infinite(lo):
                if not _is_infinite(hi) and num(hi) < num(lo):
                    self.trivially_infeasible = True
                offset[k] = num(lo)
                if not _is_infinite(hi):
                    bound_rows.append((len(mapping), num(hi) - num(lo)))
                mapping.append((k, 1))
            elif not _is_infinite(hi):
                offset[k] = num(hi)
                mapping.append((k, -1))
            else:
                mapping.append((k, 1))
                mapping.append((k, -1))

        n_struct = len(mapping)
        columns_of = dict()
        for col, (var, s) in enumerate(mapping):
            columns_of.setdefault(var, list()).append((col, s))
        rows, rhs, senses = list(), list(), list()

        def add_row(coefs, value, sense):
            row = [zero] * n_struct
            shift = zero
            for k, a in enumerate(coefs):
                if a == 0:
                    continue
                a = num(a)
                shift += a * offset[k]
                for col, s in columns_of[k]:
                    row[col] += a * s
            rows.append(row)
            rhs.append(num(value) - shift)
            senses.append(sense)

        for coefs, value in zip(lp.A_eq, lp.b_eq):
            add_row(coefs, value, '=')
        for coefs, value, sense in zip(lp.A_ineq, lp.b_ineq, lp.senses):
            add_row(coefs, value, sense)
        for col, ub in bound_rows:
            row = [zero] * n_struct
            row[col] = num(1)
            rows.append(row)
            rhs.append(ub)
            senses.append('<=')

        n_slack = sum(1 for s in senses if s != '=')
        n_cols = n_struct + n_slack
        m = len(rows)
        a = np.empty((m, n_cols), dtype=object if num is not float else float)
        a[:, :] = zero
        slack = n_struct
        for r, (row, sense) in enumerate(zip(rows, senses)):
            a[r, :n_struct] = row
            if sense != '=':
                a[r, slack] = num(1) if sense == '<=' else num(-1)
                slack += 1
        b = np.array(rhs, dtype=a.dtype) if m else np.zeros(0, dtype=a.dtype)

        self.row_signs = np.ones(m, dtype=int)
        for r in range(m):
            if b[r] < 0:
                a[r] = -a[r]
                b[r] = -b[r]
                self.row_signs[r] = -1

        c = np.empty(n_cols, dtype=a.dtype)
        c[:] = zero
        for col, (var, s) in enumerate(mapping):
            c[col] = sign * num(lp.objective[var]) * s
        self.const = sign * sum((num(lp.objective[k]) * offset[k] for k in range(nvar)), zero)
        self.A, self.b, self.c = a, b, c
        self.mapping, self.offset = mapping, offset
        self.n_struct, self.n_cols, self.m = n_struct, n_cols, m
        self.sign = sign

    def recover(self, u: np.ndarray) -> list:
        x = list(self.offset)
        for col, (var, s) in enumerate(self.mapping):
            x[var] += s * u[col]
        return x


def _pivot(t: np.ndarray, r: int, j: int, exact: bool):
    t[r] = t[r] / t[r, j]
    col = t[:, j].copy()
    col[r] = 0
    rows = np.nonzero(col)[0]
    if len(rows):
        t[rows] -= np.outer(col[rows], t[r])
    if not exact:
        t[np.abs(t) < 1e-13] = 0.


def _simplex(t: np.ndarray, basis: List[int], cost: np.ndarray, n_allowed: int, exact: bool, tol,
             max_iter: Optional[int]) -> Tuple[str, int]:
    """Runs primal simplex on tableau ``t`` (last column = rhs) for max cost.u. Columns >= n_allowed never enter."""
    m = t.shape[0]
    fallback = CONST.BLAND_FALLBACK_FACTOR * (m + n_allowed)
    iterations = 0
    while True:
        if max_iter is not None and iterations > max_iter:
            raise NumericalFailure('Simplex did not terminate after {} pivots'.format(iterations))
        if m:
            reduced = cost[:n_allowed] - cost[basis].dot(t[:, :n_allowed])
        else:
            reduced = cost[:n_allowed].copy()
        bland = exact or iterations >= fallback
        candidates = np.nonzero(reduced > tol)[0]
        if len(candidates) == 0:
            return OPTIMAL, iterations
        j = int(candidates[0]) if bland else int(candidates[np.argmax(reduced[candidates].astype(float))])

        column = t[:, j]
        rows = np.nonzero(column > tol)[0]
        if len(rows) == 0:
            return UNBOUNDED, iterations
        ratios = t[rows, -1] / column[rows]
        best = min(ratios)
        ties = [r for r, ratio in zip(rows, ratios) if ratio - best <= tol]
        r = min(ties, key=lambda row: basis[row])
        _pivot(t, int(r), j, exact)
        basis[r] = j
        iterations += 1
        logger.debug('pivot %d: column %d enters at row %d', iterations, j, r)


def solve_lp(lp: LinearProgram, mode: str = 'float', tol: float = 1e-9) -> LpSolution:
    """
    Two-phase primal simplex.

    In 'float' mode pivots follow Dantzig's rule and switch to Bland's rule after 5 (m + n) iterations; a hard
    pivot cap raises :class:`NumericalFailure`. In 'exact' mode ('exact-rational') every number is a
    :class:`fractions.Fraction`, Bland's rule is used throughout and termination is guaranteed.

    :param lp: the linear program
    :param mode: 'float' or 'exact'
    :param tol: absolute tolerance of float mode (ignored in exact mode)
    :return: ``LpSolution``
    """
    mode = _normalize_mode(mode)
    exact = mode == 'exact'
    num = _converter(mode)
    eps = Fraction(0) if exact else tol
    sf = _StandardForm(lp, num)
    if sf.trivially_infeasible:
        return LpSolution(INFEASIBLE, mode=mode)

    m, ns = sf.m, sf.n_cols
    dtype = object if exact else float
    t = np.empty((m, ns + m + 1), dtype=dtype)
    t[:, :] = num(0)
    t[:, :ns] = sf.A
    for r in range(m):
        t[r, ns + r] = num(1)
    t[:, -1] = sf.b
    basis = list(range(ns, ns + m))
    max_iter = None if exact else CONST.MAX_PIVOT_FACTOR * (m + ns + 1)

    # phase 1: max -sum(artificials)
    cost1 = np.empty(ns + m, dtype=dtype)
    cost1[:] = num(0)
    cost1[ns:] = num(-1)
    _, it1 = _simplex(t, basis, cost1, ns, exact, eps, max_iter)
    infeasibility = -cost1[basis].dot(t[:, -1]) if m else num(0)
    if infeasibility > (0 if exact else tol * max(1., float(np.abs(sf.b).max(initial=0.)))):
        logger.debug('phase 1 ends with infeasibility %s', infeasibility)
        return LpSolution(INFEASIBLE, mode=mode, iterations=it1)

    # drive artificials out of the basis, dropping redundant rows
    redundant = list()
    for r in range(m):
        if basis[r] < ns:
            continue
        candidates = [j for j in range(ns) if abs(t[r, j]) > eps]
        if candidates:
            _pivot(t, r, candidates[0], exact)
            basis[r] = candidates[0]
        else:
            redundant.append(r)
    keep = [r for r in range(m) if r not in redundant]
    t = t[keep]
    basis = [basis[r] for r in keep]

    # phase 2
    cost2 = np.empty(ns + m, dtype=dtype)
    cost2[:] = num(0)
    cost2[:ns] = sf.c
    status, it2 = _simplex(t, basis, cost2, ns, exact, eps, max_iter)
    iterations = it1 + it2
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, mode=mode, iterations=iterations)

    u = np.empty(ns, dtype=dtype)
    u[:] = num(0)
    for r, j in enumerate(basis):
        if j < ns:
            u[j] = t[r, -1]
    x = sf.recover(u)
    value = sum((num(c) * xi for c, xi in zip(lp.objective, x)), num(0))

    # duals of the standard-form rows, y = c_B B^-1 (B^-1 sits in the artificial columns)
    y = cost2[basis].dot(t[:, ns:ns + m]) if len(basis) else np.zeros(m, dtype=dtype)
    reduced = sf.c - y.dot(sf.A) if m else sf.c
    dual_objective = sf.sign * (y.dot(sf.b) + sf.const) if m else sf.sign * sf.const
    y = y * sf.row_signs

    residual = _residual(lp, x, num)
    if not exact and residual > 1e3 * tol:
        raise NumericalFailure('Primal residual {:.3g} exceeds tolerance'.format(residual))

    if not exact:
        x = [float(v) for v in x]
    return LpSolution(OPTIMAL, x, value, list(y), dual_objective,
                      max(reduced) if len(reduced) else num(0), residual, mode, iterations)


def _residual(lp: LinearProgram, x: list, num) -> float:
    worst = 0.
    for coefs, value in zip(lp.A_eq, lp.b_eq):
        worst = max(worst, abs(float(sum(num(a) * xi for a, xi in zip(coefs, x)) - num(value))))
    for coefs, value, sense in zip(lp.A_ineq, lp.b_ineq, lp.senses):
        lhs = sum(num(a) * xi for a, xi in zip(coefs, x)) - num(value)
        violation = {'<=': lhs, '>=': -lhs, '=': abs(lhs)}[sense]
        worst = max(worst, float(violation))
    for xi, (lo, hi) in zip(x, lp.bounds):
        if not _is_infinite(lo):
            worst = max(worst, float(num(lo) - xi))
        if not _is_infinite(hi):
            worst = max(worst, float(xi - num(hi)))
    return worst


def independent_rows(matrix: np.ndarray) -> List[int]:
    """
    Indices of a maximal set of linearly independent rows of an integer matrix, computed exactly
    (fraction-free Gaussian elimination on Python integers).
    """
    rows = [[int(v) for v in row] for row in np.asarray(matrix)]
    basis_rows = list()  # reduced rows kept for elimination, with their pivot column
    chosen = list()
    for index, row in enumerate(rows):
        vec = list(row)
        for pivot_col, pivot_row in basis_rows:
            if vec[pivot_col]:
                a, b = pivot_row[pivot_col], vec[pivot_col]
                vec = [a * v - b * p for v, p in zip(vec, pivot_row)]
                g = math.gcd(*vec) if any(vec) else 1
                vec = [v // g for v in vec]
        nonzero = [k for k, v in enumerate(vec) if v]
        if nonzero:
            basis_rows.append((nonzero[0], vec))
            chosen.append(index)
    return chosen


def exact_rank(matrix: np.ndarray) -> int:
    return len(independent_rows(matrix))
