#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import linalg
from scipy.special import expit, logit, logsumexp, xlogy

from .config import CONST
from .design import beta_design, p1_design
from .errors import NoConvergence, NonexistentMLE
from .geometry import FacialSet, beta_check
from .models import bt_existence, p1_existence
from .tables import BetaParams, DirectedCountTable, DyadTable, EdgeCountTable, degree_stats, node_pairs

logger = logging.getLogger(__name__)

ALGORITHMS = ('newton', 'fixed-point')


class FitResult:
    """
    Outcome of a maximum likelihood fit.

    :ivar exists: the MLE exists (False for an extended MLE on a proper face)
    :vartype exists: bool
    :ivar beta_hat: natural parameters, None when the MLE does not exist
    :vartype beta_hat: Optional[np.ndarray]
    :ivar p_hat: fitted probabilities, keyed by pair (or by (i, j, state) for p1)
    :vartype p_hat: dict
    :ivar facial_set: facial set of the observed statistic when it lies on the boundary
    :vartype facial_set: Optional[FacialSet]
    :ivar loglik: log-likelihood at the fit, binomial coefficients omitted
    :vartype loglik: float
    :ivar iterations: iterations of the solver
    :vartype iterations: int
    :ivar moment_residual: sup-norm of the moment equations at the fit
    :vartype moment_residual: float
    """
    def __init__(self, exists: bool, beta_hat: Optional[np.ndarray], p_hat: dict, facial_set: FacialSet = None,
                 loglik: float = float('nan'), iterations: int = 0, moment_residual: float = float('nan'),
                 model: str = 'beta', algorithm: str = ''):
        self.exists = exists
        self.beta_hat = beta_hat
        self.p_hat = p_hat
        self.facial_set = facial_set
        self.loglik = loglik
        self.iterations = iterations
        self.moment_residual = moment_residual
        self.model = model
        self.algorithm = algorithm

    def p_matrix(self, n: int) -> np.ndarray:
        """Symmetric n x n matrix of fitted edge probabilities, nan on the diagonal."""
        m = np.full((n, n), np.nan)
        for (i, j), p in self.p_hat.items():
            m[i - 1, j - 1] = m[j - 1, i - 1] = p
        return m

    def to_dict(self) -> dict:
        out = {'model': self.model, 'exists': self.exists, 'algorithm': self.algorithm,
               'beta_hat': None if self.beta_hat is None else [float(b) for b in self.beta_hat],
               'p_hat': {','.join(str(v) for v in key): float(p) for key, p in self.p_hat.items()},
               'loglik': float(self.loglik), 'loglik_note': 'binomial coefficients omitted',
               'iterations': self.iterations, 'moment_residual': float(self.moment_residual)}
        if self.facial_set is not None and self.facial_set.is_proper:
            out['co_facial'] = [list(c) for c in self.facial_set.cofacial]
        return out


def _pair_sums(beta: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(len(beta), k=1)
    return beta[i] + beta[j]


def log_likelihood(t: EdgeCountTable, params: BetaParams) -> float:
    """
    sum_i d_i beta_i - psi(beta), psi(beta) = sum_{i<j} N_ij log(1 + exp(beta_i + beta_j)).
    The constant sum of log binomial coefficients is omitted.
    """
    d = degree_stats(t).d
    return float(d @ params.beta - np.sum(t.trials * np.logaddexp(0., _pair_sums(params.beta))))


def loglik_gradient(t: EdgeCountTable, params: BetaParams) -> np.ndarray:
    """Score d - A (N * p(beta))."""
    a = beta_design(t.n).entries
    return degree_stats(t).d - a @ (t.trials * params.edge_probabilities())


def moment_residual(t: EdgeCountTable, p: np.ndarray) -> float:
    """max_i |sum_j N_ij (p_ij - p~_ij)| / max N, i.e. |A p - d~|_inf when N is constant."""
    a = beta_design(t.n).entries
    return float(np.abs(a @ (t.trials * (p - t.p_tilde()))).max() / t.trials.max())


def _binomial_loglik(t: EdgeCountTable, p: np.ndarray) -> float:
    return float(np.sum(xlogy(t.counts, p) + xlogy(t.trials - t.counts, 1. - p)))


def _initial_beta(t: EdgeCountTable) -> np.ndarray:
    average = degree_stats(t).d_tilde_float() / (t.n - 1)
    return 0.5 * logit(np.clip(average, 1e-3, 1. - 1e-3))


def _newton_beta(t: EdgeCountTable, beta: np.ndarray, pairs_mask: np.ndarray, tol: float, max_iter: int,
                 fixed_p: np.ndarray) -> Tuple[np.ndarray, int]:
    """
    Damped Newton ascent on the binomial log-likelihood of the pairs in ``pairs_mask``, the other pairs being held
    at ``fixed_p``. Singular Hessians (faces) are handled with least-squares steps.
    """
    a = beta_design(t.n).entries.astype(float)[:, pairs_mask]
    counts, trials = t.counts[pairs_mask], t.trials[pairs_mask]

    def probabilities(b):
        p = fixed_p.copy()
        p[pairs_mask] = expit(_pair_sums(b)[pairs_mask])
        return p

    def objective(b):
        s = _pair_sums(b)[pairs_mask]
        return float(counts @ s - trials @ np.logaddexp(0., s))

    value = objective(beta)
    for iteration in range(1, max_iter + 1):
        p = probabilities(beta)
        if moment_residual(t, p) <= tol:
            return beta, iteration - 1
        q = p[pairs_mask]
        gradient = a @ (counts - trials * q)
        hessian = (a * (trials * q * (1. - q))) @ a.T
        try:
            step = linalg.solve(hessian, gradient, assume_a='pos')
        except (linalg.LinAlgError, ValueError):
            step = linalg.lstsq(hessian, gradient)[0]
        slope = float(gradient @ step)
        alpha = 1.
        while True:
            candidate = beta + alpha * step
            new_value = objective(candidate)
            if new_value >= value + 1e-4 * alpha * slope or alpha < 1e-12:
                break
            alpha /= 2.
        if new_value < value:
            # no ascent direction left at machine precision
            break
        logger.debug('newton %d: loglik %.12g, step %.3g', iteration, new_value, alpha)
        beta, value = candidate, new_value
    p = probabilities(beta)
    if moment_residual(t, p) <= tol:
        return beta, max_iter
    raise NoConvergence('Newton stopped with moment residual {:.3g} > {:.3g}'.format(moment_residual(t, p), tol))


def _fixed_point_beta(t: EdgeCountTable, beta: np.ndarray, tol: float, max_iter: int) -> Tuple[np.ndarray, int]:
    """beta_i <- log d_i - log sum_j N_ij exp(beta_j) / (1 + exp(beta_i + beta_j))."""
    n = t.n
    d = degree_stats(t).d.astype(float)
    trials = np.zeros((n, n))
    i, j = np.triu_indices(n, k=1)
    trials[i, j] = trials[j, i] = t.trials
    for iteration in range(1, max_iter + 1):
        p = BetaParams(beta).edge_probabilities()
        if moment_residual(t, p) <= tol:
            return beta, iteration - 1
        e = np.exp(beta)
        denominator = trials * e[None, :] / (1. + np.outer(e, e))
        np.fill_diagonal(denominator, 0.)
        beta = np.log(d) - np.log(denominator.sum(axis=1))
    p = BetaParams(beta).edge_probabilities()
    if moment_residual(t, p) <= tol:
        return beta, max_iter
    raise NoConvergence('Fixed point stopped with moment residual {:.3g} > {:.3g}'.format(moment_residual(t, p), tol))


def fit_mle(t: EdgeCountTable, tol: float = 1e-10, max_iter: int = 500, algorithm: str = 'newton',
            check: bool = True, mode: str = 'exact') -> FitResult:
    """
    MLE of the beta model.

    :param t: edge count table
    :param tol: tolerance on the moment equations
    :param max_iter: iteration cap
    :param algorithm: 'newton' (damped Newton with backtracking) or 'fixed-point'
    :param check: decide existence first (exact LP by default)
    :param mode: arithmetic of the existence check
    :return: ``FitResult``
    :raises NonexistentMLE: the statistic lies on the boundary, use :func:`extended_mle`
    :raises NoConvergence: iteration cap reached
    """
    assert algorithm in ALGORITHMS, 'Unknown algorithm {}'.format(algorithm)
    if check:
        verdict = beta_check(t, mode=mode, with_facial_set=False)
        if not verdict.exists:
            raise NonexistentMLE('The degree sequence lies on the boundary of the polytope of degree sequences')

    beta = _initial_beta(t)
    if algorithm == 'newton':
        everything = np.ones(len(t.counts), dtype=bool)
        beta, iterations = _newton_beta(t, beta, everything, tol, max_iter, np.zeros(len(t.counts)))
    else:
        beta, iterations = _fixed_point_beta(t, beta, tol, max_iter)

    params = BetaParams(beta)
    p = params.edge_probabilities()
    logger.info('beta model fitted in %d iterations', iterations)
    return FitResult(True, beta, dict(zip(t.pairs, p)), None, log_likelihood(t, params), iterations,
                     moment_residual(t, p), 'beta', algorithm)


def extended_mle(t: EdgeCountTable, tol: float = 1e-10, max_iter: int = 500, mode: str = 'exact') -> FitResult:
    """
    Extended MLE of the beta model.

    The facial set is identified exactly; pairs with a co-facial lifted cell are fixed at their observed value
    (p = 0 when (i, j), i < j, is co-facial and p = 1 when (j, i) is), and the log-likelihood of the remaining
    pairs is maximized over beta, which solves the moment equations A p = d~ on the face. Reduces to
    :func:`fit_mle` when the statistic is interior.
    """
    verdict = beta_check(t, mode=mode, with_facial_set=True)
    if verdict.exists:
        return fit_mle(t, tol=tol, max_iter=max_iter, check=False)

    fs = verdict.facial_set
    cofacial = set(fs.cofacial)
    fixed = np.zeros(len(t.counts))
    free = np.ones(len(t.counts), dtype=bool)
    for k, (i, j) in enumerate(t.pairs):
        if (i, j) in cofacial:
            fixed[k], free[k] = 0., False
        elif (j, i) in cofacial:
            fixed[k], free[k] = 1., False

    iterations = 0
    p = fixed.copy()
    if free.any():
        beta, iterations = _newton_beta(t, np.zeros(t.n), free, tol, max_iter, fixed)
        p[free] = expit(_pair_sums(beta)[free])
    logger.info('extended MLE with %d co-facial cells in %d iterations', len(cofacial), iterations)
    return FitResult(False, None, dict(zip(t.pairs, p)), fs, _binomial_loglik(t, p), iterations,
                     moment_residual(t, p), 'beta', 'newton')


def fit_bradley_terry(t: DirectedCountTable, tol: float = CONST.MOMENT_TOL, max_iter: int = 500,
                      algorithm: str = 'newton') -> FitResult:
    """
    Bradley-Terry MLE, P(i beats j) = exp(beta_i) / (exp(beta_i) + exp(beta_j)), normalized so that
    sum_i exp(beta_i) = 1.

    :param t: counts x_ij of wins of i over j
    :param tol: tolerance on the win moment equations W_i = sum_j N_ij P_ij
    :param max_iter: iteration cap
    :param algorithm: 'newton' or 'mm' (minorization-maximization)
    :raises NonexistentMLE: the wins graph is not strongly connected
    """
    assert algorithm in ('newton', 'mm'), 'Unknown algorithm {}'.format(algorithm)
    verdict = bt_existence(t)
    if not verdict.exists:
        raise NonexistentMLE('Objects {} never lose, the wins graph is not strongly connected'
                             .format(sorted(verdict.never_loses)))
    n = t.n
    wins = t.counts.sum(axis=1).astype(float)
    comparisons = t.comparisons().astype(float)

    def win_probabilities(b):
        p = expit(b[:, None] - b[None, :])
        np.fill_diagonal(p, 0.)
        return p

    def residual(b):
        return float(np.abs(wins - (comparisons * win_probabilities(b)).sum(axis=1)).max())

    def objective(b):
        return float(np.sum(xlogy(t.counts, win_probabilities(b) + np.eye(n))))

    beta = np.full(n, -np.log(n))
    iterations = 0
    while residual(beta) > tol:
        if iterations >= max_iter:
            raise NoConvergence('Bradley-Terry fit stopped with residual {:.3g}'.format(residual(beta)))
        iterations += 1
        if algorithm == 'mm':
            pi = np.exp(beta)
            denominator = comparisons / (pi[:, None] + pi[None, :])
            np.fill_diagonal(denominator, 0.)
            beta = np.log(wins) - np.log(denominator.sum(axis=1))
        else:
            p = win_probabilities(beta)
            weights = comparisons * p * p.T
            laplacian = np.diag(weights.sum(axis=1)) - weights
            gradient = wins - (comparisons * p).sum(axis=1)
            step = linalg.lstsq(laplacian, gradient)[0]
            value, alpha = objective(beta), 1.
            while objective(beta + alpha * step) < value and alpha > 1e-12:
                alpha /= 2.
            beta = beta + alpha * step
        beta = beta - logsumexp(beta)

    p = win_probabilities(beta)
    p_hat = {(i, j): float(p[i - 1, j - 1]) for i, j in node_pairs(n)}
    return FitResult(True, beta, p_hat, None, objective(beta), iterations, residual(beta), 'bt', algorithm)


def fit_p1(t: DyadTable, variant: str = 'zero', tol: float = 1e-10, max_iter: int = 500,
           mode: str = 'exact') -> FitResult:
    """
    Newton fit of the p1 log-linear model. Each dyad is multinomial over its four states with log-probabilities
    given by the design rows other than lambda_ij, which only normalize. The design is rank deficient, so steps
    are minimum-norm least-squares solutions and ``beta_hat`` holds one of the equivalent parameter vectors.

    :raises NonexistentMLE: the statistic lies on the boundary of the p1 cone
    """
    verdict = p1_existence(t, variant, mode=mode, with_facial_set=False)
    if not verdict.exists:
        raise NonexistentMLE('The p1 sufficient statistic lies on the boundary of the model cone')
    design = p1_design(t.n, variant).without_rows('lambda_')
    m = design.entries.astype(float)
    x = t.vector().astype(float)
    n_dyads = len(node_pairs(t.n))

    def probabilities(theta):
        eta = (m.T @ theta).reshape(n_dyads, 4)
        return np.exp(eta - logsumexp(eta, axis=1, keepdims=True)).ravel()

    def objective(theta):
        return float(xlogy(x, probabilities(theta)).sum())

    theta = np.zeros(m.shape[0])
    iterations = 0
    while True:
        p = probabilities(theta)
        gradient = m @ (x - p)
        if np.abs(gradient).max() <= tol:
            break
        if iterations >= max_iter:
            raise NoConvergence('p1 fit stopped with residual {:.3g}'.format(np.abs(gradient).max()))
        iterations += 1
        expected = np.stack([m[:, 4 * k:4 * k + 4] @ p[4 * k:4 * k + 4] for k in range(n_dyads)], axis=1)
        hessian = (m * p) @ m.T - expected @ expected.T
        step = linalg.lstsq(hessian, gradient)[0]
        value, alpha = objective(theta), 1.
        while objective(theta + alpha * step) < value and alpha > 1e-12:
            alpha /= 2.
        theta = theta + alpha * step

    p = probabilities(theta)
    p_hat = {label: float(v) for label, v in zip(design.col_labels, p)}
    return FitResult(True, theta, p_hat, None, objective(theta), iterations, float(np.abs(m @ (x - p)).max()),
                     'p1-{}'.format(variant), 'newton')
