#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .config import CONST
from .design import beta_design
from .errors import ParameterError, SizeError
from .geometry import p_family_masks, beta_check
from .tables import BetaParams, generate_graph

logger = logging.getLogger(__name__)


class AsymptoticReport:
    """
    Evaluation of the sufficient conditions for existence of the MLE with high probability.

    :ivar n: number of nodes
    :ivar N: number of trials per pair
    :ivar c: exponent constant
    :ivar C: additive constant
    :ivar radius: sqrt(c n log n / N) (sqrt(c n log n) for the corollary)
    :ivar gate: n >= max(4, 2 radius + 1) (and n >= N for the corollary)
    :ivar condition_i: min_i min(d_i, n - 1 - d_i) >= 2 radius + C
    :ivar margin_i: min_i min(d_i, n - 1 - d_i) - 2 radius - C
    :ivar condition_ii: g(S, T, d, n) > |S u T| radius + C on every checked pair
    :ivar margin_ii: smallest g(S, T, d, n) - |S u T| radius - C, inf when no pair is checked
    :ivar worst_pair: (S, T) attaining ``margin_ii``
    :ivar checked_pairs: number of (S, T) pairs evaluated
    :ivar certified: the pairs were enumerated exhaustively
    :ivar bound: lower bound on the existence probability when both conditions hold
    """
    def __init__(self, **kwargs):
        self.n = kwargs.get('n')
        self.N = kwargs.get('N')
        self.c = kwargs.get('c')
        self.C = kwargs.get('C')
        self.radius = kwargs.get('radius')
        self.gate = kwargs.get('gate')
        self.condition_i = kwargs.get('condition_i')
        self.margin_i = kwargs.get('margin_i')
        self.condition_ii = kwargs.get('condition_ii')
        self.margin_ii = kwargs.get('margin_ii')
        self.worst_pair = kwargs.get('worst_pair')
        self.checked_pairs = kwargs.get('checked_pairs')
        self.certified = kwargs.get('certified', True)
        self.bound = kwargs.get('bound')

    @property
    def holds(self) -> bool:
        return bool(self.gate and self.condition_i and self.condition_ii)

    def to_dict(self) -> dict:
        out = vars(self).copy()
        if self.worst_pair is not None:
            out['worst_pair'] = {'S': sorted(self.worst_pair[0]), 'T': sorted(self.worst_pair[1])}
        out['holds'] = self.holds
        return out


def expected_degrees(params: BetaParams) -> np.ndarray:
    """d_bar = A p(beta), the expected rescaled degrees."""
    return beta_design(params.n).entries @ params.edge_probabilities()


def _sampled_masks(n: int, n_samples: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Random (S, T) labelings in the family plus every single-node pair and every half split."""
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 3, size=(n_samples, n))
    extra = list()
    for i, j in itertools.permutations(range(n), 2):
        row = np.zeros(n, dtype=np.int64)
        row[i], row[j] = 1, 2
        extra.append(row)
    half = n // 2
    for S in itertools.islice(itertools.combinations(range(n), half), 2000):
        row = np.full(n, 2, dtype=np.int64)
        row[list(S)] = 1
        extra.append(row)
    labels = np.vstack([labels] + extra)
    s_mask, t_mask = labels == 1, labels == 2
    s, t = s_mask.sum(axis=1), t_mask.sum(axis=1)
    size = s + t
    keep = (s >= 1) & (t >= 1) & (((size >= 2) & (size <= n - 3)) | (size == n))
    return s_mask[keep], t_mask[keep]


def _condition_ii(d_bar: np.ndarray, n: int, radius: float, C: float, cap: int, sample_pairs: int, seed: int,
                  min_size: float = 0.) -> Tuple[float, Optional[tuple], int, bool]:
    if n <= cap:
        s_mask, t_mask = p_family_masks(n)
        certified = True
    else:
        s_mask, t_mask = _sampled_masks(n, sample_pairs, seed)
        certified = False
    s, t = s_mask.sum(axis=1), t_mask.sum(axis=1)
    keep = np.minimum(s, t) > min_size
    s_mask, t_mask, s, t = s_mask[keep], t_mask[keep], s[keep], t[keep]
    if len(s) == 0:
        return float('inf'), None, 0, certified
    g = s * (n - 1 - t) - s_mask @ d_bar + t_mask @ d_bar
    margin = g - (s + t) * radius - C
    k = int(np.argmin(margin))
    worst = (frozenset(np.nonzero(s_mask[k])[0] + 1), frozenset(np.nonzero(t_mask[k])[0] + 1))
    return float(margin[k]), worst, len(s), certified


def check_theorem4(d_bar: Sequence[float], n: int, N: int, c: float, C: float, cap: int = CONST.EXHAUSTIVE_CAP,
                   sample_pairs: int = 100000, seed: int = 0) -> AsymptoticReport:
    """
    Checks (i) min_i min(d_i, n - 1 - d_i) >= 2 r + C and (ii) g(S, T, d, n) > |S u T| r + C over the (S, T)
    family, with r = sqrt(c n log n / N). Under both the MLE exists with probability at least 1 - 2 / n^(2c - 1).

    Above ``cap`` nodes condition (ii) is checked on a random sample and the report is not certified.

    :raises ParameterError: c <= 1/2 or C outside (0, (n - 1) / 2 - r)
    """
    d_bar = np.asarray(d_bar, dtype=float)
    if c <= 0.5:
        raise ParameterError('c must exceed 1/2, got {}'.format(c))
    radius = math.sqrt(c * n * math.log(n) / N)
    return _report(d_bar, n, N, c, C, radius, max(4., 2 * radius + 1), 1 - 2 / n ** (2 * c - 1), 0., cap,
                   sample_pairs, seed)


def check_corollary(d_bar: Sequence[float], n: int, N: int, c: float, C: float, cap: int = CONST.EXHAUSTIVE_CAP,
                    sample_pairs: int = 100000, seed: int = 0) -> AsymptoticReport:
    """
    Variant with r = sqrt(c n log n) that only checks (ii) on pairs with min(|S|, |T|) > r + C. Needs c > 1
    (bound 1 - 2 / n^(2c - 2)), or c > 1/2 when N = 1 (bound 1 - 2 / n^(2c - 1)).
    """
    d_bar = np.asarray(d_bar, dtype=float)
    threshold = 0.5 if N == 1 else 1.
    if c <= threshold:
        raise ParameterError('c must exceed {}, got {}'.format(threshold, c))
    radius = math.sqrt(c * n * math.log(n))
    exponent = 2 * c - 1 if N == 1 else 2 * c - 2
    return _report(d_bar, n, N, c, C, radius, max(float(N), 4., 2 * radius + 1), 1 - 2 / n ** exponent,
                   radius + C, cap, sample_pairs, seed)


def _report(d_bar, n, N, c, C, radius, gate_bound, bound, min_size, cap, sample_pairs, seed) -> AsymptoticReport:
    if not 0 < C < (n - 1) / 2 - radius:
        raise ParameterError('C must lie in (0, {:.6g}), got {}'.format((n - 1) / 2 - radius, C))
    gate = n >= gate_bound
    if not gate:
        logger.warning('n = %d is below the gate %.4g of the existence bound', n, gate_bound)
    margin_i = float(np.minimum(d_bar, n - 1 - d_bar).min() - 2 * radius - C)
    margin_ii, worst, checked, certified = _condition_ii(d_bar, n, radius, C, cap, sample_pairs, seed, min_size)
    return AsymptoticReport(n=n, N=N, c=c, C=C, radius=radius, gate=gate, condition_i=margin_i >= 0,
                            margin_i=margin_i, condition_ii=margin_ii > 0, margin_ii=margin_ii, worst_pair=worst,
                            checked_pairs=checked, certified=certified, bound=bound)


def _cds_lhs(s_mask: np.ndarray, d: np.ndarray) -> np.ndarray:
    """|S|(|S| - 1) - sum_S d_i + sum_{i not in S} min(d_i, |S|) for every row of ``s_mask``."""
    size = s_mask.sum(axis=1)
    outside = np.where(s_mask, 0., np.minimum(d[None, :], size[:, None]))
    return size * (size - 1) - s_mask @ d + outside.sum(axis=1)


class CdsReport:
    """Degree bounds c1 (n - 1) < d_i < c2 (n - 1) and the set inequality over |S| > c1^2 n^2."""
    def __init__(self, holds: bool, degrees_ok: bool, sets_ok: bool, worst_set: Optional[frozenset],
                 margin: float, checked_sets: int):
        self.holds = holds
        self.degrees_ok = degrees_ok
        self.sets_ok = sets_ok
        self.worst_set = worst_set
        self.margin = margin
        self.checked_sets = checked_sets

    def to_dict(self) -> dict:
        out = vars(self).copy()
        out['worst_set'] = None if self.worst_set is None else sorted(self.worst_set)
        return out


def _subset_masks(n: int) -> np.ndarray:
    codes = np.arange(1, 2 ** n, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(bool)


def check_cds_condition(d: Sequence[float], n: int, c1: float, c2: float, c3: float,
                        cap: int = CONST.EXHAUSTIVE_CAP) -> CdsReport:
    """
    Sufficient conditions of the fixed-point literature: c1 (n - 1) < d_i < c2 (n - 1) for every i and
    |S|(|S| - 1) - sum_S d_i + sum_{i not in S} min(d_i, |S|) > c3 n^2 for every S with |S| > c1^2 n^2.
    """
    for name, value in (('c1', c1), ('c2', c2), ('c3', c3)):
        if not 0 < value < 1:
            raise ParameterError('{} must lie in (0, 1), got {}'.format(name, value))
    if n > cap:
        raise SizeError('Subset enumeration is capped at n = {}'.format(cap))
    d = np.asarray(d, dtype=float)
    degrees_ok = bool(np.all((c1 * (n - 1) < d) & (d < c2 * (n - 1))))
    masks = _subset_masks(n)
    masks = masks[masks.sum(axis=1) > c1 ** 2 * n ** 2]
    if len(masks) == 0:
        return CdsReport(degrees_ok, degrees_ok, True, None, float('inf'), 0)
    margin = _cds_lhs(masks, d) - c3 * n ** 2
    k = int(np.argmin(margin))
    sets_ok = bool(margin[k] > 0)
    return CdsReport(degrees_ok and sets_ok, degrees_ok, sets_ok, frozenset(np.nonzero(masks[k])[0] + 1),
                     float(margin[k]), len(masks))


def cds_dominance_gap(d: Sequence[float], n: int) -> float:
    """
    min over the (S, T) family of g(S, T, d, n) minus the left-hand side of the set inequality for S. Since
    sum_{i not in S} min(d_i, |S|) <= sum_T d_i + |S| |(S u T)^c|, the gap is never negative.
    """
    d = np.asarray(d, dtype=float)
    s_mask, t_mask = p_family_masks(n)
    s, t = s_mask.sum(axis=1), t_mask.sum(axis=1)
    g = s * (n - 1 - t) - s_mask @ d + t_mask @ d
    return float((g - _cds_lhs(s_mask, d)).min())


class MonteCarloReport:
    """
    Empirical existence frequency of the beta MLE.

    :ivar exist_rate: fraction of replicates with an existing MLE
    :ivar nonexist_rate: 1 - exist_rate
    :ivar stderr: binomial standard error of the rates
    :ivar theorem_bound: existence probability floor 1 - 2 / n^(2c - 1), None when c <= 1/2
    :ivar corollary_bound: floor of the corollary, None when c is out of its range
    :ivar verdicts: per-replicate verdicts
    """
    def __init__(self, n: int, N: int, replicates: int, exist_rate: float, theorem_bound: Optional[float],
                 corollary_bound: Optional[float], verdicts: List[bool], seed: int):
        self.n = n
        self.N = N
        self.replicates = replicates
        self.exist_rate = exist_rate
        self.nonexist_rate = 1. - exist_rate
        self.stderr = math.sqrt(exist_rate * (1. - exist_rate) / replicates)
        self.theorem_bound = theorem_bound
        self.corollary_bound = corollary_bound
        self.verdicts = verdicts
        self.seed = seed

    def to_dict(self) -> dict:
        out = vars(self).copy()
        del out['verdicts']
        return out

    def verdicts_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'replicate': range(self.replicates), 'exists': self.verdicts})


def _replicate(args) -> bool:
    beta, trials, seed, r, mode = args
    table = generate_graph(BetaParams(beta), trials, seed=[seed, r])
    return beta_check(table, method='lp', mode=mode, with_facial_set=False).exists


def existence_bounds(n: int, N: int, c: float) -> Tuple[Optional[float], Optional[float]]:
    theorem = 1 - 2 / n ** (2 * c - 1) if c > 0.5 else None
    if N == 1:
        corollary = theorem
    else:
        corollary = 1 - 2 / n ** (2 * c - 2) if c > 1 else None
    return theorem, corollary


def mc_existence_probability(params: BetaParams, N: int = 1, replicates: int = 2000, seed: int = 0,
                             c: float = 0.6, threads: int = 1, mode: str = 'auto',
                             progress: bool = False) -> MonteCarloReport:
    """
    Samples graphs from the beta model and decides existence of the MLE on each with the Cayley LP.

    Replicate r draws from the stream seeded by (seed, r), so results do not depend on ``threads``.

    :param params: natural parameters, n = len(beta)
    :param N: trials per pair
    :param replicates: number of samples (>= 100)
    :param seed: base seed
    :param c: exponent constant of the reported bounds
    :param threads: worker processes
    :param mode: LP arithmetic
    :param progress: show a progress bar
    """
    if replicates < 100:
        raise ParameterError('At least 100 replicates are required, got {}'.format(replicates))
    n = params.n
    jobs = [(params.beta.tolist(), N, seed, r, mode) for r in range(replicates)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            verdicts = list(tqdm(pool.map(_replicate, jobs, chunksize=max(1, replicates // (4 * threads))),
                                 total=replicates, disable=not progress))
    else:
        verdicts = [_replicate(job) for job in tqdm(jobs, disable=not progress)]
    rate = sum(verdicts) / replicates
    theorem, corollary = existence_bounds(n, N, c)
    logger.info('existence rate %.4f over %d replicates (n=%d, N=%d)', rate, replicates, n, N)
    return MonteCarloReport(n, N, replicates, rate, theorem, corollary, verdicts, seed)
