#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import json
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence

import numpy as np
from tqdm import tqdm

from .design import p1_design
from .geometry import beta_check, interior_lp_check, mp_boundary_check
from .models import RaschTable, bt_existence, bt_lp_existence, rasch_existence
from .tables import DYAD_STATES, DirectedCountTable, DyadTable, EdgeCountTable, degree_stats, node_pairs

logger = logging.getLogger(__name__)


class SurveyResult:
    """
    Counts of an exhaustive enumeration.

    :ivar model: surveyed model
    :ivar size: problem size, e.g. {'n': 4} or {'k': 2, 'l': 3}
    :ivar total: number of enumerated tables
    :ivar exists: number of tables with an existing MLE
    :ivar agreement: the two decision procedures agreed on every table (None with a single procedure)
    :ivar details: model specific counters
    """
    def __init__(self, model: str, size: dict, total: int, exists: int, agreement=None, details: dict = None):
        self.model = model
        self.size = size
        self.total = total
        self.exists = exists
        self.agreement = agreement
        self.details = details or dict()

    def to_dict(self) -> dict:
        out = {'model': self.model, 'total': self.total, 'exists': self.exists, 'agreement': self.agreement}
        out.update(self.size)
        out.update(self.details)
        return out


def _map(worker: Callable, items: Sequence, threads: int, progress: bool, desc: str) -> list:
    """Ordered map, over a process pool when threads > 1."""
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunksize = max(1, len(items) // (8 * threads))
            return list(tqdm(pool.map(worker, items, chunksize=chunksize), total=len(items), desc=desc,
                             disable=not progress))
    return [worker(item) for item in tqdm(items, desc=desc, disable=not progress)]


def _bits(code: int, length: int) -> List[int]:
    return [(code >> k) & 1 for k in range(length)]


def graph_from_code(n: int, code: int) -> EdgeCountTable:
    """Simple graph whose k-th pair (in :func:`node_pairs` order) is an edge iff bit k of ``code`` is set."""
    return EdgeCountTable(n, _bits(code, n * (n - 1) // 2), 1)


def tournament_from_code(n: int, code: int) -> DirectedCountTable:
    """Tournament where bit k set means the smaller node of the k-th pair wins."""
    counts = dict()
    for bit, (i, j) in zip(_bits(code, n * (n - 1) // 2), node_pairs(n)):
        counts[(i, j) if bit else (j, i)] = 1
    return DirectedCountTable(n, counts)


def dyads_from_code(n: int, code: int) -> DyadTable:
    """p1 network whose k-th dyad is in state ``DYAD_STATES[digit k of code in base 4]``."""
    states = dict()
    for pair in node_pairs(n):
        code, digit = divmod(code, 4)
        states[pair] = DYAD_STATES[digit]
    return DyadTable(n, states)


def _beta_worker(args):
    n, code, mode = args
    graph = graph_from_code(n, code)
    facets = mp_boundary_check(degree_stats(graph), n)
    lp = beta_check(graph, method='lp', mode=mode, with_facial_set=False).exists
    tight = [f.to_dict() for f in facets.tight]
    # a graph with a node of degree 0 or n-1 is reported by its degree facets
    patterns = [f for f in tight if f['kind'] in ('lower', 'upper')] or tight
    return lp, facets.interior, tight, patterns


def survey_beta(n: int, mode: str = 'exact', threads: int = 1, progress: bool = False) -> SurveyResult:
    """
    Decides existence for every simple graph on n nodes with both the facet inequalities and the Cayley LP, and
    collects the facets that are tight for at least one graph. Co-facial patterns count a graph with a node of
    degree 0 or n-1 by its degree facets only, the pattern of any other tight facet being equivalent to a degenerate
    node in the 0/1 case.
    """
    codes = range(2 ** (n * (n - 1) // 2))
    results = _map(_beta_worker, [(n, code, mode) for code in codes], threads, progress, 'graphs')
    lp_count = sum(r[0] for r in results)
    disagreements = [code for code, r in zip(codes, results) if r[0] != r[1]]
    tight = {json.dumps(f, sort_keys=True) for r in results for f in r[2]}
    patterns = {json.dumps(f, sort_keys=True) for r in results for f in r[3]}
    if disagreements:
        logger.warning('facet and LP verdicts disagree on %d graphs', len(disagreements))
    return SurveyResult('beta', {'n': n}, len(results), lp_count, not disagreements,
                        {'exists_facets': sum(r[1] for r in results), 'tight_facets': len(tight),
                         'cofacial_patterns': len(patterns), 'disagreements': disagreements})


def _bt_worker(args):
    n, code, mode = args
    tournament = tournament_from_code(n, code)
    return bt_existence(tournament).exists, bt_lp_existence(tournament, mode)


def survey_bt(n: int, mode: str = 'exact', threads: int = 1, progress: bool = False) -> SurveyResult:
    """Strong connectivity against the LP on every tournament on n nodes."""
    results = _map(_bt_worker, [(n, code, mode) for code in range(2 ** (n * (n - 1) // 2))], threads, progress,
                   'tournaments')
    return SurveyResult('bt', {'n': n}, len(results), sum(r[0] for r in results),
                        all(a == b for a, b in results), {'exists_lp': sum(r[1] for r in results)})


def _rasch_worker(args):
    k, l, code, mode = args
    table = RaschTable(np.array(_bits(code, k * l)).reshape(k, l))
    return rasch_existence(table, mode).exists


def survey_rasch(k: int, l: int, mode: str = 'exact', threads: int = 1, progress: bool = False) -> SurveyResult:
    """Every k x l response table; :func:`rasch_existence` checks that its two procedures agree."""
    results = _map(_rasch_worker, [(k, l, code, mode) for code in range(2 ** (k * l))], threads, progress,
                   'tables')
    return SurveyResult('rasch', {'k': k, 'l': l}, len(results), sum(results), True)


def _p1_worker(args):
    statistic, n, variant, mode = args
    design = p1_design(n, variant)
    return interior_lp_check(list(statistic), design, mode=mode).interior


def survey_p1(n: int, variant: str = 'zero', mode: str = 'auto', threads: int = 1,
              progress: bool = False) -> SurveyResult:
    """
    Every p1 network on n nodes. Networks are grouped by sufficient statistic, one LP is solved per distinct
    statistic and the verdicts are weighted by multiplicity.
    """
    design = p1_design(n, variant)
    n_networks = 4 ** len(node_pairs(n))
    multiplicity = Counter(tuple(int(v) for v in design.apply(dyads_from_code(n, code).vector()))
                           for code in range(n_networks))
    statistics = sorted(multiplicity)
    logger.info('p1 survey n=%d (%s): %d networks, %d distinct statistics', n, variant, n_networks, len(statistics))
    verdicts = _map(_p1_worker, [(s, n, variant, mode) for s in statistics], threads, progress, 'statistics')
    exists = sum(multiplicity[s] for s, v in zip(statistics, verdicts) if v)
    return SurveyResult('p1-{}'.format(variant), {'n': n}, n_networks, exists, None,
                        {'distinct_statistics': len(statistics),
                         'distinct_existing': sum(1 for v in verdicts if v)})
