#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import itertools
import logging
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.special import logsumexp

from .config import CONST
from .design import DesignMatrix, bt_design, beta_design, p1_design, poisson_design, rasch_design
from .errors import ConsistencyError, NumericalFailure, ParameterError, SizeError
from .geometry import FacialSet, PolyhedralDescription, design_facets, facial_set, interior_lp_check, \
    sampling_facets
from .tables import DYAD_STATES, DirectedCountTable, DyadTable, lifted_cells, node_pairs, read_integer_matrix

logger = logging.getLogger(__name__)


# --------------------------------------------------------------------------------------------------------------
# Rasch

class RaschTable:
    """
    Binary responses of k subjects to l items. In the bipartite graph subject i is node i and item j is node k + j.

    :ivar k: number of subjects
    :vartype k: int
    :ivar l: number of items
    :vartype l: int
    :ivar responses: k x l 0/1 matrix
    :vartype responses: np.ndarray
    """
    def __init__(self, responses: np.ndarray):
        self.responses = np.asarray(responses, dtype=np.int64)
        if self.responses.ndim != 2:
            raise ConsistencyError('Rasch responses must be a matrix')
        if not np.all((self.responses == 0) | (self.responses == 1)):
            raise ConsistencyError('Rasch responses must be 0/1')
        self.k, self.l = self.responses.shape

    def lifted(self) -> np.ndarray:
        """Lifted table in the column order of :func:`degseq.design.rasch_design`."""
        x = np.empty(2 * self.k * self.l, dtype=np.int64)
        x[0::2] = self.responses.ravel()
        x[1::2] = 1 - self.responses.ravel()
        return x

    def margins(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.responses.sum(axis=1), self.responses.sum(axis=0)


def parse_rasch(source) -> RaschTable:
    """Reads a k x l CSV of 0/1 responses."""
    return RaschTable(read_integer_matrix(source))


class RaschCertificate:
    """
    Sets with x_ij = 0 on A x C and x_ij = 1 on B x D, where I = A u B and J = C u D.
    Subjects and items are both numbered from 1.
    """
    def __init__(self, A: Sequence[int], B: Sequence[int], C: Sequence[int], D: Sequence[int]):
        self.A, self.B, self.C, self.D = (frozenset(s) for s in (A, B, C, D))

    def to_dict(self) -> dict:
        return {name: sorted(getattr(self, name)) for name in 'ABCD'}

    def __repr__(self):
        return 'RaschCertificate({})'.format(self.to_dict())


class RaschVerdict:
    def __init__(self, exists: bool, certificate: Optional[RaschCertificate], facial_set: Optional[FacialSet],
                 witness=None):
        self.exists = exists
        self.certificate = certificate
        self.facial_set = facial_set
        self.witness = witness

    def to_dict(self) -> dict:
        out = {'exists': self.exists}
        if self.certificate is not None:
            out['certificate'] = self.certificate.to_dict()
        if self.facial_set is not None:
            out['co_facial'] = [list(c) for c in self.facial_set.cofacial]
        return out


def haberman_certificate(t: RaschTable, cap: int = CONST.RASCH_CAP) -> Optional[RaschCertificate]:
    """
    Searches partitions I = A u B, J = C u D with x = 0 on A x C, x = 1 on B x D and A x C u B x D nonempty.

    For fixed B the admissible C lie between the items not all-1 on B and the items all-0 on A, so only the
    2^k subject partitions are enumerated, smallest A first.
    """
    k, l = t.k, t.l
    if k > cap or l > cap:
        raise SizeError('Combinatorial Rasch search is capped at k, l <= {}'.format(cap))
    x = t.responses
    items = frozenset(range(l))
    for size in list(range(1, k + 1)) + [0]:
        for A in itertools.combinations(range(k), size):
            B = [i for i in range(k) if i not in A]
            zeros = frozenset(j for j in range(l) if np.all(x[list(A), j] == 0))
            ones = frozenset(j for j in range(l) if np.all(x[B, j] == 1))
            if not (items - zeros) <= ones:
                continue
            if A and zeros:
                C = zeros
            elif B and ones:
                C = items - ones
            else:
                continue
            D = items - C
            return RaschCertificate([i + 1 for i in A], [i + 1 for i in B], [j + 1 for j in C], [j + 1 for j in D])
    return None


def rasch_existence(t: RaschTable, mode: str = 'exact', cap: int = CONST.RASCH_CAP) -> RaschVerdict:
    """
    Existence of the Rasch MLE decided twice: by the combinatorial search of :func:`haberman_certificate` and by
    the interior LP on the Cayley cone of :func:`degseq.design.rasch_design`. The two verdicts must agree.

    :param t: response table, k, l >= 2
    :param mode: LP arithmetic
    :param cap: largest k and l of the combinatorial search
    :return: ``RaschVerdict`` with the blocking sets and the facial set when the MLE does not exist
    """
    if t.k < 2 or t.l < 2:
        raise ParameterError('Rasch tables need k, l >= 2')
    design = rasch_design(t.k, t.l)
    statistic = design.apply(t.lifted())
    verdict = interior_lp_check(statistic, design, mode=mode)
    certificate = haberman_certificate(t, cap)
    if verdict.interior != (certificate is None):
        raise NumericalFailure('LP and combinatorial Rasch verdicts disagree (LP interior: {})'
                               .format(verdict.interior))
    if verdict.interior:
        return RaschVerdict(True, None, None, verdict.witness)
    fs = facial_set(statistic, design, mode=mode, representation=verdict.representation)
    return RaschVerdict(False, certificate, fs, verdict.witness)


def poisson_rasch_existence(counts: np.ndarray) -> Tuple[bool, Dict[str, List[int]]]:
    """
    Poisson counts on a k x l table with log m_ij = a_i + b_j: the MLE exists iff every row and column margin
    is positive. Returns the verdict and the 1-based indices of the empty rows and columns.
    """
    counts = np.asarray(counts)
    rows = [i + 1 for i in np.nonzero(counts.sum(axis=1) == 0)[0]]
    cols = [j + 1 for j in np.nonzero(counts.sum(axis=0) == 0)[0]]
    return not rows and not cols, {'rows': rows, 'columns': cols}


# --------------------------------------------------------------------------------------------------------------
# Bradley-Terry

class BTVerdict:
    """Strong connectivity verdict with a subset of objects that never loses to the others."""
    def __init__(self, exists: bool, never_loses: Optional[FrozenSet[int]] = None):
        self.exists = exists
        self.never_loses = never_loses

    def to_dict(self) -> dict:
        out = {'exists': self.exists}
        if self.never_loses is not None:
            out['never_loses'] = sorted(self.never_loses)
        return out


def wins_graph(t: DirectedCountTable) -> nx.DiGraph:
    """Directed graph with an edge i -> j whenever i beat j at least once."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, t.n + 1))
    rows, cols = np.nonzero(t.counts)
    graph.add_edges_from((int(i) + 1, int(j) + 1) for i, j in zip(rows, cols))
    return graph


def bt_existence(t: DirectedCountTable) -> BTVerdict:
    """
    The Bradley-Terry MLE exists iff the wins graph is strongly connected. Otherwise a source component of the
    condensation is a nonempty proper subset with no incoming wins.
    """
    graph = wins_graph(t)
    if nx.is_strongly_connected(graph):
        return BTVerdict(True)
    condensed = nx.condensation(graph)
    sources = [frozenset(condensed.nodes[c]['members']) for c in condensed.nodes if condensed.in_degree(c) == 0]
    return BTVerdict(False, min(sources, key=lambda s: sorted(s)))


def bt_lp_existence(t: DirectedCountTable, mode: str = 'exact') -> bool:
    """Interior LP on the Bradley-Terry cone, restricted to the pairs that were compared."""
    design = bt_design(t.n)
    n_pairs = len(node_pairs(t.n))
    compared = [k for k, (i, j) in enumerate(node_pairs(t.n)) if t.comparisons()[i - 1, j - 1] > 0]
    rows = compared + list(range(n_pairs, design.rows))
    cols = [c for k in compared for c in (2 * k, 2 * k + 1)]
    restricted = DesignMatrix(design.entries[np.ix_(rows, cols)], [design.row_labels[r] for r in rows],
                              [design.col_labels[c] for c in cols], name='bt')
    statistic = restricted.apply(t.vector()[cols])
    return interior_lp_check(statistic, restricted, mode=mode).interior


def bt_facet_count(n: int) -> int:
    """Number of facets of the Bradley-Terry polytope, 2^n - 2."""
    if n < 2:
        raise SizeError('n must be at least 2, got {}'.format(n))
    return 2 ** n - 2


# --------------------------------------------------------------------------------------------------------------
# Poisson

def poisson_facial_catalog(n: int, directed: bool = True) -> List[FrozenSet[Tuple[int, int]]]:
    """
    Co-facial cell sets of the facets of the Poisson cone.

    Directed (n >= 4, 3n facets): the cells leaving i, the cells entering j, and for every k the cells not
    touching k. Undirected (n >= 4, 2n facets): the pairs incident to k and the pairs not involving k; for n = 3
    the cone is simplicial and only the n single pairs remain.
    """
    nodes = range(1, n + 1)
    if directed:
        if n < 4:
            raise ParameterError('The directed Poisson catalog needs n >= 4')
        cells = lifted_cells(n)
        catalog = [frozenset(c for c in cells if c[0] == i) for i in nodes]
        catalog += [frozenset(c for c in cells if c[1] == j) for j in nodes]
        catalog += [frozenset(c for c in cells if k not in c) for k in nodes]
        return catalog
    if n < 3:
        raise ParameterError('The undirected Poisson catalog needs n >= 3')
    pairs = node_pairs(n)
    second = [frozenset(p for p in pairs if k not in p) for k in nodes]
    if n == 3:
        return second
    return [frozenset(p for p in pairs if k in p) for k in nodes] + second


def poisson_existence(t: DirectedCountTable, directed: bool = True, mode: str = 'exact') -> Tuple[bool, FacialSet]:
    """
    Interior LP on the Poisson cone. Undirected tables are read from the upper triangle.

    :return: the verdict and the facial set (all cells when the MLE exists)
    """
    if directed:
        design, x = poisson_design(t.n), t.vector()
    else:
        design = beta_design(t.n)
        x = np.array([t.counts[i - 1, j - 1] for i, j in node_pairs(t.n)], dtype=np.int64)
    statistic = design.apply(x)
    verdict = interior_lp_check(statistic, design, mode=mode)
    if verdict.interior:
        return True, FacialSet(frozenset(design.col_labels), list(), [0] * design.rows, False)
    return False, facial_set(statistic, design, mode=mode, representation=verdict.representation)


class PoissonBound:
    """
    Upper bounds on the probability that the Poisson MLE does not exist.

    :ivar three_term: union bound over the facets, capped at 1
    :ivar simplified: k n exp(-(n-1) m*), capped at 1 (k = 3 directed, 2 undirected)
    :ivar simplified_valid: the simplified form dominates the three-term form for this n
    """
    def __init__(self, three_term: float, simplified: float, simplified_valid: bool):
        self.three_term = three_term
        self.simplified = simplified
        self.simplified_valid = simplified_valid

    def to_dict(self) -> dict:
        return vars(self).copy()


def poisson_existence_bound(means: np.ndarray, directed: bool = True) -> PoissonBound:
    """
    Bounds P(MLE does not exist) for independent Poisson counts with the given means (n x n, diagonal ignored).

    Directed: sum_i exp(-sum_j m_ij) + sum_j exp(-sum_i m_ij) + sum_k exp(-sum_{i,j != k} m_ij), and
    3n exp(-(n-1) m*) with m* the smallest mean, reported as valid for n >= 7. Undirected: the degree and
    second-kind terms over the upper triangle, and 2n exp(-(n-1) m*) valid for n >= 4.
    """
    means = np.array(means, dtype=float)
    n = means.shape[0]
    np.fill_diagonal(means, 0.)
    if directed:
        off = ~np.eye(n, dtype=bool)
        if np.any(means[off] <= 0):
            raise ParameterError('Poisson means must be positive')
        total = means.sum()
        rows, cols = means.sum(axis=1), means.sum(axis=0)
        second = total - rows - cols
        three_term = np.exp(-rows).sum() + np.exp(-cols).sum() + np.exp(-second).sum()
        m_star = means[off].min()
        simplified = 3 * n * np.exp(-(n - 1) * m_star)
        valid = n >= 7
    else:
        upper = np.triu(means, k=1)
        sym = upper + upper.T
        if np.any(upper[np.triu_indices(n, k=1)] <= 0):
            raise ParameterError('Poisson means must be positive')
        degrees = sym.sum(axis=1)
        second = upper.sum() - degrees
        three_term = np.exp(-degrees).sum() + np.exp(-second).sum()
        m_star = upper[np.triu_indices(n, k=1)].min()
        simplified = 2 * n * np.exp(-(n - 1) * m_star)
        valid = n >= 4
    return PoissonBound(float(min(1., three_term)), float(min(1., simplified)), valid)


# --------------------------------------------------------------------------------------------------------------
# p1

class P1Params:
    """
    Parameters of the p1 model: density theta, sender effects alpha, receiver effects beta and the reciprocity
    effects rho (constant) and rho_i (edge-dependent, the dyad effect being rho + rho_i + rho_j).
    """
    def __init__(self, theta: float, alpha: Sequence[float], beta: Sequence[float], rho: float = 0.,
                 rho_node: Optional[Sequence[float]] = None, variant: str = 'zero'):
        self.theta = float(theta)
        self.alpha = np.asarray(alpha, dtype=float)
        self.beta = np.asarray(beta, dtype=float)
        self.rho = float(rho)
        self.rho_node = np.zeros(len(self.alpha)) if rho_node is None else np.asarray(rho_node, dtype=float)
        self.variant = variant
        assert len(self.alpha) == len(self.beta) == len(self.rho_node), 'alpha, beta and rho_i differ in length'
        assert variant in ('zero', 'constant', 'edge-dependent'), 'Unknown p1 variant {}'.format(variant)

    @property
    def n(self) -> int:
        return len(self.alpha)

    def reciprocity(self, i: int, j: int) -> float:
        if self.variant == 'zero':
            return 0.
        if self.variant == 'constant':
            return self.rho
        return self.rho + self.rho_node[i - 1] + self.rho_node[j - 1]


class DyadProbabilities:
    """Probabilities of the states (0,0), (1,0), (0,1), (1,1) of every dyad (i, j), i < j."""
    def __init__(self, n: int, probabilities: Dict[Tuple[int, int], np.ndarray]):
        self.n = n
        self.probabilities = probabilities
        for pair, p in probabilities.items():
            assert np.all(p >= 0) and abs(p.sum() - 1.) < 1e-9, 'Invalid distribution for dyad {}'.format(pair)

    def __getitem__(self, pair: Tuple[int, int]) -> np.ndarray:
        return self.probabilities[pair]

    def vector(self) -> np.ndarray:
        """Probabilities in the column order of :func:`degseq.design.p1_design`."""
        return np.concatenate([self.probabilities[pair] for pair in node_pairs(self.n)])


def p1_dyad_probabilities(params: P1Params) -> DyadProbabilities:
    """
    Exponentiates the log-probabilities 0, theta + alpha_i + beta_j, theta + alpha_j + beta_i and
    2 theta + alpha_i + beta_j + alpha_j + beta_i + rho_ij of every dyad; lambda_ij is the normalizing constant.
    """
    a, b = params.alpha, params.beta
    probabilities = dict()
    for i, j in node_pairs(params.n):
        forward = params.theta + a[i - 1] + b[j - 1]
        backward = params.theta + a[j - 1] + b[i - 1]
        logits = np.array([0., forward, backward, forward + backward + params.reciprocity(i, j)])
        probabilities[(i, j)] = np.exp(logits - logsumexp(logits))
    return DyadProbabilities(params.n, probabilities)


def generate_dyads(probabilities: DyadProbabilities, seed: int = 0) -> DyadTable:
    """Draws one state per dyad."""
    rng = np.random.default_rng(seed)
    states = {pair: DYAD_STATES[rng.choice(4, p=probabilities[pair])] for pair in node_pairs(probabilities.n)}
    return DyadTable(probabilities.n, states)


class P1Verdict:
    def __init__(self, exists: bool, facial_set: FacialSet, witness=None, variant: str = 'zero'):
        self.exists = exists
        self.facial_set = facial_set
        self.witness = witness
        self.variant = variant

    def to_dict(self) -> dict:
        out = {'exists': self.exists, 'variant': self.variant}
        if self.facial_set is not None and self.facial_set.is_proper:
            out['co_facial'] = [list(c) for c in self.facial_set.cofacial]
        return out


def p1_existence(t: DyadTable, variant: str = 'zero', mode: str = 'exact', with_facial_set: bool = True,
                 design: DesignMatrix = None) -> P1Verdict:
    """
    Existence of the p1 MLE: interior LP on the cone of the p1 design, whose lambda rows play the role of the
    product-multinomial sampling constraints (one per dyad).
    """
    if t.n < 3:
        raise ParameterError('p1 needs n >= 3')
    design = design if design is not None else p1_design(t.n, variant)
    statistic = design.apply(t.vector())
    verdict = interior_lp_check(statistic, design, mode=mode)
    if verdict.interior:
        return P1Verdict(True, FacialSet(frozenset(design.col_labels), list(), [0] * design.rows, False),
                         verdict.witness, variant)
    fs = facial_set(statistic, design, mode=mode, representation=verdict.representation) if with_facial_set else None
    return P1Verdict(False, fs, verdict.witness, variant)


class ConeSummary:
    """Rank, facets and sampling facets of a design cone."""
    def __init__(self, design: DesignMatrix, description: PolyhedralDescription, sampling: List[int]):
        self.design = design
        self.description = description
        self.sampling = sampling

    @property
    def rank(self) -> int:
        return self.description.dim

    @property
    def n_facets(self) -> int:
        return self.description.n_facets

    @property
    def n_model_facets(self) -> int:
        return self.n_facets - len(self.sampling)

    def to_dict(self) -> dict:
        return {'model': self.design.name, 'rank': self.rank, 'facet_count': self.n_facets,
                'sampling_facets': len(self.sampling), 'model_facets': self.n_model_facets}


def describe_cone(design: DesignMatrix) -> ConeSummary:
    description = design_facets(design)
    return ConeSummary(design, description, sampling_facets(description, design))


def describe_p1_cone(n: int, variant: str = 'zero') -> ConeSummary:
    """Facets of the p1 cone with the sampling facets classified by the shape of their facial set."""
    return describe_cone(p1_design(n, variant))

