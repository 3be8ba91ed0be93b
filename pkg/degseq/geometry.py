#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import itertools
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .config import CONST
from .design import DesignMatrix, cayley_design
from .errors import LpFailure, NumericalFailure, SizeError
from .lp import LinearProgram, exact_rank, independent_rows, solve_lp
from .tables import DegreeStats, EdgeCountTable, degree_stats, lifted_cells, node_pairs

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


class FacetInequality:
    """
    A facet inequality of the polytope of degree sequences P_n.

    kinds:
        - 'lower': y_i >= 0
        - 'upper': y_i <= n - 1
        - 'ST': g(S, T, y, n) >= 0 for (S, T) in the family of :func:`p_family`
        - 'edge': 0 <= p_ij <= 1 (n <= 3, where P_n is a parallelepiped); ``bound`` tells which side is tight

    :ivar kind: one of 'lower', 'upper', 'ST', 'edge'
    :vartype kind: str
    :ivar i: node of a degree facet
    :vartype i: int
    :ivar S: node set S of an 'ST' facet
    :vartype S: FrozenSet[int]
    :ivar T: node set T of an 'ST' facet
    :vartype T: FrozenSet[int]
    :ivar pair: node pair of an 'edge' facet
    :vartype pair: Tuple[int, int]
    :ivar bound: 0 or 1 for an 'edge' facet
    :vartype bound: int
    """
    def __init__(self, kind: str, i: int = None, S: Sequence[int] = (), T: Sequence[int] = (),
                 pair: Cell = None, bound: int = None):
        assert kind in ['lower', 'upper', 'ST', 'edge'], 'Unknown facet kind {}'.format(kind)
        self.kind = kind
        self.i = i
        self.S = frozenset(int(v) for v in S)
        self.T = frozenset(int(v) for v in T)
        self.pair = pair
        self.bound = bound

    def cofacial_cells(self, n: int) -> FrozenSet[Cell]:
        """Lifted cells forced to zero on the facet (p_ij = 0 zeroes (i,j), p_ij = 1 zeroes (j,i))."""
        zero, one = set(), set()
        if self.kind == 'lower':
            zero = {tuple(sorted((self.i, j))) for j in range(1, n + 1) if j != self.i}
        elif self.kind == 'upper':
            one = {tuple(sorted((self.i, j))) for j in range(1, n + 1) if j != self.i}
        elif self.kind == 'edge':
            (zero if self.bound == 0 else one).add(self.pair)
        else:
            rest = set(range(1, n + 1)) - self.S - self.T
            one = {tuple(sorted(p)) for p in itertools.combinations(self.S, 2)}
            one |= {tuple(sorted((a, b))) for a in self.S for b in rest}
            zero = {tuple(sorted(p)) for p in itertools.combinations(self.T, 2)}
            zero |= {tuple(sorted((a, b))) for a in self.T for b in rest}
        return frozenset(zero | {(j, i) for i, j in one})

    def to_dict(self) -> dict:
        if self.kind == 'ST':
            return {'kind': 'ST', 'S': sorted(self.S), 'T': sorted(self.T)}
        if self.kind == 'edge':
            return {'kind': 'edge', 'pair': list(self.pair), 'bound': self.bound}
        return {'kind': self.kind, 'i': self.i}

    def __eq__(self, other):
        return isinstance(other, FacetInequality) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash((self.kind, self.i, self.S, self.T, self.pair, self.bound))

    def __repr__(self):
        return 'FacetInequality({})'.format(self.to_dict())


class BoundaryVerdict:
    """Result of :func:`mp_boundary_check`: status is 'interior', 'boundary' or 'outside'."""
    def __init__(self, status: str, tight: List[FacetInequality], violated: List[FacetInequality] = None):
        self.status = status
        self.tight = tight
        self.violated = violated or list()

    @property
    def interior(self) -> bool:
        return self.status == 'interior'

    def to_dict(self) -> dict:
        return {'status': self.status, 'tight': [f.to_dict() for f in self.tight],
                'violated': [f.to_dict() for f in self.violated]}


class InteriorVerdict:
    """
    Result of :func:`interior_lp_check`.

    :ivar interior: whether t lies in the relative interior of the cone
    :ivar witness: optimal s* of max s s.t. C x' = t, x' >= s
    :ivar representation: the optimal x'
    :ivar mode: arithmetic that produced the decision
    :ivar certified: the decision was taken in exact arithmetic
    """
    def __init__(self, interior: bool, witness, representation: list, mode: str, certified: bool):
        self.interior = interior
        self.witness = witness
        self.representation = representation
        self.mode = mode
        self.certified = certified


class FacialSet:
    """
    Facial set of the minimal face of a cone containing a sufficient statistic t.

    :ivar cells: column labels of the facial set
    :vartype cells: FrozenSet
    :ivar cofacial: column labels outside the facial set, in column order
    :vartype cofacial: list
    :ivar certificate: vector y* with <y*, c> = 0 on the cells and < 0 on every other column, y*.t = 0
    :vartype certificate: list
    :ivar is_proper: the face is a proper face (t on the boundary)
    :vartype is_proper: bool
    """
    def __init__(self, cells: FrozenSet, cofacial: list, certificate: list, is_proper: bool):
        self.cells = cells
        self.cofacial = cofacial
        self.certificate = certificate
        self.is_proper = is_proper

    def to_dict(self) -> dict:
        return {'cells': sorted([list(c) for c in self.cells]), 'co_facial': [list(c) for c in self.cofacial],
                'certificate': [str(v) if isinstance(v, Fraction) else v for v in self.certificate],
                'is_proper': self.is_proper}


class SplitCertificate:
    """Sets S and T of a split certificate, together with the nodes of degree 0 or n-1."""
    def __init__(self, S: FrozenSet[int], T: FrozenSet[int], degenerate: List[int]):
        self.S = S
        self.T = T
        self.degenerate = degenerate

    def __repr__(self):
        return 'SplitCertificate(S={}, T={}, degenerate={})'.format(sorted(self.S), sorted(self.T), self.degenerate)


class PolyhedralDescription:
    """
    Generators and facet inequalities normal . y >= offset of a cone or a polytope.

    :ivar generators: integer generators (vertices or rays)
    :ivar facets: (normal, offset) pairs
    :ivar dim: dimension of the cone (rank of the generators) or affine dimension of the polytope
    :ivar incidence: for each facet the indices of the generators lying on it
    """
    def __init__(self, generators: List[tuple], facets: List[Tuple[tuple, int]], dim: int,
                 incidence: List[FrozenSet[int]] = None):
        self.generators = generators
        self.facets = facets
        self.dim = dim
        self.incidence = incidence or list()

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    def satisfies_all(self) -> bool:
        return all(sum(a * g for a, g in zip(normal, gen)) >= offset
                   for normal, offset in self.facets for gen in self.generators)


def g_value(S: Sequence[int], T: Sequence[int], y: Sequence, n: int):
    """
    g(S, T, y, n) = |S| (n - 1 - |T|) - sum_{i in S} y_i + sum_{i in T} y_i, nodes 1-based.

    Exact when ``y`` holds integers or fractions.
    """
    S, T = set(S), set(T)
    assert S and T and not S & T, 'S and T must be disjoint and nonempty'
    return len(S) * (n - 1 - len(T)) - sum(y[i - 1] for i in S) + sum(y[i - 1] for i in T)


@lru_cache(maxsize=16)
def p_family_masks(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Boolean masks (S, T) over all ternary labelings of the nodes, filtered to |S u T| in {2..n-3, n}."""
    codes = np.arange(3 ** n, dtype=np.int64)
    labels = ((codes[:, None] // (3 ** np.arange(n, dtype=np.int64))[None, :]) % 3).astype(np.int8)
    s_mask, t_mask = labels == 1, labels == 2
    s, t = s_mask.sum(axis=1), t_mask.sum(axis=1)
    size = s + t
    keep = (s >= 1) & (t >= 1) & (((size >= 2) & (size <= n - 3)) | (size == n))
    return s_mask[keep], t_mask[keep]


def p_family(n: int) -> List[FacetInequality]:
    """All 'ST' facet inequalities of P_n, n >= 4."""
    if n < 4:
        raise SizeError('The (S, T) family is defined for n >= 4, got {}'.format(n))
    if n > CONST.EXHAUSTIVE_CAP:
        raise SizeError('Enumerating the (S, T) family is capped at n = {}'.format(CONST.EXHAUSTIVE_CAP))
    s_mask, t_mask = p_family_masks(n)
    return [FacetInequality('ST', S=np.nonzero(s)[0] + 1, T=np.nonzero(t)[0] + 1) for s, t in zip(s_mask, t_mask)]


def facet_catalog(n: int) -> List[FacetInequality]:
    """Every facet inequality of P_n for n >= 4: 2n degree facets followed by the (S, T) family."""
    degree = [FacetInequality('lower', i=i) for i in range(1, n + 1)]
    degree += [FacetInequality('upper', i=i) for i in range(1, n + 1)]
    return degree + p_family(n)


def _small_n_verdict(y: Sequence, n: int) -> BoundaryVerdict:
    # n <= 3: P_n is the image of the unit cube under the invertible incidence map
    if n == 2:
        p = {(1, 2): y[0]}
    else:
        p = {(1, 2): (y[0] + y[1] - y[2]) / 2, (1, 3): (y[0] + y[2] - y[1]) / 2, (2, 3): (y[1] + y[2] - y[0]) / 2}
    tight, violated = list(), list()
    for pair, value in p.items():
        if value == 0 or value == 1:
            tight.append(FacetInequality('edge', pair=pair, bound=int(value)))
        elif value < 0 or value > 1:
            violated.append(FacetInequality('edge', pair=pair, bound=0 if value < 0 else 1))
    status = 'outside' if violated else ('boundary' if tight else 'interior')
    return BoundaryVerdict(status, tight, violated)


def mp_boundary_check(stats: DegreeStats, n: int = None, cap: int = CONST.EXHAUSTIVE_CAP,
                      tol: float = 1e-9) -> BoundaryVerdict:
    """
    Decides whether the rescaled degree sequence lies in the interior of P_n by evaluating every facet
    inequality: the 2n degree bounds and g(S, T, y, n) >= 0 over the (S, T) family.

    The family has about 3^n members, so exhaustive evaluation is capped at n = 12. For n <= 3 the
    polytope is a parallelepiped and the decision is read off the edge probabilities p~ (every graph is a vertex).
    Exact statistics are compared exactly after scaling by their common denominator.

    :param stats: degree statistics of the table
    :param n: number of nodes (defaults to the length of the statistics)
    :param cap: largest admissible n
    :param tol: tie tolerance for floating point statistics
    :return: ``BoundaryVerdict`` listing every tight (and violated) inequality
    """
    n = n or stats.n
    if stats.is_exact:
        y, den = stats.scaled_integers()
        eps = 0
    else:
        y, den = stats.d_tilde_float(), 1
        eps = tol

    if n <= 3:
        values = [Fraction(int(v), den) for v in y] if stats.is_exact else list(y)
        return _small_n_verdict(values, n)
    if n > cap:
        raise SizeError('Exhaustive facet check is capped at n = {}, got {}'.format(cap, n))

    tight, violated = list(), list()
    top = (n - 1) * den
    for i in range(n):
        for kind, slack in (('lower', y[i]), ('upper', top - y[i])):
            if abs(slack) <= eps:
                tight.append(FacetInequality(kind, i=i + 1))
            elif slack < 0:
                violated.append(FacetInequality(kind, i=i + 1))

    s_mask, t_mask = p_family_masks(n)
    s_size, t_size = s_mask.sum(axis=1), t_mask.sum(axis=1)
    g = s_size * (n - 1 - t_size) * den - s_mask.astype(y.dtype) @ y + t_mask.astype(y.dtype) @ y
    for k in np.nonzero(np.abs(g) <= eps)[0]:
        tight.append(FacetInequality('ST', S=np.nonzero(s_mask[k])[0] + 1, T=np.nonzero(t_mask[k])[0] + 1))
    for k in np.nonzero(g < -eps)[0]:
        violated.append(FacetInequality('ST', S=np.nonzero(s_mask[k])[0] + 1, T=np.nonzero(t_mask[k])[0] + 1))

    status = 'outside' if violated else ('boundary' if tight else 'interior')
    logger.debug('facet check n=%d: %s with %d tight inequalities', n, status, len(tight))
    return BoundaryVerdict(status, tight, violated)


def _interior_lp(t: Sequence[int], entries: np.ndarray, mode: str, tol: float):
    """max s s.t. C z + (C 1) s = t, z >= 0, s >= 0, i.e. x' = z + s >= s."""
    n_cols = entries.shape[1]
    a_eq = np.hstack([entries, entries.sum(axis=1, keepdims=True)]).tolist()
    lp = LinearProgram([0] * n_cols + [1], A_eq=a_eq, b_eq=[int(v) for v in t])
    solution = solve_lp(lp, mode=mode, tol=tol)
    if not solution.is_optimal:
        raise LpFailure('Interior LP is {}: t is not in the cone of the design'.format(solution.status))
    s = solution.x[-1]
    return s, [z + s for z in solution.x[:-1]]


def interior_lp_check(t: Sequence[int], C: DesignMatrix, mode: str = 'exact', tol: float = 1e-9) -> InteriorVerdict:
    """
    Decides whether t lies in the relative interior of the cone spanned by the columns of C by solving
    max s s.t. C x' = t, x' >= s, s >= 0: t is interior iff s* > 0.

    :param t: sufficient statistics, t = C x' for some observed lifted table
    :param C: design matrix
    :param mode: 'exact' (certified), 'float' (not certified), or 'auto' (float, exact re-solve when s* is
        close to zero or the float solver fails)
    :param tol: float tolerance
    :return: ``InteriorVerdict``
    """
    entries = C.entries if isinstance(C, DesignMatrix) else np.asarray(C)
    if mode in ('float', 'auto'):
        try:
            s, rep = _interior_lp(t, entries, 'float', tol)
            if mode == 'float' or s > CONST.AUTO_EXACT_THRESHOLD:
                return InteriorVerdict(s > tol, s, rep, 'float', False)
        except (NumericalFailure, LpFailure) as e:
            if mode == 'float':
                raise LpFailure(str(e))
            logger.info('float interior LP failed (%s), re-solving exactly', e)
    s, rep = _interior_lp(t, entries, 'exact', tol)
    return InteriorVerdict(s > 0, s, rep, 'exact', True)


def _dot_columns(y: list, entries: np.ndarray) -> list:
    """<y, c_k> for every column, exact for fraction entries."""
    return [sum(int(a) * v for a, v in zip(entries[:, k], y) if a) for k in range(entries.shape[1])]


def facial_set(t: Sequence[int], C: DesignMatrix, mode: str = 'exact', tol: float = 1e-9,
               representation: list = None) -> FacialSet:
    """
    Facial set of the minimal face of cone(C) containing t.

    Column c_k is co-facial iff max <c_k, y> s.t. y.t = 0, C^T y >= 0, -1 <= y <= 1 is positive. Columns carrying
    positive weight in the interior LP representation are facial and skipped, and every optimal y* marks all
    columns it separates, so typically few LPs are solved. The certificate is minus the sum of the optimal y*.

    :param t: sufficient statistics
    :param C: design matrix
    :param mode: 'exact' or 'float' ('auto' is treated as 'exact')
    :param tol: float tolerance
    :param representation: optional nonnegative x' with C x' = t
    :return: ``FacialSet``
    """
    mode = 'float' if mode == 'float' else 'exact'
    entries = C.entries
    m, n_cols = entries.shape
    labels = C.col_labels
    zero = Fraction(0) if mode == 'exact' else 0.
    eps = 0 if mode == 'exact' else tol

    if representation is None:
        verdict = interior_lp_check(t, C, mode=mode, tol=tol)
        if verdict.interior:
            return FacialSet(frozenset(labels), list(), [zero] * m, False)
        representation = verdict.representation

    facial = {k for k in range(n_cols) if representation[k] > eps}
    cofacial = set()
    certificate = [zero] * m
    a_ineq = entries.T.tolist()
    for k in range(n_cols):
        if k in facial or k in cofacial:
            continue
        lp = LinearProgram(entries[:, k].tolist(), A_eq=[[int(v) for v in t]], b_eq=[0],
                           A_ineq=a_ineq, b_ineq=[0] * n_cols, senses=['>='] * n_cols, bounds=[(-1, 1)] * m)
        solution = solve_lp(lp, mode=mode, tol=tol)
        if not solution.is_optimal:
            raise LpFailure('Facial set LP for column {} is {}'.format(labels[k], solution.status))
        if solution.objective_value > eps:
            values = _dot_columns(solution.x, entries)
            cofacial.update(j for j, v in enumerate(values) if v > eps)
            certificate = [c + v for c, v in zip(certificate, solution.x)]
        else:
            facial.add(k)

    certificate = [-v for v in certificate]
    cells = frozenset(labels[k] for k in range(n_cols) if k not in cofacial)
    logger.debug('facial set: %d of %d columns co-facial', len(cofacial), n_cols)
    return FacialSet(cells, [labels[k] for k in sorted(cofacial)], certificate, len(cofacial) > 0)


def cells_from_certificate(certificate: Sequence, C: DesignMatrix) -> FrozenSet:
    """Columns c with <certificate, c> = 0."""
    values = _dot_columns(list(certificate), C.entries)
    return frozenset(label for label, v in zip(C.col_labels, values) if v == 0)


class BetaCheck:
    """Existence verdict for the beta model with the facial set and, when available, the tight facets."""
    def __init__(self, exists: bool, method: str, witness=None, facial_set: FacialSet = None,
                 tight: List[FacetInequality] = None, certified: bool = True):
        self.exists = exists
        self.method = method
        self.witness = witness
        self.facial_set = facial_set
        self.tight = tight or list()
        self.certified = certified

    def to_dict(self) -> dict:
        out = {'exists': self.exists, 'method': self.method, 'certified': self.certified}
        if self.witness is not None:
            out['witness'] = str(self.witness) if isinstance(self.witness, Fraction) else self.witness
        if self.facial_set is not None:
            out['co_facial'] = [[str(i), str(j)] for i, j in self.facial_set.cofacial]
            out['certificate'] = self.facial_set.to_dict()['certificate']
        if self.tight:
            out['tight'] = [f.to_dict() for f in self.tight]
        return out


def beta_statistics(t: EdgeCountTable) -> Tuple[DesignMatrix, np.ndarray]:
    """Reduced Cayley matrix (C1; B1) and the lifted statistics C x' = (N, d)."""
    design = cayley_design(t.n, reduced=True)
    return design, design.apply(t.lifted())


def beta_check(t: EdgeCountTable, method: str = 'lp', mode: str = 'exact', with_facial_set: bool = True,
               tol: float = 1e-9) -> BetaCheck:
    """
    Existence of the beta model MLE for an edge count table.

    Nodes with d~_i in {0, n-1} decide the boundary immediately. For n <= 3 the parallelepiped test of
    :func:`mp_boundary_check` is exact; otherwise ``method`` selects the Cayley LP ('lp') or the facet
    inequalities ('facets').
    """
    assert method in ['lp', 'facets'], 'Unknown method {}'.format(method)
    n = t.n
    stats = degree_stats(t)
    design, statistic = beta_statistics(t)

    def boundary(how, tight=None, witness=None, certified=True):
        fs = facial_set(statistic, design, mode=mode, tol=tol) if with_facial_set else None
        return BetaCheck(False, how, witness, fs, tight, certified)

    if n <= 3 or method == 'facets':
        verdict = mp_boundary_check(stats, n, tol=tol)
        if verdict.interior:
            return BetaCheck(True, 'facets')
        return boundary('facets', verdict.tight)

    degenerate = [i for i, v in enumerate(stats.d_tilde, 1) if v == 0 or v == n - 1]
    if degenerate:
        tight = [FacetInequality('lower' if stats.d_tilde[i - 1] == 0 else 'upper', i=i) for i in degenerate]
        return boundary('degree', tight)

    verdict = interior_lp_check(statistic, design, mode=mode, tol=tol)
    if verdict.interior:
        return BetaCheck(True, 'lp', verdict.witness, certified=verdict.certified)
    return boundary('lp', witness=verdict.witness, certified=verdict.certified)


def degenerate_nodes(t: EdgeCountTable) -> List[int]:
    stats = degree_stats(t)
    return [i for i, v in enumerate(stats.d_tilde, 1) if v == 0 or v == t.n - 1]


def split_certificate(g: EdgeCountTable, cap: int = CONST.SPLIT_CAP) -> Optional[SplitCertificate]:
    """
    Searches the (S, T) family for sets such that S is a clique, T is stable, every node of S is adjacent to
    every node outside S u T and no node of T is adjacent to a node outside S u T.

    Among several certificates the one with the largest S u T, then the largest S, then the lexicographically
    smallest sets is returned.

    :param g: simple graph (all N_ij = 1)
    :param cap: largest admissible n
    :return: ``SplitCertificate`` or None
    """
    assert g.is_graph, 'split certificates are defined for simple graphs'
    n = g.n
    if n > cap:
        raise SizeError('Split certificate search is capped at n = {}, got {}'.format(cap, n))
    if n < 4:
        return None
    upper = np.triu(g.matrix(), 1)
    adjacency = upper + upper.T
    s_mask, t_mask = p_family_masks(n)
    s = s_mask.astype(np.int64)
    t = t_mask.astype(np.int64)
    r = 1 - s - t
    s_size, t_size, r_size = s.sum(axis=1), t.sum(axis=1), r.sum(axis=1)

    def block(u, v):
        return np.einsum('ki,ij,kj->k', u, adjacency, v)

    ok = (block(s, s) == s_size * (s_size - 1)) & (block(t, t) == 0)
    ok &= (block(s, r) == s_size * r_size) & (block(t, r) == 0)
    found = np.nonzero(ok)[0]
    if len(found) == 0:
        return None

    def key(k):
        S, T = tuple((np.nonzero(s_mask[k])[0] + 1).tolist()), tuple((np.nonzero(t_mask[k])[0] + 1).tolist())
        return -(len(S) + len(T)), -len(S), S, T

    best = min(found, key=key)
    return SplitCertificate(frozenset((np.nonzero(s_mask[best])[0] + 1).tolist()),
                            frozenset((np.nonzero(t_mask[best])[0] + 1).tolist()),
                            degenerate_nodes(g))


def _primitive(vector: Sequence[int]) -> tuple:
    g = math.gcd(*vector) if any(vector) else 1
    return tuple(v // g for v in vector)


def _inverse_columns(basis: List[tuple]) -> List[tuple]:
    """Primitive integer a_i with B a_i a positive multiple of e_i, B having the given rows."""
    r = len(basis)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(basis)]
    for col in range(r):
        pivot = next(k for k in range(col, r) if aug[k][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for k in range(r):
            if k != col and aug[k][col] != 0:
                f = aug[k][col]
                aug[k] = [a - f * b for a, b in zip(aug[k], aug[col])]
    inverse = [row[r:] for row in aug]
    columns = list()
    for i in range(r):
        column = [inverse[k][i] for k in range(r)]
        den = math.lcm(*(v.denominator for v in column))
        columns.append(_primitive([int(v * den) for v in column]))
    return columns


def _popcount(mask: int) -> int:
    return bin(mask).count('1')


def enumerate_facets(generators: Sequence[Sequence[int]], homogenize: bool = False) -> PolyhedralDescription:
    """
    Facets of the cone spanned by integer generators (of the polytope they span when ``homogenize``),
    by the double description method.

    The generators are projected onto a set of coordinates on which they have full rank, an initial simplicial
    cone is built from the first independent generators in lexicographic order, and the remaining generators are
    inserted lexicographically. Two rays are combined only when they are adjacent, which is decided exactly by
    the zero-set criterion (no third ray vanishes on every generator where both vanish).

    :param generators: integer vectors
    :param homogenize: treat the generators as points and describe their convex hull
    :return: ``PolyhedralDescription`` with facets (normal, offset): normal . y >= offset
    """
    points = [tuple(int(v) for v in g) for g in generators]
    gens = [(1,) + p for p in points] if homogenize else list(points)
    if len(gens) > CONST.FACET_GENERATOR_CAP:
        raise SizeError('Facet enumeration is capped at {} generators'.format(CONST.FACET_GENERATOR_CAP))
    if not gens:
        return PolyhedralDescription(points, list(), 0)

    coords = independent_rows(np.array(gens, dtype=np.int64).T)
    r = len(coords)
    if r > CONST.FACET_DIM_CAP:
        raise SizeError('Facet enumeration is capped at dimension {}'.format(CONST.FACET_DIM_CAP))
    if r == 0:
        return PolyhedralDescription(points, list(), 0)
    projected = [tuple(g[c] for c in coords) for g in gens]
    order = sorted((k for k, p in enumerate(projected) if any(p)), key=lambda k: projected[k])

    initial = [order[k] for k in independent_rows(np.array([projected[k] for k in order], dtype=np.int64))]
    rays = _inverse_columns([projected[k] for k in initial])
    masks = list()
    for i in range(r):
        masks.append(sum(1 << initial[j] for j in range(r) if j != i))

    for k in order:
        if k in initial:
            continue
        g = projected[k]
        values = [sum(a * b for a, b in zip(ray, g)) for ray in rays]
        positive = [i for i, v in enumerate(values) if v > 0]
        negative = [i for i, v in enumerate(values) if v < 0]
        zero = [i for i, v in enumerate(values) if v == 0]
        new_rays, new_masks = list(), list()
        for p in positive:
            for q in negative:
                common = masks[p] & masks[q]
                if _popcount(common) < r - 2:
                    continue
                if any((masks[o] & common) == common for o in range(len(rays)) if o != p and o != q):
                    continue
                vp, vq = values[p], values[q]
                new_rays.append(_primitive([vp * b - vq * a for a, b in zip(rays[p], rays[q])]))
                new_masks.append(common | (1 << k))
        rays = [rays[i] for i in positive] + [rays[i] for i in zero] + new_rays
        masks = [masks[i] for i in positive] + [masks[i] | (1 << k) for i in zero] + new_masks
        logger.debug('double description: %d rays after generator %d', len(rays), k)

    facets, incidence = list(), list()
    ambient = len(gens[0])
    for ray in sorted(rays):
        full = [0] * ambient
        for c, a in zip(coords, ray):
            full[c] = a
        incidence.append(frozenset(i for i, g in enumerate(gens) if sum(a * b for a, b in zip(full, g)) == 0))
        if homogenize:
            facets.append((tuple(full[1:]), -full[0]))
        else:
            facets.append((tuple(full), 0))
    dim = r - 1 if homogenize else r
    return PolyhedralDescription(points, facets, dim, incidence)


def design_facets(C: DesignMatrix) -> PolyhedralDescription:
    """Facets of the cone spanned by the columns of a design matrix."""
    return enumerate_facets([tuple(col) for col in C.entries.T.tolist()])


def sampling_facets(description: PolyhedralDescription, C: DesignMatrix) -> List[int]:
    """Indices of the facets whose facial set is every column but those of one dyad (sampling facets)."""
    blocks = [frozenset(range(C.cols)) - frozenset(cols) for cols in C.dyad_columns]
    return [k for k, inc in enumerate(description.incidence) if inc in blocks]


def cofacial_sets(description: PolyhedralDescription, C: DesignMatrix, model_only: bool = True) -> List[FrozenSet]:
    """Co-facial column labels of every facet, leaving out sampling facets when ``model_only``."""
    skip = set(sampling_facets(description, C)) if model_only else set()
    return [frozenset(C.col_labels[j] for j in range(C.cols) if j not in inc)
            for k, inc in enumerate(description.incidence) if k not in skip]


def beta_facet_catalog(n: int) -> Dict[FrozenSet[Cell], FacetInequality]:
    """Co-facial lifted cell sets of the facets of P_n, n >= 4."""
    return {f.cofacial_cells(n): f for f in facet_catalog(n)}


def _extreme(points: List[tuple], mode: str) -> List[tuple]:
    """Points that are not convex combinations of the others."""
    if len(points) <= 2:
        return points
    dim = len(points[0])
    extreme = list()
    for k, p in enumerate(points):
        others = points[:k] + points[k + 1:]
        a_eq = [[q[c] for q in others] for c in range(dim)] + [[1] * len(others)]
        lp = LinearProgram([0] * len(others), A_eq=a_eq, b_eq=list(p) + [1])
        if solve_lp(lp, mode=mode).status != 'optimal':
            extreme.append(p)
    return extreme


def enumerate_vertices_minkowski(segment_pairs: Sequence[Sequence[Sequence[int]]], mode: str = 'exact',
                                 cap: int = CONST.VERTEX_CANDIDATE_CAP) -> PolyhedralDescription:
    """
    Vertices of the Minkowski sum of the convex hulls of the given groups of points (segments for the beta
    model, the four dyad columns for p1).

    The sum is accumulated group by group and pruned to its extreme points after each step, since every vertex
    of a Minkowski sum is a sum of vertices. Extremality is decided by an LP per candidate.

    :param segment_pairs: one list of integer points per summand
    :param mode: LP arithmetic
    :param cap: maximal number of endpoint combinations
    :return: ``PolyhedralDescription`` whose generators are the vertices
    """
    total = 1
    for group in segment_pairs:
        total *= len(group)
    if total > cap:
        raise SizeError('{} endpoint combinations exceed the cap of {}'.format(total, cap))
    dim = len(segment_pairs[0][0])
    points = [tuple([0] * dim)]
    for group in segment_pairs:
        sums = sorted({tuple(a + b for a, b in zip(p, q)) for p in points for q in group})
        points = _extreme(sums, mode)
    points = sorted(points)
    differences = np.array([[a - b for a, b in zip(p, points[0])] for p in points], dtype=np.int64)
    return PolyhedralDescription(points, list(), exact_rank(differences) if len(points) > 1 else 0)


def minkowski_groups(C: DesignMatrix, sampling_prefixes: Tuple[str, ...] = ('pair_', 'lambda_')) -> List[List[tuple]]:
    """Per-dyad column groups of a design matrix with the sampling rows removed."""
    keep = [k for k, label in enumerate(C.row_labels) if not label.startswith(sampling_prefixes)]
    return [[tuple(int(v) for v in C.entries[keep, c]) for c in cols] for cols in C.dyad_columns]


def segment_groups(n: int) -> List[List[tuple]]:
    """Segments [0, a_ij] whose Minkowski sum is P_n."""
    groups = list()
    for i, j in node_pairs(n):
        a = [0] * n
        a[i - 1] = a[j - 1] = 1
        groups.append([tuple([0] * n), tuple(a)])
    return groups


__all__ = ['FacetInequality', 'BoundaryVerdict', 'InteriorVerdict', 'FacialSet', 'SplitCertificate',
           'PolyhedralDescription', 'BetaCheck', 'g_value', 'p_family', 'facet_catalog', 'mp_boundary_check',
           'interior_lp_check', 'facial_set', 'cells_from_certificate', 'beta_statistics', 'beta_check',
           'degenerate_nodes', 'split_certificate', 'enumerate_facets', 'design_facets', 'sampling_facets',
           'cofacial_sets', 'beta_facet_catalog', 'enumerate_vertices_minkowski', 'minkowski_groups',
           'segment_groups', 'p_family_masks', 'lifted_cells']
