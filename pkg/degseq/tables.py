#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import io
import itertools
import json
import logging
import os
from fractions import Fraction
from typing import BinaryIO, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.special import expit

from .errors import ConsistencyError, ParseError

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
TrialsSpec = Union[int, Mapping[Pair, int], np.ndarray, None]

DIAGONAL_SYMBOL = 'x'
MAX_RATIONAL_TRIALS = 10 ** 6
DYAD_STATES = ((0, 0), (1, 0), (0, 1), (1, 1))


def node_pairs(n: int) -> List[Pair]:
    """Unordered node pairs (i, j), i < j, 1-based and in lexicographic order."""
    return list(itertools.combinations(range(1, n + 1), 2))


def lifted_cells(n: int) -> List[Pair]:
    """Ordered cells (1,2), (2,1), (1,3), (3,1), ... : each pair followed by its reverse."""
    cells = list()
    for i, j in node_pairs(n):
        cells.extend([(i, j), (j, i)])
    return cells


def pair_position(i: int, j: int, n: int) -> int:
    """Position of the unordered pair {i, j} in :func:`node_pairs`."""
    if i > j:
        i, j = j, i
    # pairs before row i: sum_{r<i} (n - r)
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


class EdgeCountTable:
    """
    Observed edge counts of the generalized beta model.

    For each pair i < j the edge (i, j) was observed ``counts`` times out of ``trials`` trials. The count
    of the lower cell x_ji = N_ij - x_ij is derived and never stored.

    :ivar n: number of nodes
    :vartype n: int
    :ivar counts: edge counts x_ij, aligned with :func:`node_pairs`
    :vartype counts: np.ndarray
    :ivar trials: numbers of trials N_ij, aligned with :func:`node_pairs`
    :vartype trials: np.ndarray
    """
    def __init__(self, n: int, counts: Union[Mapping[Pair, int], Sequence[int]], trials: TrialsSpec = 1):
        if n < 2:
            raise ParseError('A table needs at least 2 nodes, got {}'.format(n))
        self.n = n
        self.counts = _pair_vector(n, counts, 'counts')
        self.trials = _pair_vector(n, 1 if trials is None else trials, 'trials')

        if np.any(self.trials < 1):
            raise ConsistencyError('Numbers of trials must be positive')
        if np.any(self.counts < 0) or np.any(self.counts > self.trials):
            bad = [p for p, x, nt in zip(self.pairs, self.counts, self.trials) if not 0 <= x <= nt]
            raise ConsistencyError('Counts outside [0, N] at pairs {}'.format(bad))

    @property
    def pairs(self) -> List[Pair]:
        return node_pairs(self.n)

    @property
    def is_graph(self) -> bool:
        return bool(np.all(self.trials == 1))

    def count(self, i: int, j: int) -> int:
        """x_ij for any ordered cell, the lower cell being N_ij - x_ji."""
        k = pair_position(i, j, self.n)
        return int(self.counts[k]) if i < j else int(self.trials[k] - self.counts[k])

    def trial(self, i: int, j: int) -> int:
        return int(self.trials[pair_position(i, j, self.n)])

    def p_tilde(self) -> np.ndarray:
        return self.counts / self.trials

    def lifted(self) -> np.ndarray:
        """Lifted table x' in the order of :func:`lifted_cells`."""
        x = np.empty(2 * len(self.counts), dtype=np.int64)
        x[0::2] = self.counts
        x[1::2] = self.trials - self.counts
        return x

    def matrix(self) -> np.ndarray:
        """n x n array of counts with the lower triangle filled in and -1 on the diagonal."""
        m = -np.ones((self.n, self.n), dtype=np.int64)
        for (i, j), x, nt in zip(self.pairs, self.counts, self.trials):
            m[i - 1, j - 1] = x
            m[j - 1, i - 1] = nt - x
        return m

    def permute(self, perm: Sequence[int]) -> 'EdgeCountTable':
        """Relabels node i as ``perm[i-1]`` (1-based permutation)."""
        counts, trials = dict(), dict()
        for (i, j), x, nt in zip(self.pairs, self.counts, self.trials):
            a, b = sorted((perm[i - 1], perm[j - 1]))
            counts[(a, b)] = int(x)
            trials[(a, b)] = int(nt)
        return EdgeCountTable(self.n, counts, trials)

    def to_csv(self) -> str:
        """CSV matrix with "x" on the diagonal and the lower triangle N - x filled in."""
        m = self.matrix().astype(object)
        np.fill_diagonal(m, DIAGONAL_SYMBOL)
        buffer = io.StringIO()
        pd.DataFrame(m).to_csv(buffer, header=False, index=False)
        return buffer.getvalue()

    def __repr__(self):
        return 'EdgeCountTable(n={}, counts={}, trials={})'.format(self.n, self.counts.tolist(), self.trials.tolist())


class DirectedCountTable:
    """
    Counts x_ij >= 0 on every ordered cell i != j (Poisson and Bradley-Terry data).

    :ivar n: number of nodes
    :vartype n: int
    :ivar counts: n x n integer array, the diagonal is ignored and kept at zero
    :vartype counts: np.ndarray
    """
    def __init__(self, n: int, counts: Union[Mapping[Pair, int], np.ndarray]):
        if n < 2:
            raise ParseError('A table needs at least 2 nodes, got {}'.format(n))
        self.n = n
        if isinstance(counts, Mapping):
            matrix = np.zeros((n, n), dtype=np.int64)
            for (i, j), x in counts.items():
                if i == j or not (1 <= i <= n and 1 <= j <= n):
                    raise ParseError('Invalid cell ({}, {})'.format(i, j))
                matrix[i - 1, j - 1] = x
        else:
            matrix = np.array(counts, dtype=np.int64)
            if matrix.shape != (n, n):
                raise ParseError('Expected a {0}x{0} matrix, got shape {1}'.format(n, matrix.shape))
        np.fill_diagonal(matrix, 0)
        if np.any(matrix < 0):
            raise ConsistencyError('Directed counts must be nonnegative')
        self.counts = matrix

    @property
    def cells(self) -> List[Pair]:
        return lifted_cells(self.n)

    def vector(self) -> np.ndarray:
        """Counts in the order of :func:`lifted_cells`."""
        return np.array([self.counts[i - 1, j - 1] for i, j in self.cells], dtype=np.int64)

    def comparisons(self) -> np.ndarray:
        """Symmetric matrix of N_ij = x_ij + x_ji."""
        return self.counts + self.counts.T

    def permute(self, perm: Sequence[int]) -> 'DirectedCountTable':
        idx = np.argsort(np.asarray(perm) - 1)
        return DirectedCountTable(self.n, self.counts[np.ix_(idx, idx)])

    def to_csv(self) -> str:
        m = self.counts.astype(object)
        np.fill_diagonal(m, DIAGONAL_SYMBOL)
        buffer = io.StringIO()
        pd.DataFrame(m).to_csv(buffer, header=False, index=False)
        return buffer.getvalue()


class DyadTable:
    """
    One observation per dyad for the p1 model: dyad (i, j), i < j, is in one of the states
    (0,0), (1,0) [i -> j], (0,1) [j -> i] or (1,1).

    :ivar n: number of nodes
    :vartype n: int
    :ivar dyads: state of every dyad
    :vartype dyads: Dict[Pair, Tuple[int, int]]
    """
    def __init__(self, n: int, dyads: Mapping[Pair, Tuple[int, int]]):
        if n < 2:
            raise ParseError('A table needs at least 2 nodes, got {}'.format(n))
        self.n = n
        missing = set(node_pairs(n)) - set(dyads.keys())
        if missing:
            raise ConsistencyError('Dyads without an observation: {}'.format(sorted(missing)))
        self.dyads = dict()
        for pair in node_pairs(n):
            state = tuple(int(v) for v in dyads[pair])
            if state not in DYAD_STATES:
                raise ConsistencyError('Invalid state {} for dyad {}'.format(state, pair))
            self.dyads[pair] = state

    @classmethod
    def from_adjacency(cls, adjacency: np.ndarray) -> 'DyadTable':
        adjacency = np.asarray(adjacency)
        n = adjacency.shape[0]
        return cls(n, {(i, j): (adjacency[i - 1, j - 1], adjacency[j - 1, i - 1]) for i, j in node_pairs(n)})

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), (u, v) in self.dyads.items():
            a[i - 1, j - 1], a[j - 1, i - 1] = u, v
        return a

    def vector(self) -> np.ndarray:
        """One-hot encoding of the states, four entries per dyad in the order of ``DYAD_STATES``."""
        x = np.zeros(4 * len(self.dyads), dtype=np.int64)
        for k, pair in enumerate(node_pairs(self.n)):
            x[4 * k + DYAD_STATES.index(self.dyads[pair])] = 1
        return x

    def permute(self, perm: Sequence[int]) -> 'DyadTable':
        idx = np.argsort(np.asarray(perm) - 1)
        a = self.adjacency()
        return DyadTable.from_adjacency(a[np.ix_(idx, idx)])

    def to_csv(self) -> str:
        m = self.adjacency().astype(object)
        np.fill_diagonal(m, DIAGONAL_SYMBOL)
        buffer = io.StringIO()
        pd.DataFrame(m).to_csv(buffer, header=False, index=False)
        return buffer.getvalue()


class DegreeStats:
    """
    Degree sequence d and its rescaled version d~ with d~_i = sum_j x_ij / N_ij.

    ``d_tilde`` holds exact :class:`fractions.Fraction` values when every N_ij is at most 10^6, floats otherwise.

    :ivar d: degree sequence
    :vartype d: np.ndarray
    :ivar d_tilde: rescaled degree sequence
    :vartype d_tilde: Tuple
    """
    def __init__(self, d: np.ndarray, d_tilde: Sequence):
        self.d = np.asarray(d, dtype=np.int64)
        self.d_tilde = tuple(d_tilde)

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.d_tilde)

    def d_tilde_float(self) -> np.ndarray:
        return np.array([float(v) for v in self.d_tilde])

    def scaled_integers(self) -> Tuple[np.ndarray, int]:
        """Integer vector D * d~ and the common denominator D (exact statistics only)."""
        assert self.is_exact, 'scaled_integers needs exact statistics'
        den = int(np.lcm.reduce([Fraction(v).denominator for v in self.d_tilde]))
        scaled = [int(Fraction(v) * den) for v in self.d_tilde]
        # int64 stays exact while n * max|y| is far below 2**63
        dtype = np.int64 if max(abs(v) for v in scaled) * self.n < 2 ** 60 else object
        return np.array(scaled, dtype=dtype), den

    def __repr__(self):
        return 'DegreeStats(d={}, d_tilde={})'.format(self.d.tolist(), [str(v) for v in self.d_tilde])


class BetaParams:
    """
    Natural parameters of the beta model, p_ij = exp(b_i + b_j) / (1 + exp(b_i + b_j)).

    :ivar beta: real vector of length n
    :vartype beta: np.ndarray
    """
    def __init__(self, beta: Sequence[float]):
        self.beta = np.asarray(beta, dtype=float)
        if self.beta.ndim != 1 or not np.all(np.isfinite(self.beta)):
            raise ValueError('beta must be a finite vector')

    @property
    def n(self) -> int:
        return len(self.beta)

    def edge_probabilities(self) -> np.ndarray:
        """p_ij for every pair in the order of :func:`node_pairs`."""
        i, j = np.triu_indices(self.n, k=1)
        return expit(self.beta[i] + self.beta[j])

    def probability_matrix(self) -> np.ndarray:
        p = expit(self.beta[:, None] + self.beta[None, :])
        np.fill_diagonal(p, np.nan)
        return p


def degree_stats(t: EdgeCountTable) -> DegreeStats:
    """
    Computes the degree sequence d_i = sum_{j<i} x_ji + sum_{j>i} x_ij and its rescaled version.

    :param t: edge count table
    :return: ``DegreeStats``
    """
    d = np.zeros(t.n, dtype=np.int64)
    exact = int(t.trials.max()) <= MAX_RATIONAL_TRIALS
    d_tilde = [Fraction(0)] * t.n if exact else [0.0] * t.n
    for (i, j), x, nt in zip(t.pairs, t.counts, t.trials):
        d[i - 1] += x
        d[j - 1] += x
        share = Fraction(int(x), int(nt)) if exact else float(x) / float(nt)
        d_tilde[i - 1] += share
        d_tilde[j - 1] += share
    return DegreeStats(d, d_tilde)


def generate_graph(params: BetaParams, trials: TrialsSpec = 1, seed: int = 0) -> EdgeCountTable:
    """
    Draws x_ij ~ Binomial(N_ij, p_ij) independently for every pair.

    :param params: natural parameters
    :param trials: N_ij, scalar or per pair
    :param seed: random seed, or a sequence of ints for counter-based streams
    :return: ``EdgeCountTable``
    """
    n = params.n
    n_trials = _pair_vector(n, 1 if trials is None else trials, 'trials')
    rng = np.random.default_rng(seed)
    counts = rng.binomial(n_trials, params.edge_probabilities())
    return EdgeCountTable(n, counts, n_trials)


def generate_directed(alpha: Sequence[float], gamma: Sequence[float], seed: int = 0) -> DirectedCountTable:
    """Poisson counts with log m_ij = alpha_i + gamma_j."""
    alpha, gamma = np.asarray(alpha, dtype=float), np.asarray(gamma, dtype=float)
    means = np.exp(alpha[:, None] + gamma[None, :])
    np.fill_diagonal(means, 0.)
    rng = np.random.default_rng(seed)
    return DirectedCountTable(len(alpha), rng.poisson(means))


def parse_table(source: Union[BinaryIO, bytes, str],
                format: str = 'csv-matrix',
                kind: str = 'beta',
                trials: Union[int, np.ndarray, None] = None):
    """
    Reads a table from a CSV matrix or a JSON document.

    CSV matrix: n lines of n comma separated fields with "x" on the diagonal. For ``kind='beta'`` the upper
    triangle holds the edge counts x_ij, the lower triangle is optional and validated against N - x when present.
    When ``trials`` is not given, N_ij is read from the lower triangle as x_ij + x_ji.

    JSON: ``{"n": 4, "trials": {"1,2": 3, ...}, "counts": {"1,2": 0, ...}}`` with 1-based cells.

    :param source: byte stream, bytes or path to a file
    :param format: 'csv-matrix' or 'json'
    :param kind: 'beta' (``EdgeCountTable``), 'directed' (``DirectedCountTable``) or 'dyad' (``DyadTable``)
    :param trials: scalar or n x n matrix of trials (beta tables only)
    :return: the validated table
    """
    assert kind in ['beta', 'directed', 'dyad'], 'Unknown table kind {}'.format(kind)
    raw = _read_bytes(source)
    if format == 'csv-matrix':
        return _table_from_matrix(_read_csv_matrix(raw), kind, trials)
    elif format == 'json':
        return _table_from_json(raw, kind, trials)
    raise ParseError('Unknown format {}'.format(format))


def read_integer_matrix(source: Union[BinaryIO, bytes, str], allow_diagonal: bool = False) -> np.ndarray:
    """Reads a rectangular CSV of integers (no diagonal symbol), e.g. Rasch responses or a trials matrix."""
    cells = _read_csv_matrix(_read_bytes(source), square=allow_diagonal)
    values = np.zeros(cells.shape, dtype=np.int64)
    for (r, c), v in np.ndenumerate(cells):
        if allow_diagonal and r == c and v.lower() in (DIAGONAL_SYMBOL, ''):
            continue
        values[r, c] = _to_int(v, r, c)
    return values


def _read_bytes(source) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, (str, os.PathLike)):
        with open(source, 'rb') as f:
            return f.read()
    return source.read()


def _read_csv_matrix(raw: bytes, square: bool = True) -> np.ndarray:
    try:
        frame = pd.read_csv(io.BytesIO(raw), header=None, dtype=str, keep_default_na=False,
                            skipinitialspace=True, comment='#')
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ParseError('Malformed CSV matrix: {}'.format(e))
    cells = frame.apply(lambda column: column.str.strip()).values
    if square and cells.shape[0] != cells.shape[1]:
        raise ParseError('Expected a square matrix, got shape {}'.format(cells.shape))
    return cells


def _to_int(value: str, r: int, c: int) -> int:
    try:
        v = float(value)
    except ValueError:
        raise ParseError('Cell ({}, {}) is not a number: {!r}'.format(r + 1, c + 1, value))
    if v != int(v):
        raise ParseError('Cell ({}, {}) is not an integer: {!r}'.format(r + 1, c + 1, value))
    return int(v)


def _table_from_matrix(cells: np.ndarray, kind: str, trials):
    n = cells.shape[0]
    for i in range(n):
        if cells[i, i].lower() != DIAGONAL_SYMBOL:
            raise ParseError('Diagonal cell ({0}, {0}) must be "{1}"'.format(i + 1, DIAGONAL_SYMBOL))

    if kind in ('directed', 'dyad'):
        matrix = np.zeros((n, n), dtype=np.int64)
        for r, c in itertools.permutations(range(n), 2):
            if cells[r, c] == '':
                raise ParseError('Missing cell ({}, {})'.format(r + 1, c + 1))
            matrix[r, c] = _to_int(cells[r, c], r, c)
        if kind == 'directed':
            return DirectedCountTable(n, matrix)
        if not np.all((matrix == 0) | (matrix == 1)):
            raise ConsistencyError('Dyad tables must be 0/1 adjacency matrices')
        return DyadTable.from_adjacency(matrix)

    counts, n_trials = dict(), dict()
    for i, j in node_pairs(n):
        if cells[i - 1, j - 1] == '':
            raise ParseError('Missing upper cell ({}, {})'.format(i, j))
        x = _to_int(cells[i - 1, j - 1], i - 1, j - 1)
        lower = cells[j - 1, i - 1]
        lower_count = None if lower == '' else _to_int(lower, j - 1, i - 1)

        if trials is None:
            if lower_count is None:
                raise ParseError('No trials given and lower cell ({}, {}) is empty'.format(j, i))
            nt = x + lower_count
        elif np.isscalar(trials):
            nt = int(trials)
        else:
            nt = int(np.asarray(trials)[i - 1, j - 1])

        if lower_count is not None and x + lower_count != nt:
            raise ConsistencyError('Cells ({0},{1}) and ({1},{0}) sum to {2}, expected N = {3}'
                                   .format(i, j, x + lower_count, nt))
        counts[(i, j)], n_trials[(i, j)] = x, nt
    return EdgeCountTable(n, counts, n_trials)


def _parse_cell_key(key: str) -> Pair:
    try:
        i, j = (int(v) for v in key.split(','))
    except ValueError:
        raise ParseError('Invalid cell key {!r}, expected "i,j"'.format(key))
    return i, j


def _table_from_json(raw: bytes, kind: str, trials):
    try:
        doc = json.loads(raw.decode('utf8'))
        n = int(doc['n'])
        counts = {_parse_cell_key(k): int(v) for k, v in doc['counts'].items()}
    except (ValueError, KeyError, TypeError, AttributeError) as e:
        raise ParseError('Malformed JSON table: {}'.format(e))
    bad = [(i, j) for i, j in counts if not (1 <= i <= n and 1 <= j <= n) or i == j]
    if bad:
        raise ParseError('Cells {} are outside the {}-node table'.format(sorted(bad), n))

    if kind == 'directed':
        return DirectedCountTable(n, counts)
    if kind == 'dyad':
        adjacency = np.zeros((n, n), dtype=np.int64)
        for (i, j), v in counts.items():
            adjacency[i - 1, j - 1] = v
        return DyadTable.from_adjacency(adjacency)

    json_trials = {_parse_cell_key(k): int(v) for k, v in doc.get('trials', dict()).items()}
    upper, n_trials = dict(), dict()
    for i, j in node_pairs(n):
        if (i, j) not in counts:
            raise ParseError('Missing count for pair ({}, {})'.format(i, j))
        if (i, j) in json_trials:
            nt = json_trials[(i, j)]
        elif trials is not None and np.isscalar(trials):
            nt = int(trials)
        elif trials is not None:
            nt = int(np.asarray(trials)[i - 1, j - 1])
        else:
            raise ParseError('No trials for pair ({}, {})'.format(i, j))
        if (j, i) in counts and counts[(j, i)] + counts[(i, j)] != nt:
            raise ConsistencyError('Cells ({0},{1}) and ({1},{0}) do not sum to N = {2}'.format(i, j, nt))
        upper[(i, j)], n_trials[(i, j)] = counts[(i, j)], nt
    return EdgeCountTable(n, upper, n_trials)


def _pair_vector(n: int, values, name: str) -> np.ndarray:
    """Aligns a scalar, a mapping on pairs, a symmetric matrix or a flat vector with :func:`node_pairs`."""
    pairs = node_pairs(n)
    if isinstance(values, Mapping):
        try:
            return np.array([int(values[p]) for p in pairs], dtype=np.int64)
        except KeyError as e:
            raise ParseError('Missing {} for pair {}'.format(name, e))
    if np.isscalar(values):
        return np.full(len(pairs), int(values), dtype=np.int64)
    array = np.asarray(values)
    if array.shape == (n, n):
        return np.array([int(array[i - 1, j - 1]) for i, j in pairs], dtype=np.int64)
    if array.shape == (len(pairs),):
        return array.astype(np.int64)
    raise ParseError('Cannot align {} of shape {} with {} node pairs'.format(name, array.shape, len(pairs)))


def lift_table(t: EdgeCountTable) -> np.ndarray:
    """x' with x'_ij = x_ij and x'_ji = N_ij - x_ij, in the order of :func:`lifted_cells`."""
    return t.lifted()
