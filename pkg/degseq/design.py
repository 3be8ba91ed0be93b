#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import ParameterError, SizeError
from .lp import exact_rank
from .tables import DYAD_STATES, lifted_cells, node_pairs

P1_VARIANTS = ('zero', 'constant', 'edge-dependent')


class DesignMatrix:
    """
    Labeled dense integer matrix mapping a vectorized table to its sufficient statistics.

    :ivar entries: integer matrix (rows x cols)
    :vartype entries: np.ndarray
    :ivar row_labels: parameter names, one per row
    :vartype row_labels: List[str]
    :ivar col_labels: cell indices, one per column
    :vartype col_labels: List[tuple]
    :ivar dyad_columns: for matrices with sampling rows, the columns of each sampling block in row order
    :vartype dyad_columns: List[List[int]]
    :ivar name: short name of the model
    :vartype name: str
    """
    def __init__(self, entries: np.ndarray, row_labels: List[str], col_labels: List[tuple],
                 dyad_columns: Optional[List[List[int]]] = None, name: str = ''):
        self.entries = np.asarray(entries, dtype=np.int64)
        self.row_labels = list(row_labels)
        self.col_labels = list(col_labels)
        self.dyad_columns = dyad_columns if dyad_columns is not None else list()
        self.name = name
        assert self.entries.shape == (len(self.row_labels), len(self.col_labels)), \
            'Shape {} does not match the labels'.format(self.entries.shape)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def rank(self) -> int:
        return exact_rank(self.entries)

    def columns(self) -> List[np.ndarray]:
        return [self.entries[:, k] for k in range(self.cols)]

    def column_index(self, label: tuple) -> int:
        return self.col_labels.index(label)

    def row_index(self, label: str) -> int:
        return self.row_labels.index(label)

    def apply(self, x: Sequence[int]) -> np.ndarray:
        """Sufficient statistics t = A x."""
        return self.entries @ np.asarray(x, dtype=np.int64)

    def without_rows(self, labels_prefix: str) -> 'DesignMatrix':
        keep = [k for k, label in enumerate(self.row_labels) if not label.startswith(labels_prefix)]
        return DesignMatrix(self.entries[keep], [self.row_labels[k] for k in keep], self.col_labels, name=self.name)

    def to_frame(self) -> pd.DataFrame:
        columns = ['-'.join(str(v) for v in label) for label in self.col_labels]
        return pd.DataFrame(self.entries, index=self.row_labels, columns=columns)

    def __repr__(self):
        return 'DesignMatrix({}, {}x{})'.format(self.name, self.rows, self.cols)


def _pair_label(prefix: str, i: int, j: int) -> str:
    return '{}_{}_{}'.format(prefix, i, j)


def beta_design(n: int) -> DesignMatrix:
    """
    Node-edge incidence matrix A of the complete graph on n nodes: column (i, j) has ones at rows i and j.

    :param n: number of nodes (>= 2)
    :return: n x C(n,2) ``DesignMatrix``
    """
    if n < 2:
        raise SizeError('n must be at least 2, got {}'.format(n))
    pairs = node_pairs(n)
    a = np.zeros((n, len(pairs)), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        a[i - 1, k] = a[j - 1, k] = 1
    return DesignMatrix(a, ['beta_{}'.format(i) for i in range(1, n + 1)], pairs, name='beta')


def cayley_design(n: int, reduced: bool = False) -> DesignMatrix:
    """
    Cayley embedding C = (C1; B1; B2) of the beta model on the lifted cells.

    C1 has one row per pair (i, j) with ones at columns (i, j) and (j, i). B1 row i picks the columns (a, b), a < b,
    containing i (the degree of i) and B2 row i the columns (b, a), a < b, containing i (the non-degree).
    The reduced matrix (C1; B1) has full row rank C(n,2) + n.

    :param n: number of nodes (>= 2)
    :param reduced: drop the B2 block
    :return: ``DesignMatrix`` with columns in the order of :func:`lifted_cells`
    """
    if n < 2:
        raise SizeError('n must be at least 2, got {}'.format(n))
    pairs = node_pairs(n)
    cells = lifted_cells(n)
    n_pairs = len(pairs)
    n_rows = n_pairs + n if reduced else n_pairs + 2 * n
    c = np.zeros((n_rows, len(cells)), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        c[k, 2 * k] = c[k, 2 * k + 1] = 1
        c[n_pairs + i - 1, 2 * k] = c[n_pairs + j - 1, 2 * k] = 1
        if not reduced:
            c[n_pairs + n + i - 1, 2 * k + 1] = c[n_pairs + n + j - 1, 2 * k + 1] = 1

    labels = [_pair_label('pair', i, j) for i, j in pairs] + ['deg_{}'.format(i) for i in range(1, n + 1)]
    if not reduced:
        labels += ['codeg_{}'.format(i) for i in range(1, n + 1)]
    dyads = [[2 * k, 2 * k + 1] for k in range(n_pairs)]
    return DesignMatrix(c, labels, cells, dyads, name='cayley-reduced' if reduced else 'cayley')


def poisson_design(n: int) -> DesignMatrix:
    """
    Design of log m_ij = alpha_i + gamma_j: row alpha_i marks the cells leaving i, row gamma_j the cells entering j.
    The matrix has rank 2n - 1.
    """
    if n < 2:
        raise SizeError('n must be at least 2, got {}'.format(n))
    cells = lifted_cells(n)
    a = np.zeros((2 * n, len(cells)), dtype=np.int64)
    for k, (i, j) in enumerate(cells):
        a[i - 1, k] = 1
        a[n + j - 1, k] = 1
    labels = ['alpha_{}'.format(i) for i in range(1, n + 1)] + ['gamma_{}'.format(j) for j in range(1, n + 1)]
    return DesignMatrix(a, labels, cells, name='poisson')


def bt_design(n: int) -> DesignMatrix:
    """Bradley-Terry marginal cone: the C(n,2) sampling rows of C1 followed by the n out-degree (wins) rows."""
    if n < 2:
        raise SizeError('n must be at least 2, got {}'.format(n))
    pairs = node_pairs(n)
    cells = lifted_cells(n)
    a = np.zeros((len(pairs) + n, len(cells)), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        a[k, 2 * k] = a[k, 2 * k + 1] = 1
    for k, (i, j) in enumerate(cells):
        a[len(pairs) + i - 1, k] = 1
    labels = [_pair_label('pair', i, j) for i, j in pairs] + ['out_{}'.format(i) for i in range(1, n + 1)]
    dyads = [[2 * k, 2 * k + 1] for k in range(len(pairs))]
    return DesignMatrix(a, labels, cells, dyads, name='bt')


def rasch_pairs(k: int, l: int) -> List[Tuple[int, int]]:
    """Bipartite pairs (i, j), subjects i in {1..k}, items j in {k+1..k+l}."""
    return [(i, j) for i in range(1, k + 1) for j in range(k + 1, k + l + 1)]


def rasch_design(k: int, l: int) -> DesignMatrix:
    """
    Cayley matrix of the Rasch model: the reduced Cayley construction restricted to the bipartite pairs
    between the k subjects and the l items. It is (kl + k + l) x 2kl with rank kl + k + l - 1.
    """
    if k < 2 or l < 2:
        raise SizeError('k and l must be at least 2, got {} and {}'.format(k, l))
    n = k + l
    pairs = rasch_pairs(k, l)
    cells = list()
    for i, j in pairs:
        cells.extend([(i, j), (j, i)])
    a = np.zeros((len(pairs) + n, len(cells)), dtype=np.int64)
    for r, (i, j) in enumerate(pairs):
        a[r, 2 * r] = a[r, 2 * r + 1] = 1
        a[len(pairs) + i - 1, 2 * r] = a[len(pairs) + j - 1, 2 * r] = 1
    labels = [_pair_label('pair', i, j) for i, j in pairs] + ['deg_{}'.format(v) for v in range(1, n + 1)]
    dyads = [[2 * r, 2 * r + 1] for r in range(len(pairs))]
    return DesignMatrix(a, labels, cells, dyads, name='rasch')


def p1_design(n: int, variant: str = 'zero') -> DesignMatrix:
    """
    Design matrix of the p1 model. Columns are the four states (0,0), (1,0), (0,1), (1,1) of every dyad (i, j),
    i < j, in lexicographic dyad order; rows are lambda_ij, theta, alpha_1..n, beta_1..n and, depending on the
    reciprocity ``variant``, rho ('constant') or rho and rho_1..n ('edge-dependent').

    Entry (r, c) is the coefficient of parameter r in the log-probability of state c. No identifiability
    constraint is imposed, so the matrix is rank deficient.
    """
    if n < 3:
        raise SizeError('n must be at least 3, got {}'.format(n))
    if variant not in P1_VARIANTS:
        raise ParameterError('Unknown p1 variant {}'.format(variant))
    pairs = node_pairs(n)
    n_pairs = len(pairs)
    labels = [_pair_label('lambda', i, j) for i, j in pairs] + ['theta']
    labels += ['alpha_{}'.format(i) for i in range(1, n + 1)] + ['beta_{}'.format(i) for i in range(1, n + 1)]
    if variant in ('constant', 'edge-dependent'):
        labels.append('rho')
    if variant == 'edge-dependent':
        labels += ['rho_{}'.format(i) for i in range(1, n + 1)]

    theta = n_pairs
    alpha = theta + 1
    beta = alpha + n
    rho = beta + n
    a = np.zeros((len(labels), 4 * n_pairs), dtype=np.int64)
    col_labels = list()
    for k, (i, j) in enumerate(pairs):
        for s, (u, v) in enumerate(DYAD_STATES):
            col = 4 * k + s
            col_labels.append((i, j, '{}{}'.format(u, v)))
            a[k, col] = 1
            a[theta, col] = u + v
            if u:  # i -> j
                a[alpha + i - 1, col] += 1
                a[beta + j - 1, col] += 1
            if v:  # j -> i
                a[alpha + j - 1, col] += 1
                a[beta + i - 1, col] += 1
            if u and v and variant != 'zero':
                a[rho, col] = 1
                if variant == 'edge-dependent':
                    a[rho + i, col] = a[rho + j, col] = 1
    dyads = [list(range(4 * k, 4 * k + 4)) for k in range(n_pairs)]
    return DesignMatrix(a, labels, col_labels, dyads, name='p1-{}'.format(variant))


def design_for_model(model: str, n: int = 4, k: int = 2, l: int = 2, variant: str = 'zero') -> DesignMatrix:
    """Dispatches on the CLI model names."""
    builders = {
        'beta': lambda: beta_design(n),
        'cayley': lambda: cayley_design(n, reduced=False),
        'cayley-reduced': lambda: cayley_design(n, reduced=True),
        'poisson': lambda: poisson_design(n),
        'bt': lambda: bt_design(n),
        'rasch': lambda: rasch_design(k, l),
        'p1': lambda: p1_design(n, variant),
    }
    if model in P1_ALIASES:
        return p1_design(n, P1_ALIASES[model])
    if model not in builders:
        raise ParameterError('Unknown model {}'.format(model))
    return builders[model]()


P1_ALIASES = {'p1-zero': 'zero', 'p1-const': 'constant', 'p1-constant': 'constant', 'p1-edge': 'edge-dependent',
              'p1-edge-dependent': 'edge-dependent'}
