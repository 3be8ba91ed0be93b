#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import json
import os
from typing import List


class CONST:
    BLAND_FALLBACK_FACTOR = 5  # float simplex switches to Bland's rule after 5*(m+n) pivots
    MAX_PIVOT_FACTOR = 50
    MOMENT_TOL = 1e-8
    EXHAUSTIVE_CAP = 12  # 3**12 labelings of the nodes
    SPLIT_CAP = 12
    RASCH_CAP = 10
    VERTEX_CANDIDATE_CAP = 2 ** 20
    FACET_GENERATOR_CAP = 64
    FACET_DIM_CAP = 40
    AUTO_EXACT_THRESHOLD = 1e-7  # 'auto' mode re-solves exactly below this witness value


class Params:
    """
    Class for the settings of the solvers and of the Monte Carlo experiments

    :ivar lp_mode: arithmetic used for interior and facial-set decisions, one of 'exact', 'float', 'auto'
        (default: 'exact'). 'auto' solves in floating point and re-solves exactly when the witness is ambiguous
    :vartype lp_mode: str
    :ivar exhaustive_cap: largest n for which (S, T) pairs are enumerated exhaustively (default: 12)
    :vartype exhaustive_cap: int
    :ivar sample_pairs: number of random (S, T) pairs drawn above the cap (default: 100000)
    :vartype sample_pairs: int
    :ivar threads: worker processes for surveys and simulations (default: 1)
    :vartype threads: int
    :ivar seed: random seed (default: 0)
    :vartype seed: int
    :ivar n_nodes: number of nodes of the simulated networks (default: 10)
    :vartype n_nodes: int
    :ivar n_trials: number of trials per pair N (default: 1)
    :vartype n_trials: int
    :ivar beta: natural parameters of the simulated networks, zeros when empty (default: [])
    :vartype beta: List[float]
    :ivar replicates: number of Monte Carlo replicates (default: 2000)
    :vartype replicates: int
    :ivar c: exponent constant of the existence bounds (default: 0.6)
    :vartype c: float
    :ivar C: additive constant of the existence bounds (default: 0.1)
    :vartype C: float
    :ivar output_dir: directory where the simulation report is written, nothing is written when empty
    :vartype output_dir: str
    :ivar save_verdicts: also write the per-replicate verdicts as csv (default: False)
    :vartype save_verdicts: bool
    """
    def __init__(self, **kwargs):
        # solver params
        self.lp_mode = kwargs.get('lp_mode', 'exact')
        self.exhaustive_cap = kwargs.get('exhaustive_cap', CONST.EXHAUSTIVE_CAP)
        self.sample_pairs = kwargs.get('sample_pairs', 100000)
        self.threads = kwargs.get('threads', 1)
        self.seed = kwargs.get('seed', 0)
        # simulation params
        self.n_nodes = kwargs.get('n_nodes', 10)
        self.n_trials = kwargs.get('n_trials', 1)
        self.beta = list(kwargs.get('beta', []))
        self.replicates = kwargs.get('replicates', 2000)
        self.c = kwargs.get('c', 0.6)
        self.C = kwargs.get('C', 0.1)
        self.output_dir = kwargs.get('output_dir', '')
        self.save_verdicts = kwargs.get('save_verdicts', False)

        assert self.lp_mode in ['exact', 'float', 'auto'], 'Unknown lp mode {}'.format(self.lp_mode)
        assert self.threads >= 1, 'threads must be at least 1'
        assert self.n_trials >= 1, 'n_trials must be at least 1'
        assert not self.beta or len(self.beta) == self.n_nodes, \
            "Length of beta ({}) and n_nodes ({}) differ".format(len(self.beta), self.n_nodes)

        if self.output_dir and os.path.isdir(self.output_dir):
            print('WARNING : The output directory {} already exists.'.format(self.output_dir))

    @property
    def beta_vector(self) -> List[float]:
        return self.beta if self.beta else [0.0] * self.n_nodes

    def to_dict(self) -> dict:
        """
        Returns the parameters as a dictionary

        :return:
        """
        return self.__dict__.copy()

    @classmethod
    def from_json_file(cls, json_file: str):
        """
        Given a json file, creates a ``Params`` object.

        :param json_file: path to the json file
        :return: ``Params`` object
        """
        with open(json_file, 'r') as file:
            config = json.load(file)

        return cls(**config)
