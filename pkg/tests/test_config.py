#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import os

import pytest

from degseq.config import Params


CONFIG_FILE = os.path.join(os.path.dirname(__file__), os.pardir, 'config.json')


def test_params_from_json_file():
    parameters = Params.from_json_file(CONFIG_FILE)
    assert parameters.lp_mode == 'auto'
    assert parameters.replicates == 2000
    assert parameters.beta_vector == [0.] * parameters.n_nodes
    assert parameters.to_dict()['C'] == 0.1


def test_params_defaults():
    parameters = Params(n_nodes=3, beta=[0.1, 0.2, 0.3])
    assert parameters.lp_mode == 'exact'
    assert parameters.threads == 1
    assert parameters.beta_vector == [0.1, 0.2, 0.3]


@pytest.mark.parametrize('kwargs', [
    {'lp_mode': 'symbolic'},
    {'n_trials': 0},
    {'threads': 0},
    {'n_nodes': 4, 'beta': [0., 1.]},
])
def test_params_validation(kwargs):
    with pytest.raises(AssertionError):
        Params(**kwargs)
