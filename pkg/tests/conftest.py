#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile('default', max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('ci', max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: exhaustive enumerations and large facet computations')


@pytest.fixture
def data_path():
    def path(filename: str) -> str:
        return os.path.join(DATA_DIR, filename)
    return path
