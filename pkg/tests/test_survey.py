#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import pytest

from degseq.survey import (dyads_from_code, graph_from_code, survey_beta, survey_bt, survey_p1, survey_rasch,
                           tournament_from_code)


def test_codes():
    assert graph_from_code(4, 0b100001).counts.tolist() == [1, 0, 0, 0, 0, 1]
    assert tournament_from_code(3, 0b011).counts.tolist() == [[0, 1, 1], [0, 0, 0], [0, 1, 0]]
    assert dyads_from_code(3, 0).dyads == {(1, 2): (0, 0), (1, 3): (0, 0), (2, 3): (0, 0)}


def test_survey_beta_n4():
    result = survey_beta(4)
    assert result.total == 64
    assert result.exists == 6
    assert result.agreement
    details = result.to_dict()
    assert details['exists_facets'] == 6
    assert details['tight_facets'] == 22
    assert details['cofacial_patterns'] == 14
    assert details['disagreements'] == []
    assert details['n'] == 4


def test_survey_beta_threads():
    assert survey_beta(4, threads=2).to_dict() == survey_beta(4).to_dict()


@pytest.mark.slow
def test_survey_beta_n5():
    result = survey_beta(5, mode='auto', threads=2)
    assert result.total == 1024
    assert result.agreement


def test_survey_bt_n4():
    result = survey_bt(4)
    assert result.total == 64
    assert result.exists == 24
    assert result.agreement
    assert result.details['exists_lp'] == 24


def test_survey_rasch_2x2():
    result = survey_rasch(2, 2)
    assert result.total == 16
    assert result.exists == 2
    assert result.to_dict()['k'] == 2


def test_survey_rasch_2x3():
    # only tables with one positive response per item and no extreme subject
    result = survey_rasch(2, 3)
    assert result.total == 64
    assert result.exists == 6
    assert result.agreement


@pytest.mark.parametrize('variant, exists', [('zero', 2), ('constant', 0), ('edge-dependent', 0)])
def test_survey_p1_n3(variant, exists):
    result = survey_p1(3, variant)
    assert result.total == 64
    assert result.exists == exists


@pytest.mark.slow
@pytest.mark.parametrize('variant, exists', [('zero', 426), ('constant', 96), ('edge-dependent', 0)])
def test_survey_p1_n4(variant, exists):
    result = survey_p1(4, variant, threads=2)
    assert result.total == 4096
    assert result.exists == exists
