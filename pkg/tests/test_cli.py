#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import json

import pytest

from degseq.cli import EXIT_INPUT, EXIT_NONEXISTENT, EXIT_OK, EXIT_PARAMETER, run


def test_check_table2(data_path, capsys):
    result = run(['check', '--model', 'beta', data_path('table2.csv')])
    assert result.exit_code == EXIT_NONEXISTENT
    printed = json.loads(capsys.readouterr().out)
    assert printed == result.payload
    assert printed['exists'] is False
    assert printed['co_facial'] == [['1', '2'], ['4', '3']]
    assert 'split' not in printed


def test_check_table3(data_path):
    result = run(['check', '--trials', '3', data_path('table3.csv')])
    assert result.exit_code == EXIT_OK
    assert result.payload['exists'] and result.payload['certified']


def test_check_split_graph(data_path):
    result = run(['check', '--trials', '1', '--method', 'facets', data_path('table8.csv')])
    assert result.exit_code == EXIT_NONEXISTENT
    assert result.payload['split'] == {'S': [3, 4], 'T': [1, 2]}
    assert {'kind': 'ST', 'S': [3, 4], 'T': [1, 2]} in result.payload['tight']


def test_check_json_and_float(data_path):
    result = run(['check', '--format', 'json', '--float', data_path('table2.json')])
    assert result.exit_code == EXIT_NONEXISTENT
    assert result.payload['co_facial'] == [['1', '2'], ['4', '3']]


def test_check_other_models(data_path):
    assert run(['check', '--model', 'bt', data_path('cycle3.csv')]).payload == {'exists': True, 'exists_lp': True}
    assert run(['check', '--model', 'p1-zero', data_path('cycle3.csv')]).exit_code == EXIT_OK
    assert run(['check', '--model', 'p1-const', data_path('cycle3.csv')]).exit_code == EXIT_NONEXISTENT
    blocked = run(['check', '--model', 'rasch', data_path('rasch_blocked.csv')])
    assert blocked.exit_code == EXIT_NONEXISTENT
    assert blocked.payload['certificate'] == {'A': [2], 'B': [1], 'C': [2, 3], 'D': [1]}
    poisson = run(['check', '--model', 'poisson-undirected', data_path('cycle3.csv')])
    assert poisson.exit_code == EXIT_NONEXISTENT


def test_fit_table3(data_path, capsys):
    result = run(['fit', '--model', 'beta', data_path('table3.csv')])
    assert result.exit_code == EXIT_OK
    assert len(result.payload['beta_hat']) == 4
    assert result.payload['moment_residual'] <= 1e-8
    assert json.loads(capsys.readouterr().out)['exists']


def test_fit_pretty(data_path, capsys):
    result = run(['fit', '--pretty', data_path('table3.csv')])
    assert result.exit_code == EXIT_OK
    assert 'NaN' in capsys.readouterr().out


def test_fit_refuses_boundary(data_path):
    result = run(['fit', data_path('table2.csv')])
    assert result.exit_code == EXIT_NONEXISTENT
    assert result.payload['co_facial'] == [[1, 2], [4, 3]]
    assert '--extended' in result.payload['error']


def test_fit_extended(data_path):
    result = run(['fit', '--extended', data_path('table2.csv')])
    assert result.exit_code == EXIT_NONEXISTENT
    assert result.payload['p_hat']['1,2'] == 0.
    assert result.payload['p_hat']['3,4'] == 1.
    assert result.payload['p_hat']['1,3'] == pytest.approx(0.5)


def test_fit_bt_mm(data_path):
    result = run(['fit', '--model', 'bt', '--algorithm', 'mm', data_path('cycle3.csv')])
    assert result.exit_code == EXIT_OK
    assert result.payload['model'] == 'bt'


def test_facial_set(data_path):
    result = run(['facial-set', '--trials', '3', data_path('table2.csv')])
    assert result.exit_code == EXIT_NONEXISTENT
    assert result.payload['co_facial'] == [[1, 2], [4, 3]]
    assert len(result.payload['cells']) == 10


def test_design(capsys):
    result = run(['design', '--model', 'beta', '--n', '3'])
    assert result.exit_code == EXIT_OK
    assert result.payload['rank'] == 3
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ',1-2,1-3,2-3'
    assert lines[1] == 'beta_1,1,1,0'


def test_enumerate_beta():
    result = run(['enumerate', '--facets', '--model', 'beta', '--n', '4'])
    assert result.exit_code == EXIT_OK
    assert result.payload['facet_count'] == 28
    assert result.payload['sampling_facets'] == 6
    assert result.payload['model_facets'] == 22
    assert result.payload['facet_inequalities'] == 22
    assert run(['enumerate', '--vertices', '--n', '4']).payload['vertex_count'] == 46


def test_survey_command():
    result = run(['survey', '--model', 'rasch', '--threads', '1'])
    assert result.payload['exists'] == 2
    assert run(['survey', '--model', 'bt', '--n', '3', '--threads', '1']).payload['exists'] == 2
    beta = run(['survey', '--model', 'beta', '--n', '4', '--threads', '1'])
    assert beta.exit_code == EXIT_OK
    assert beta.payload['cofacial_patterns'] == 14


def test_simulate(tmp_path):
    verdicts = tmp_path / 'verdicts.csv'
    result = run(['simulate', '--beta', '0,0,0', '--reps', '100', '--threads', '1', '--C', '0.1',
                  '--verdicts', str(verdicts)])
    assert result.exit_code == EXIT_OK
    assert result.payload['exist_rate'] == 0.
    # C = 0.1 is out of range for three nodes
    assert 'error' in result.payload['theorem']
    assert 'error' in result.payload['corollary']
    assert verdicts.read_text().splitlines()[0] == 'replicate,exists'


def test_generate_then_check(tmp_path):
    output = tmp_path / 'table.csv'
    generated = run(['generate', '--n', '5', '--N', '3', '--beta', '0.2', '--seed', '4', '--output', str(output)])
    assert generated.exit_code == EXIT_OK
    assert output.read_text() == generated.payload['table']
    checked = run(['check', str(output)])
    assert checked.exit_code in (EXIT_OK, EXIT_NONEXISTENT)
    assert run(['check', '--trials', '3', str(output)]).payload['exists'] == checked.payload['exists']


def test_generate_p1(capsys):
    result = run(['generate', '--model', 'p1-zero', '--n', '3', '--seed', '1'])
    assert result.exit_code == EXIT_OK
    assert capsys.readouterr().out == result.payload['table']


@pytest.mark.parametrize('argv', [
    ['check', 'missing.csv'],
    ['check', '--model', 'unknown', 'missing.csv'],
    ['simulate', '--beta', 'a,b'],
    ['fit', '--algorithm', 'mm', 'tests/data/table3.csv'],
])
def test_input_errors(argv):
    assert run(argv).exit_code == EXIT_INPUT


def test_malformed_table(tmp_path):
    bad = tmp_path / 'bad.csv'
    bad.write_text('x,1\n1,x,0\n')
    result = run(['check', str(bad)])
    assert result.exit_code == EXIT_INPUT
    assert 'error' in result.payload


def test_inconsistent_table(tmp_path):
    bad = tmp_path / 'bad.csv'
    bad.write_text('x,1,0\n1,x,1\n1,0,x\n')
    assert run(['check', '--trials', '1', str(bad)]).exit_code == EXIT_INPUT


@pytest.mark.parametrize('argv', [
    ['design', '--n', '1'],
    ['design', '--model', 'rasch', '--k', '1'],
    ['enumerate', '--facets', '--model', 'beta', '--n', '1'],
    ['simulate', '--beta', '0,0,0', '--reps', '50'],
    ['enumerate', '--vertices', '--n', '7'],
])
def test_parameter_errors(argv):
    assert run(argv).exit_code == EXIT_PARAMETER


def test_help_and_log_level(monkeypatch):
    monkeypatch.setenv('DEGSEQ_LOG', 'not-a-level')
    result = run(['--help'])
    assert result.exit_code == EXIT_OK
    assert result.payload is None
    assert run(['design', '--n', '3']).exit_code == EXIT_OK


@pytest.mark.parametrize('model, name', [('p1-zero', 'p1-zero'), ('p1-const', 'p1-constant'),
                                         ('p1-edge', 'p1-edge-dependent')])
def test_p1_variant_from_model_name(model, name):
    assert run(['design', '--model', model, '--n', '3']).payload['name'] == name
