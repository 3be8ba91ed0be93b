#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import json
import logging
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

import click
import numpy as np
import pandas as pd

from .asymptotics import check_corollary, check_theorem4, expected_degrees, mc_existence_probability
from .design import P1_ALIASES, design_for_model
from .errors import ConsistencyError, DegseqError, NonexistentMLE, ParameterError, ParseError, SizeError
from .estimation import extended_mle, fit_bradley_terry, fit_mle, fit_p1
from .geometry import (beta_check, enumerate_vertices_minkowski, facet_catalog, minkowski_groups, segment_groups,
                       split_certificate)
from .models import (P1Params, bt_existence, bt_lp_existence, describe_cone, generate_dyads, p1_dyad_probabilities,
                     p1_existence, parse_rasch, poisson_existence, rasch_existence)
from .survey import survey_beta, survey_bt, survey_p1, survey_rasch
from .tables import BetaParams, generate_directed, generate_graph, parse_table, read_integer_matrix

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_NONEXISTENT, EXIT_INPUT, EXIT_PARAMETER = 0, 1, 2, 3

P1_MODELS = sorted(P1_ALIASES)
CHECK_MODELS = ['beta', 'rasch', 'bt', 'poisson', 'poisson-undirected'] + P1_MODELS
DESIGN_MODELS = ['beta', 'cayley', 'cayley-reduced', 'poisson', 'bt', 'rasch'] + P1_MODELS


class CommandResult:
    """
    Outcome of one command line invocation.

    :ivar command: name of the subcommand
    :ivar payload: JSON serializable result
    :ivar exit_code: 0 success, 1 nonexistent MLE, 2 input error, 3 size or parameter error
    """
    def __init__(self, command: str, payload, exit_code: int = EXIT_OK):
        self.command = command
        self.payload = payload
        self.exit_code = exit_code

    def __repr__(self):
        return 'CommandResult(command={!r}, exit_code={})'.format(self.command, self.exit_code)


def _configure_logging():
    level = os.environ.get('DEGSEQ_LOG', 'WARNING').upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')


def _json_default(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.integer, np.bool_)):
        return value.item()
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError('{} is not JSON serializable'.format(type(value).__name__))


def _emit(payload, pretty: bool, frame: Optional[pd.DataFrame] = None):
    if pretty:
        if frame is None:
            frame = pd.Series({k: json.dumps(v, default=_json_default) if isinstance(v, (list, dict)) else v
                               for k, v in payload.items()}).to_frame('value')
        click.echo(frame.to_string())
    else:
        click.echo(json.dumps(payload, default=_json_default, indent=2))


def _floats(values: str) -> List[float]:
    try:
        return [float(v) for v in values.split(',') if v.strip()]
    except ValueError:
        raise click.BadParameter('expected comma separated numbers, got {!r}'.format(values))


def _mode(exact: bool) -> str:
    return 'exact' if exact else 'float'


def _read_trials(trials: Optional[int], trials_file: Optional[str]):
    if trials_file is not None:
        return read_integer_matrix(trials_file, allow_diagonal=True)
    return trials


def _verdict(command: str, payload: dict, pretty: bool, frame: pd.DataFrame = None) -> CommandResult:
    _emit(payload, pretty, frame)
    return CommandResult(command, payload, EXIT_OK if payload.get('exists', True) else EXIT_NONEXISTENT)


# options shared by the table commands
def _table_options(function):
    function = click.option('--pretty', is_flag=True, help='Human readable table instead of JSON')(function)
    function = click.option('--exact/--float', default=True, help='Rational or floating point LPs')(function)
    function = click.option('--format', 'table_format', type=click.Choice(['csv-matrix', 'json']),
                            default='csv-matrix', help='Format of the input table')(function)
    function = click.option('--trials-file', type=click.Path(exists=True), default=None,
                            help='CSV matrix of trials N_ij')(function)
    function = click.option('--trials', type=int, default=None, help='Number of trials N for every pair')(function)
    return function


@click.group()
def degseq():
    """Existence of maximum likelihood estimates for degree sequence network models."""
    _configure_logging()


@degseq.command()
@click.argument('table', type=click.Path(exists=True))
@click.option('--model', type=click.Choice(CHECK_MODELS), default='beta', help='Model of the table')
@click.option('--method', type=click.Choice(['lp', 'facets']), default='lp', help='Decision procedure (beta)')
@_table_options
def check(table: str, model: str, method: str, trials: int, trials_file: str, table_format: str, exact: bool,
          pretty: bool):
    """Decides whether the MLE exists and reports the co-facial set when it does not."""
    mode = _mode(exact)
    if model == 'beta':
        t = parse_table(table, table_format, 'beta', _read_trials(trials, trials_file))
        verdict = beta_check(t, method=method, mode=mode)
        payload = verdict.to_dict()
        if not verdict.exists and t.is_graph and t.n >= 4:
            split = split_certificate(t)
            if split is not None:
                payload['split'] = {'S': sorted(split.S), 'T': sorted(split.T)}
    elif model == 'rasch':
        payload = rasch_existence(parse_rasch(table), mode).to_dict()
    elif model == 'bt':
        t = parse_table(table, table_format, 'directed')
        payload = bt_existence(t).to_dict()
        payload['exists_lp'] = bt_lp_existence(t, mode)
    elif model.startswith('poisson'):
        t = parse_table(table, table_format, 'directed')
        exists, fs = poisson_existence(t, directed=model == 'poisson', mode=mode)
        payload = {'exists': exists, 'co_facial': [list(c) for c in fs.cofacial]}
    else:
        t = parse_table(table, table_format, 'dyad')
        payload = p1_existence(t, P1_ALIASES[model], mode).to_dict()
    return _verdict('check', payload, pretty)


@degseq.command()
@click.argument('table', type=click.Path(exists=True))
@click.option('--model', type=click.Choice(['beta', 'bt'] + P1_MODELS), default='beta', help='Model of the table')
@click.option('--extended', is_flag=True, help='Extended MLE when the statistic lies on the boundary (beta)')
@click.option('--algorithm', type=click.Choice(['newton', 'fixed-point', 'mm']), default='newton')
@click.option('--tol', type=float, default=1e-10, help='Tolerance on the moment equations')
@click.option('--max-iter', type=int, default=500, help='Iteration cap')
@_table_options
def fit(table: str, model: str, extended: bool, algorithm: str, tol: float, max_iter: int, trials: int,
        trials_file: str, table_format: str, exact: bool, pretty: bool):
    """Fits the MLE (or the extended MLE) and prints the estimates."""
    mode = _mode(exact)
    frame = None
    if model == 'beta':
        if algorithm == 'mm':
            raise click.BadParameter('the mm algorithm is only available for bt', param_hint='--algorithm')
        t = parse_table(table, table_format, 'beta', _read_trials(trials, trials_file))
        try:
            result = extended_mle(t, tol, max_iter, mode) if extended else fit_mle(t, tol, max_iter, algorithm,
                                                                                   mode=mode)
        except NonexistentMLE as e:
            raise NonexistentMLE('{}; use --extended'.format(e), beta_check(t, mode=mode).facial_set)
        labels = [str(i) for i in range(1, t.n + 1)]
        frame = pd.DataFrame(result.p_matrix(t.n), index=labels, columns=labels)
    elif model == 'bt':
        if algorithm == 'fixed-point':
            raise click.BadParameter('bt is fitted with newton or mm', param_hint='--algorithm')
        result = fit_bradley_terry(parse_table(table, table_format, 'directed'), tol, max_iter, algorithm)
    else:
        result = fit_p1(parse_table(table, table_format, 'dyad'), P1_ALIASES[model], tol, max_iter, mode)
    payload = result.to_dict()
    _emit(payload, pretty, frame)
    return CommandResult('fit', payload, EXIT_OK if result.exists else EXIT_NONEXISTENT)


@degseq.command('facial-set')
@click.argument('table', type=click.Path(exists=True))
@click.option('--model', type=click.Choice(['beta', 'rasch', 'poisson', 'poisson-undirected'] + P1_MODELS),
              default='beta', help='Model of the table')
@_table_options
def facial_set_command(table: str, model: str, trials: int, trials_file: str, table_format: str, exact: bool,
                       pretty: bool):
    """Facial set, co-facial set and certificate of the observed statistic."""
    mode = _mode(exact)
    if model == 'beta':
        t = parse_table(table, table_format, 'beta', _read_trials(trials, trials_file))
        fs = beta_check(t, mode=mode).facial_set
    elif model == 'rasch':
        fs = rasch_existence(parse_rasch(table), mode).facial_set
    elif model.startswith('poisson'):
        _, fs = poisson_existence(parse_table(table, table_format, 'directed'), model == 'poisson', mode)
    else:
        fs = p1_existence(parse_table(table, table_format, 'dyad'), P1_ALIASES[model], mode).facial_set
    payload = {'is_proper': False, 'co_facial': []} if fs is None else fs.to_dict()
    payload['exists'] = not payload['is_proper']
    return _verdict('facial-set', payload, pretty)


@degseq.command()
@click.option('--model', type=click.Choice(DESIGN_MODELS), default='cayley-reduced', help='Design matrix')
@click.option('--n', 'n_nodes', type=int, default=4, help='Number of nodes')
@click.option('--k', type=int, default=2, help='Subjects (rasch)')
@click.option('--l', type=int, default=2, help='Items (rasch)')
@click.option('--pretty', is_flag=True)
def design(model: str, n_nodes: int, k: int, l: int, pretty: bool):
    """Prints a design matrix as a labeled CSV."""
    matrix = design_for_model(model, n_nodes, k, l)
    frame = matrix.to_frame()
    click.echo(frame.to_string() if pretty else frame.to_csv())
    return CommandResult('design', {'name': matrix.name, 'rows': matrix.rows, 'cols': matrix.cols,
                                    'rank': matrix.rank, 'row_labels': list(matrix.row_labels),
                                    'entries': matrix.entries.tolist()})


@degseq.command('enumerate')
@click.option('--facets/--vertices', default=True, help='Facets of the cone or vertices of the polytope')
@click.option('--model', type=click.Choice(['beta', 'poisson', 'bt', 'rasch'] + P1_MODELS), default='beta')
@click.option('--n', 'n_nodes', type=int, default=4, help='Number of nodes')
@click.option('--k', type=int, default=2, help='Subjects (rasch)')
@click.option('--l', type=int, default=2, help='Items (rasch)')
@click.option('--exact/--float', default=True, help='Rational or floating point LPs (vertices)')
@click.option('--pretty', is_flag=True)
def enumerate_command(facets: bool, model: str, n_nodes: int, k: int, l: int, exact: bool, pretty: bool):
    """Facet or vertex enumeration of a model polytope."""
    if model == 'beta':
        if facets:
            payload = describe_cone(design_for_model('cayley-reduced', n_nodes)).to_dict()
            if n_nodes >= 4:
                payload['facet_inequalities'] = len(facet_catalog(n_nodes))
        else:
            vertices = enumerate_vertices_minkowski(segment_groups(n_nodes), _mode(exact)).generators
            payload = {'model': 'beta', 'vertex_count': len(vertices), 'vertices': [list(v) for v in vertices]}
    else:
        matrix = design_for_model(model, n_nodes, k, l)
        if facets:
            payload = describe_cone(matrix).to_dict()
        else:
            vertices = enumerate_vertices_minkowski(minkowski_groups(matrix), _mode(exact)).generators
            payload = {'model': matrix.name, 'vertex_count': len(vertices),
                       'vertices': [list(v) for v in vertices]}
    _emit(payload, pretty)
    return CommandResult('enumerate', payload)


@degseq.command()
@click.option('--model', type=click.Choice(['beta', 'bt', 'rasch'] + P1_MODELS), default='beta')
@click.option('--n', 'n_nodes', type=int, default=4, help='Number of nodes')
@click.option('--k', type=int, default=2, help='Subjects (rasch)')
@click.option('--l', type=int, default=2, help='Items (rasch)')
@click.option('--threads', type=int, default=os.cpu_count() or 1, help='Worker processes')
@click.option('--exact/--float', default=True, help='Rational or floating point LPs')
@click.option('--progress', is_flag=True, help='Show a progress bar')
@click.option('--pretty', is_flag=True)
def survey(model: str, n_nodes: int, k: int, l: int, threads: int, exact: bool, progress: bool, pretty: bool):
    """Decides existence for every table of the given size."""
    mode = _mode(exact)
    if model == 'beta':
        result = survey_beta(n_nodes, mode, threads, progress)
    elif model == 'bt':
        result = survey_bt(n_nodes, mode, threads, progress)
    elif model == 'rasch':
        result = survey_rasch(k, l, mode, threads, progress)
    else:
        result = survey_p1(n_nodes, P1_ALIASES[model], mode if exact else 'auto', threads, progress)
    payload = result.to_dict()
    _emit(payload, pretty)
    return CommandResult('survey', payload)


@degseq.command()
@click.option('--n', 'n_nodes', type=int, default=10, help='Number of nodes, used when --beta is a scalar')
@click.option('--N', 'n_trials', type=int, default=1, help='Trials per pair')
@click.option('--beta', default='0', help='Comma separated natural parameters, or one value for every node')
@click.option('--reps', type=int, default=2000, help='Monte Carlo replicates')
@click.option('--seed', type=int, default=0)
@click.option('--c', 'c', type=float, default=0.6, help='Exponent constant of the bounds')
@click.option('--C', 'C', type=float, default=None, help='Additive constant, also checks the sufficient conditions')
@click.option('--threads', type=int, default=os.cpu_count() or 1, help='Worker processes')
@click.option('--exact/--float', default=False, help='Exact LPs, or floating point with exact re-solves')
@click.option('--verdicts', type=click.Path(dir_okay=False, writable=True), default=None,
              help='CSV file for the per-replicate verdicts')
@click.option('--progress', is_flag=True, help='Show a progress bar')
@click.option('--pretty', is_flag=True)
def simulate(n_nodes: int, n_trials: int, beta: str, reps: int, seed: int, c: float, C: Optional[float],
             threads: int, exact: bool, verdicts: Optional[str], progress: bool, pretty: bool):
    """Monte Carlo estimate of the existence probability of the beta MLE."""
    values = _floats(beta)
    if len(values) == 1:
        values = values * n_nodes
    if len(values) < 3:
        raise ParameterError('At least 3 nodes are required, got {}'.format(len(values)))
    params = BetaParams(values)
    report = mc_existence_probability(params, n_trials, reps, seed, c, threads, 'exact' if exact else 'auto',
                                      progress)
    payload = report.to_dict()
    if C is not None:
        d_bar = expected_degrees(params)
        for name, conditions in (('theorem', check_theorem4), ('corollary', check_corollary)):
            try:
                payload[name] = conditions(d_bar, params.n, n_trials, c, C, seed=seed).to_dict()
            except ParameterError as e:
                payload[name] = {'error': str(e)}
    if verdicts is not None:
        report.verdicts_frame().to_csv(verdicts, index=False)
    _emit(payload, pretty)
    return CommandResult('simulate', payload)


@degseq.command()
@click.option('--model', type=click.Choice(['beta', 'poisson'] + P1_MODELS), default='beta')
@click.option('--n', 'n_nodes', type=int, default=4, help='Number of nodes, used when parameters are scalars')
@click.option('--N', 'n_trials', type=int, default=1, help='Trials per pair (beta)')
@click.option('--beta', default='0', help='Natural parameters (beta) or receiver effects (p1)')
@click.option('--alpha', default='0', help='Row effects (poisson) or sender effects (p1)')
@click.option('--gamma', default='0', help='Column effects (poisson)')
@click.option('--theta', type=float, default=0., help='Density (p1)')
@click.option('--rho', type=float, default=0., help='Reciprocity (p1)')
@click.option('--seed', type=int, default=0)
@click.option('--output', type=click.Path(dir_okay=False, writable=True), default=None,
              help='File for the table, stdout otherwise')
def generate(model: str, n_nodes: int, n_trials: int, beta: str, alpha: str, gamma: str, theta: float, rho: float,
             seed: int, output: Optional[str]):
    """Samples a table from a model and writes it in the format read by check and fit."""

    def vector(values: str) -> List[float]:
        v = _floats(values)
        return v * n_nodes if len(v) == 1 else v

    if model == 'beta':
        table = generate_graph(BetaParams(vector(beta)), n_trials, seed)
    elif model == 'poisson':
        table = generate_directed(vector(alpha), vector(gamma), seed)
    else:
        variant = P1_ALIASES[model]
        params = P1Params(theta, vector(alpha), vector(beta), rho, variant=variant)
        table = generate_dyads(p1_dyad_probabilities(params), seed)
    text = table.to_csv()
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, 'w') as f:
            f.write(text)
    return CommandResult('generate', {'model': model, 'n': table.n, 'table': text})


def _failure(command: str, message: str, exit_code: int, payload: dict = None) -> CommandResult:
    click.echo('Error: {}'.format(message), err=True)
    return CommandResult(command, payload or {'error': message}, exit_code)


def run(argv: Sequence[str]) -> CommandResult:
    """
    Runs one command and maps failures to exit codes.

    :param argv: arguments without the program name, e.g. ``['check', '--model', 'beta', 'table.csv']``
    :return: ``CommandResult``
    """
    argv = list(argv)
    command = argv[0] if argv else ''
    try:
        result = degseq.main(args=argv, prog_name='degseq', standalone_mode=False)
    except click.ClickException as e:
        return _failure(command, e.format_message(), EXIT_INPUT)
    except click.Abort:
        return _failure(command, 'aborted', EXIT_INPUT)
    except NonexistentMLE as e:
        payload = {'exists': False, 'error': str(e)}
        if e.facial_set is not None:
            payload['co_facial'] = [list(c) for c in e.facial_set.cofacial]
        click.echo(json.dumps(payload, default=_json_default, indent=2))
        return CommandResult(command, payload, EXIT_NONEXISTENT)
    except (ParseError, ConsistencyError) as e:
        return _failure(command, str(e), EXIT_INPUT)
    except (SizeError, ParameterError, ValueError) as e:
        return _failure(command, str(e), EXIT_PARAMETER)
    except DegseqError as e:
        logger.error('%s failed: %s', command, e)
        return _failure(command, str(e), EXIT_PARAMETER)
    if isinstance(result, CommandResult):
        return result
    # --help and bare invocations return the exit code
    return CommandResult(command, None, int(result or 0))


def main():
    sys.exit(run(sys.argv[1:]).exit_code)


if __name__ == '__main__':
    main()
