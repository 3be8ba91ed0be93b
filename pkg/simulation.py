#!/usr/bin/env python
__author__ = "solivr"
__license__ = "GPL"

import json
import os

from sacred import Experiment, SETTINGS

from degseq.asymptotics import check_corollary, check_theorem4, expected_degrees, mc_existence_probability
from degseq.config import Params
from degseq.errors import ParameterError
from degseq.tables import BetaParams

SETTINGS.CONFIG.READ_ONLY_CONFIG = False

ex = Experiment('degseq-existence')

ex.add_config('config.json')


@ex.automain
def simulation(_config: dict, _log):
    parameters = Params(**_config)
    beta = BetaParams(parameters.beta_vector)

    report = mc_existence_probability(beta,
                                      N=parameters.n_trials,
                                      replicates=parameters.replicates,
                                      seed=parameters.seed,
                                      c=parameters.c,
                                      threads=parameters.threads,
                                      mode=parameters.lp_mode,
                                      progress=True)
    results = report.to_dict()
    _log.info('existence rate %.4f +- %.4f over %d replicates', report.exist_rate, report.stderr, report.replicates)

    d_bar = expected_degrees(beta)
    for name, checker in [('theorem', check_theorem4), ('corollary', check_corollary)]:
        try:
            conditions = checker(d_bar, beta.n, parameters.n_trials, parameters.c, parameters.C,
                                 cap=parameters.exhaustive_cap, sample_pairs=parameters.sample_pairs,
                                 seed=parameters.seed)
        except ParameterError as e:
            _log.warning('%s conditions not evaluated: %s', name, e)
            continue
        results[name] = conditions.to_dict()
        _log.info('%s conditions hold: %s (bound %.4f)', name, conditions.holds, conditions.bound)
        ex.log_scalar('{}_holds'.format(name), int(conditions.holds))

    ex.log_scalar('exist_rate', report.exist_rate)

    if parameters.output_dir:
        os.makedirs(parameters.output_dir, exist_ok=True)
        # export config and report in output dir
        with open(os.path.join(parameters.output_dir, 'config.json'), 'w') as file:
            json.dump(parameters.to_dict(), file)
        with open(os.path.join(parameters.output_dir, 'report.json'), 'w') as file:
            json.dump(results, file, indent=2, default=str)
        if parameters.save_verdicts:
            report.verdicts_frame().to_csv(os.path.join(parameters.output_dir, 'verdicts.csv'), index=False)

    return results
