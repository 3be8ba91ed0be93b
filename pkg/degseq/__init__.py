r"""


Tables and sufficient statistics
--------------------------------
.. currentmodule:: degseq.tables

.. autosummary::
    EdgeCountTable
    DirectedCountTable
    DyadTable
    DegreeStats
    BetaParams
    degree_stats
    lift_table
    parse_table
    read_integer_matrix
    generate_graph
    generate_directed


Design matrices
---------------
.. currentmodule:: degseq.design

.. autosummary::
    DesignMatrix
    beta_design
    cayley_design
    poisson_design
    bt_design
    rasch_design
    p1_design
    design_for_model


Linear programming
------------------
.. currentmodule:: degseq.lp

.. autosummary::
    LinearProgram
    LpSolution
    solve_lp
    independent_rows
    exact_rank


Polytope geometry
-----------------
.. currentmodule:: degseq.geometry

.. autosummary::
    FacetInequality
    FacialSet
    BetaCheck
    p_family
    facet_catalog
    mp_boundary_check
    interior_lp_check
    facial_set
    beta_check
    split_certificate
    enumerate_facets
    design_facets
    enumerate_vertices_minkowski


Estimation
----------
.. currentmodule:: degseq.estimation

.. autosummary::
    FitResult
    fit_mle
    extended_mle
    fit_bradley_terry
    fit_p1
    log_likelihood
    loglik_gradient
    moment_residual


Model zoo
---------
.. currentmodule:: degseq.models

.. autosummary::
    RaschTable
    haberman_certificate
    rasch_existence
    poisson_rasch_existence
    bt_existence
    bt_lp_existence
    bt_facet_count
    poisson_facial_catalog
    poisson_existence
    poisson_existence_bound
    P1Params
    p1_dyad_probabilities
    generate_dyads
    p1_existence
    describe_cone
    describe_p1_cone


Existence bounds
----------------
.. currentmodule:: degseq.asymptotics

.. autosummary::
    check_theorem4
    check_corollary
    check_cds_condition
    cds_dominance_gap
    mc_existence_probability


Exhaustive surveys
------------------
.. currentmodule:: degseq.survey

.. autosummary::
    SurveyResult
    survey_beta
    survey_bt
    survey_rasch
    survey_p1


Config and errors
-----------------
.. currentmodule:: degseq.config

.. autosummary::
    Params
    CONST


----

"""

_TABLES = [
    'EdgeCountTable',
    'DirectedCountTable',
    'DyadTable',
    'DegreeStats',
    'BetaParams',
    'degree_stats',
    'lift_table',
    'parse_table',
    'read_integer_matrix',
    'generate_graph',
    'generate_directed'
]

_DESIGN = [
    'DesignMatrix',
    'beta_design',
    'cayley_design',
    'poisson_design',
    'bt_design',
    'rasch_design',
    'p1_design',
    'design_for_model'
]

_LP = [
    'LinearProgram',
    'LpSolution',
    'solve_lp',
    'independent_rows',
    'exact_rank'
]

_GEOMETRY = [
    'FacetInequality',
    'FacialSet',
    'BetaCheck',
    'p_family',
    'facet_catalog',
    'mp_boundary_check',
    'interior_lp_check',
    'facial_set',
    'beta_check',
    'split_certificate',
    'enumerate_facets',
    'design_facets',
    'enumerate_vertices_minkowski'
]

_ESTIMATION = [
    'FitResult',
    'fit_mle',
    'extended_mle',
    'fit_bradley_terry',
    'fit_p1',
    'log_likelihood',
    'loglik_gradient',
    'moment_residual'
]

_MODELS = [
    'RaschTable',
    'haberman_certificate',
    'rasch_existence',
    'poisson_rasch_existence',
    'bt_existence',
    'bt_lp_existence',
    'bt_facet_count',
    'poisson_facial_catalog',
    'poisson_existence',
    'poisson_existence_bound',
    'P1Params',
    'p1_dyad_probabilities',
    'generate_dyads',
    'p1_existence',
    'describe_cone',
    'describe_p1_cone'
]

_ASYMPTOTICS = [
    'check_theorem4',
    'check_corollary',
    'check_cds_condition',
    'cds_dominance_gap',
    'mc_existence_probability'
]

_SURVEY = [
    'SurveyResult',
    'survey_beta',
    'survey_bt',
    'survey_rasch',
    'survey_p1'
]

_CONFIG = [
    'Params',
    'CONST'
]

__all__ = _TABLES + _DESIGN + _LP + _GEOMETRY + _ESTIMATION + _MODELS + _ASYMPTOTICS + _SURVEY + _CONFIG

from degseq.config import *
from degseq.errors import *
from degseq.tables import *
from degseq.design import *
from degseq.lp import *
from degseq.geometry import *
from degseq.estimation import *
from degseq.models import *
from degseq.asymptotics import *
from degseq.survey import *
