#!/usr/bin/env python3
# -*- coding: ascii -*-
'''
Plan and simulate active sub-Nyquist spectrum sensing.

PyActiveSense decides which sub-bands to observe, alone or mixed into group
tests, within a horizon of K slots, scores the plan in closed form and checks
it by Monte-Carlo simulation of the energy detector.

A short example:

>>> import activesense
>>> ensemble = activesense.validate_ensemble(
...     prior_empty=[0.9, 0.9], reward=[1, 1], penalty=[19, 19],
...     noise_power=[1, 1], phi_min=10.0, mode="SS", horizon=3)
>>> plan = activesense.greedy_plan(ensemble, L=2)
>>> [cycle.members for cycle in plan.cycles]
[(0, 1)]
>>> round(plan.expected_utility, 4)
0.9518
>>> round(activesense.di_plan(ensemble).expected_utility, 4)
0.9289
'''
from activesense._exceptions import (
    Error,
    ValidationError,
    PlanningError,
    DetectionError,
    ConvergenceError,
    OracleLimitError,
    PolicyUnavailableError,
    ExperimentError,
)

import activesense._policies
from activesense._abstract_policy import AbstractPolicy
from activesense._baselines import (
    DenseSensingMatrix,
    LassoProblem,
    baseline_detect_and_utility,
    lambda_max,
    lasso_objective,
    lasso_solve,
    ml_problem,
    mwc_matrix,
    mwc_observations,
    mwc_problem,
    random_dense_matrix,
)
from activesense._config import (
    ExperimentConfig,
    draw_ensemble,
    dump_config,
    get_preset,
    load_config,
    presets,
)
from activesense._detection import (
    PbdParams,
    energy_threshold,
    exact_group_posterior,
    expected_utility_of_plan,
    glrt_decide,
    log_likelihood_ratio,
    majority_decision,
    map_decisions,
    pbd_cdf,
    resource_error_probs_gt,
)
from activesense._direct import DiAssessment, di_assess, di_error_probs, di_plan, di_threshold, di_unit_utility
from activesense._group import (
    CycleCandidate,
    PenaltyConfig,
    approximation_factor,
    cycle_threshold,
    cycle_unit_utility,
    enumerate_candidates,
    greedy_plan,
    group_error_probs,
    penalized_objective,
    plan_expected_utility,
)
from activesense._model import (
    GroundTruth,
    Mode,
    ResourceEnsemble,
    SensingPlan,
    TestCycle,
    TrialRecord,
    draw_ground_truth,
    make_ground_truth,
    realized_utility,
    sample_observation,
    theta_of,
    validate_ensemble,
)
from activesense._policies import DenseLasso, DirectInspection, GroupTesting, MapBenchmark, MwcBaseline
from activesense._simulation import PolicySummary, SweepRow, monte_carlo, roc, run_trial, sweep, write_csv


__all__ = """
    get register policies get_from_environment
    AbstractPolicy DirectInspection GroupTesting MapBenchmark DenseLasso MwcBaseline
    Mode ResourceEnsemble GroundTruth TestCycle SensingPlan TrialRecord
    validate_ensemble make_ground_truth draw_ground_truth theta_of sample_observation realized_utility
    DiAssessment di_threshold di_error_probs di_unit_utility di_assess di_plan
    CycleCandidate PenaltyConfig group_error_probs cycle_threshold cycle_unit_utility
    enumerate_candidates greedy_plan plan_expected_utility penalized_objective approximation_factor
    PbdParams log_likelihood_ratio glrt_decide energy_threshold majority_decision pbd_cdf
    resource_error_probs_gt expected_utility_of_plan exact_group_posterior map_decisions
    DenseSensingMatrix LassoProblem lambda_max lasso_objective lasso_solve ml_problem mwc_problem
    random_dense_matrix mwc_matrix mwc_observations baseline_detect_and_utility
    ExperimentConfig load_config dump_config get_preset presets draw_ensemble
    PolicySummary SweepRow run_trial monte_carlo sweep roc write_csv
    Error ValidationError PlanningError DetectionError ConvergenceError
    OracleLimitError PolicyUnavailableError ExperimentError
""".split()


register = activesense._policies.register
get = activesense._policies.get
policies = activesense._policies.policies
get_from_environment = activesense._policies.get_from_environment
