import os
import re
from collections import OrderedDict

import numpy as np

import activesense._exceptions as exceptions
import activesense.policy_names as policy_names
from activesense._abstract_policy import AbstractPolicy
from activesense._baselines import (
    lambda_max,
    lasso_solve,
    ml_problem,
    mwc_matrix,
    mwc_observations,
    mwc_problem,
    random_dense_matrix,
    support_decisions,
)
from activesense._detection import exact_group_posterior, map_decisions
from activesense._direct import di_plan, di_threshold
from activesense._group import MAX_TEST_SIZE, greedy_plan
from activesense._model import null_decision


class DirectInspection(AbstractPolicy):
    name = policy_names.DI

    def is_available(self):
        return True

    def _plan(self, ensemble):
        return di_plan(ensemble)

    def _execute(self, ensemble, plan, truth, rng):
        observations, positive = self._sense(ensemble, plan, truth, rng)
        decision = self._declare(ensemble, plan, positive)
        return self._record(ensemble, plan, truth, observations, positive, decision)


class GroupTesting(AbstractPolicy):
    name = policy_names.GT

    def __init__(self, L=2):
        self.L = L

    @property
    def label(self):
        return "{0}({1})".format(self.name, self.L)

    def with_size(self, L):
        return type(self)(L)

    def is_available(self):
        return 1 <= self.L <= MAX_TEST_SIZE

    def _plan(self, ensemble):
        return greedy_plan(ensemble, L=self.L)

    def _execute(self, ensemble, plan, truth, rng):
        observations, positive = self._sense(ensemble, plan, truth, rng)
        decision = self._declare(ensemble, plan, positive)
        return self._record(ensemble, plan, truth, observations, positive, decision)


class MapBenchmark(GroupTesting):
    '''
    Greedy GT plan decided member by member from the exact posterior.

    true_power -- weigh busy states with the realized powers (the benchmark);
                  False uses phi_min for every busy member, a realizable detector.
    '''
    name = policy_names.MAP

    def __init__(self, L=2, true_power=True):
        GroupTesting.__init__(self, L)
        self.true_power = true_power

    def with_size(self, L):
        return type(self)(L, true_power=self.true_power)

    def _execute(self, ensemble, plan, truth, rng):
        observations, _ = self._sense(ensemble, plan, truth, rng)
        power = None
        if self.true_power:
            power = np.where(truth.occupied, truth.signal_power, ensemble.phi_min)
        decision = np.full(ensemble.n_resources, null_decision(ensemble), dtype=int)
        positive = np.zeros(plan.kappa, dtype=int)
        for k, (y, cycle) in enumerate(zip(observations, plan.cycles)):
            marginals = exact_group_posterior(y, cycle, ensemble, signal_power=power)
            members = list(cycle.members)
            decision[members] = map_decisions(marginals, members, ensemble)
            positive[k] = int(decision[members].any())
        return self._record(ensemble, plan, truth, observations, positive, decision)


class DenseLasso(AbstractPolicy):
    '''
    Linearized maximum-likelihood recovery on a dense random matrix.

    The matrix has as many rows as the greedy GT plan has tests and mixes all
    the resources that plan covers; every row is observed as the mean of
    `averaging` energy samples. lam=None uses lambda_i = gamma_i.
    '''
    name = policy_names.LASSO

    def __init__(self, L=2, averaging=10, lam=None, threshold=None, tol=1e-10, max_iters=10000):
        self.L = L
        self.averaging = averaging
        self.lam = lam
        self.threshold = threshold
        self.tol = tol
        self.max_iters = max_iters

    def with_size(self, L):
        return type(self)(L, self.averaging, self.lam, self.threshold, self.tol, self.max_iters)

    def is_available(self):
        return 1 <= self.L <= MAX_TEST_SIZE and self.averaging >= 1

    def _plan(self, ensemble):
        return greedy_plan(ensemble, L=self.L)

    def weights(self, ensemble, covered):
        weights = np.zeros(ensemble.n_resources)
        if self.lam is None:
            weights[covered] = [di_threshold(i, ensemble) for i in covered]
        else:
            weights[covered] = self.lam
        return weights

    def estimate(self, ensemble, plan, truth, rng):
        '''(observations, phi_hat) for one trial; None for an empty plan.'''
        covered = plan.covered()
        if not covered:
            return None
        matrix = random_dense_matrix(plan.kappa, covered, ensemble.n_resources, rng)
        observations = mwc_observations(truth, matrix, self.averaging, rng, ensemble)
        problem = ml_problem(observations, matrix, self.weights(ensemble, covered), ensemble.noise_power)
        phi_hat = lasso_solve(problem, tol=self.tol, max_iters=self.max_iters, raise_on_failure=False)
        return observations, phi_hat

    def _execute(self, ensemble, plan, truth, rng):
        covered = plan.covered()
        sensed = np.zeros(ensemble.n_resources, dtype=bool)
        sensed[covered] = True
        estimate = self.estimate(ensemble, plan, truth, rng)
        if estimate is None:
            observations, phi_hat = np.zeros(0), np.zeros(ensemble.n_resources)
        else:
            observations, phi_hat = estimate
        decision = support_decisions(phi_hat, ensemble, covered=covered, threshold=self.threshold)
        return self._record(ensemble, plan, truth, observations, np.zeros(0, dtype=int), decision, sensed)


class MwcBaseline(AbstractPolicy):
    '''
    Covariance-system recovery with a multichannel front end mixing every resource.

    The observation budget is kappa (tests of the greedy GT plan) times
    `multiplier` samples per channel; the data term is unweighted and
    lambda is the same for every resource.
    '''
    name = policy_names.MWC

    def __init__(self, L=2, channels=30, multiplier=1, lam=1.0, threshold=None, tol=1e-10, max_iters=10000):
        self.L = L
        self.channels = channels
        self.multiplier = multiplier
        self.lam = lam
        self.threshold = threshold
        self.tol = tol
        self.max_iters = max_iters

    def with_size(self, L):
        return type(self)(L, self.channels, self.multiplier, self.lam, self.threshold, self.tol, self.max_iters)

    def is_available(self):
        return 1 <= self.L <= MAX_TEST_SIZE and self.channels >= 1 and self.multiplier >= 1

    def _plan(self, ensemble):
        return greedy_plan(ensemble, L=self.L)

    def num_samples(self, plan):
        return max(plan.kappa, 1) * self.multiplier

    def observe(self, ensemble, plan, truth, rng):
        '''(matrix, z) for one trial.'''
        matrix = mwc_matrix(min(self.channels, ensemble.n_resources), ensemble.n_resources, rng)
        return matrix, mwc_observations(truth, matrix, self.num_samples(plan), rng, ensemble)

    def lambda_scale(self, ensemble, matrix, observations):
        return lambda_max(mwc_problem(observations, matrix, 0.0, ensemble.noise_power))

    def solve(self, ensemble, matrix, observations, lam, init=None):
        problem = mwc_problem(observations, matrix, lam, ensemble.noise_power)
        return lasso_solve(problem, tol=self.tol, max_iters=self.max_iters, raise_on_failure=False, init=init)

    def _execute(self, ensemble, plan, truth, rng):
        matrix, observations = self.observe(ensemble, plan, truth, rng)
        phi_hat = self.solve(ensemble, matrix, observations, self.lam)
        decision = support_decisions(phi_hat, ensemble, threshold=self.threshold)
        sensed = np.ones(ensemble.n_resources, dtype=bool)
        return self._record(ensemble, plan, truth, observations, np.zeros(0, dtype=int), decision, sensed)


def register(name, policy):
    '''Register a sensing policy.'''
    _policies.append((name, policy))


def get(name=None):
    """
    Return a sensing policy.
    If name is specified, return that policy; GT(3) style names set the test size.
    """
    if name is None:
        return get_from_environment() or _find_available_policy()
    return _find_policy_by_name(name)


def policies():
    """return a dictionary of all registered sensing policies."""
    return OrderedDict(_policies)


def get_from_environment():
    '''
        Return the policy named in the ACTIVESENSE_POLICY environment variable.
        If ACTIVESENSE_POLICY is empty or invalid, return None.
    '''
    name = os.environ.get("ACTIVESENSE_POLICY", "")
    if not name:
        return None

    try:
        return _find_policy_by_name(name)
    except exceptions.PolicyUnavailableError:
        return None


def _find_available_policy():
    for _, policy in _policies:
        if policy.is_available():
            return policy
    raise exceptions.PolicyUnavailableError("Could not find an available sensing policy.")


_NAME = re.compile(r"^\s*([A-Za-z]+)\s*(?:\(\s*(\d+)\s*\))?\s*$")


def _find_policy_by_name(name):
    match = _NAME.match(name)
    if match is None:
        raise exceptions.PolicyUnavailableError("{name} is not a policy name".format(name=name))
    base, size = match.groups()
    for policy_name, policy in _policies:
        if policy_name.lower() == base.lower():
            break
    else:
        raise exceptions.PolicyUnavailableError("{name} policy is not defined".format(name=name))

    if size is not None:
        policy = policy.with_size(int(size))
    if not policy.is_available():
        raise exceptions.PolicyUnavailableError(
            "{name} policy is not available with these settings".format(name=policy.label))
    return policy


_policies = []

register(policy_names.DI,    DirectInspection())
register(policy_names.GT,    GroupTesting(2))
register(policy_names.MAP,   MapBenchmark(2))
register(policy_names.LASSO, DenseLasso(2))
register(policy_names.MWC,   MwcBaseline(2))
