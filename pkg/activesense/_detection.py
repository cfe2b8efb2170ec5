'''
Decisions from energy observations.

glrt_decide runs the per-test generalized likelihood-ratio test, the
majority rule turns test outcomes into per-resource declarations, and the
Poisson-Binomial CDF gives the resulting per-resource error probabilities.
exact_group_posterior is the enumeration benchmark that decides each member
from its posterior marginal.
'''
import itertools
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from activesense._exceptions import DetectionError, ValidationError
from activesense._group import cycle_threshold, group_error_probs
from activesense._misc import majority_count
from activesense._model import Mode, null_mean


@dataclass(frozen=True)
class PbdParams:
    probs: Tuple[float, ...]

    def __post_init__(self):
        for j, p in enumerate(self.probs):
            if not 0.0 <= p <= 1.0:
                raise ValidationError("probability {0} = {1} outside [0, 1]".format(j, p), index=j)


def log_likelihood_ratio(y, theta0, theta_min):
    '''log of max_{theta >= theta_min} f_theta(y) / f_theta0(y); works on arrays.'''
    y = np.asarray(y, dtype=float)
    below = np.log(theta0 / theta_min) + y * (1.0 / theta0 - 1.0 / theta_min)
    safe = np.maximum(y, theta_min)
    above = np.log(theta0 / safe) + safe / theta0 - 1.0
    return np.where(y <= theta_min, below, above)


def _test_means(cycle, ensemble):
    members = tuple(getattr(cycle, "members", cycle))
    theta0 = null_mean(members, ensemble)
    return theta0, theta0 + ensemble.phi_min


def glrt_decide(y, cycle, ensemble):
    '''1 (at least one member busy) iff the GLR of y reaches the cycle threshold.'''
    theta0, theta_min = _test_means(cycle, ensemble)
    gamma = cycle.threshold
    if math.isinf(gamma):
        return 0
    return int(log_likelihood_ratio(y, theta0, theta_min) >= math.log(gamma))


def energy_threshold(theta0, theta_min, gamma):
    '''Energy level at which the GLRT switches to H1.

    Below theta_min the test is the simple one against theta_min, whose
    threshold is ln(gamma theta_min / theta_0) / (1/theta_0 - 1/theta_min);
    above it the maximised alternative is theta = y and the level is found
    numerically.
    '''
    if math.isinf(gamma):
        return math.inf
    log_gamma = math.log(gamma)
    if log_gamma <= math.log(theta0 / theta_min):
        return 0.0
    simple = (log_gamma + math.log(theta_min / theta0)) / (1.0 / theta0 - 1.0 / theta_min)
    if simple <= theta_min:
        return simple

    def excess(y):
        return math.log(theta0 / y) + y / theta0 - 1.0 - log_gamma

    upper = 2.0 * theta_min
    while excess(upper) < 0.0:
        upper *= 2.0
    return brentq(excess, theta_min, upper, xtol=1e-12 * theta_min)


def majority_decision(outcomes):
    outcomes = list(outcomes)
    if not outcomes:
        raise DetectionError("no test covers this resource")
    return int(sum(outcomes) >= majority_count(len(outcomes)))


def pbd_pmf(probs):
    '''Probability mass of the number of successes, by repeated convolution.'''
    pmf = np.array([1.0])
    for p in probs:
        following = np.zeros(len(pmf) + 1)
        following[:-1] = pmf * (1.0 - p)
        following[1:] += pmf * p
        pmf = following
    return pmf


def pbd_cdf(k, params):
    '''P(X <= k) for X a sum of independent Bernoulli(p_j).'''
    probs = params.probs if isinstance(params, PbdParams) else tuple(PbdParams(tuple(params)).probs)
    if k < 0:
        return 0.0
    if k >= len(probs):
        return 1.0
    return float(min(np.sum(pbd_pmf(probs)[:k + 1]), 1.0))


def _test_sets(plan_or_matrix):
    cycles = getattr(plan_or_matrix, "cycles", None)
    if cycles is not None:
        return [tuple(c.members) for c in cycles], [c.threshold for c in cycles]
    if isinstance(plan_or_matrix, np.ndarray) and plan_or_matrix.ndim == 2:
        return [tuple(int(i) for i in np.flatnonzero(row)) for row in plan_or_matrix], None
    return [tuple(getattr(t, "members", t)) for t in plan_or_matrix], None


def resource_error_probs_gt(plan_or_matrix, gammas, i, ensemble):
    '''Per-resource (alpha_i, beta_i) under the majority rule over the tests covering i.

    plan_or_matrix -- a SensingPlan, a binary kappa x N matrix, or a list of member sets.
    gammas -- per-test thresholds; None takes them from the plan, or from
              cycle_threshold for bare member sets.

    Tests must be conditionally independent given s_i (no two tests share more
    than one sub-band). The missed-detection term uses the worst-case bound.
    '''
    tests, planned = _test_sets(plan_or_matrix)
    if gammas is None:
        gammas = planned if planned is not None else [cycle_threshold(t, ensemble) for t in tests]
    pi0, pi1 = [], []
    for members, gamma in zip(tests, gammas):
        if i not in members:
            continue
        theta0, theta_min = _test_means(members, ensemble)
        alpha, beta_max = group_error_probs(theta_min / theta0, gamma)
        others_empty = float(np.prod([ensemble.prior_empty[j] for j in members if j != i]))
        pi0.append(min((1.0 - others_empty) * (1.0 - beta_max) + alpha * others_empty, 1.0))
        pi1.append(1.0 - beta_max)
    if not pi0:
        raise DetectionError("resource {0} is not covered by any test".format(i))
    k = majority_count(len(pi0)) - 1
    return 1.0 - pbd_cdf(k, pi0), pbd_cdf(k, pi1)


def expected_utility_of_plan(plan_or_matrix, gammas, ensemble, K=None):
    '''Expected utility of any sensing structure through the per-resource errors.

    Resources no test covers take the null action and add nothing.
    '''
    K = ensemble.horizon if K is None else K
    tests, _ = _test_sets(plan_or_matrix)
    covered = sorted(set(i for t in tests for i in t))
    total = []
    for i in covered:
        alpha, beta = resource_error_probs_gt(plan_or_matrix, gammas, i, ensemble)
        omega, r, rho = ensemble.prior_empty[i], ensemble.reward[i], ensemble.penalty[i]
        if ensemble.mode is Mode.SS:
            total.append(omega * r * (1.0 - alpha) - (1.0 - omega) * rho * beta)
        else:
            total.append((1.0 - omega) * r * (1.0 - beta) - omega * rho * alpha)
    return (K - len(tests)) * math.fsum(total)


def group_state_posterior(y, members, ensemble, signal_power=None):
    '''Posterior over the 2^|C| joint states of the members given one observation.

    signal_power -- per-resource power assumed under s_i = 1; phi_min by default.
    Returns (states, posterior) with states a 2^|C| x |C| 0/1 array.
    '''
    members = tuple(getattr(members, "members", members))
    states = np.array(list(itertools.product((0, 1), repeat=len(members))), dtype=int)
    omega = np.array([ensemble.prior_empty[i] for i in members])
    noise = np.array([ensemble.noise_power[i] for i in members])
    if signal_power is None:
        power = np.full(len(members), ensemble.phi_min)
    else:
        power = np.array([signal_power[i] for i in members], dtype=float)
    with np.errstate(divide="ignore"):
        log_prior = np.where(states == 1, np.log1p(-omega), np.log(omega)).sum(axis=1)
    theta = (states * power + noise).sum(axis=1)
    log_joint = log_prior - np.log(theta) - y / theta
    return states, np.exp(log_joint - logsumexp(log_joint))


def exact_group_posterior(y, cycle, ensemble, signal_power=None):
    '''P(s_i = 1 | y) for every member of the cycle.'''
    states, posterior = group_state_posterior(y, cycle, ensemble, signal_power)
    return posterior @ states


def map_decisions(marginals, members, ensemble):
    '''Bayes declarations from posterior busy probabilities.

    SS: act on (declare empty) iff P(busy) < r / (r + |rho|).
    R: act on (declare busy) iff P(busy) > |rho| / (r + |rho|).
    '''
    members = list(getattr(members, "members", members))
    r = ensemble.reward[members]
    rho = ensemble.penalty[members]
    marginals = np.asarray(marginals, dtype=float)
    if ensemble.mode is Mode.SS:
        return np.where(marginals < r / (r + rho), 0, 1)
    return np.where(marginals > rho / (r + rho), 1, 0)
