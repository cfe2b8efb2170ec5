'''
Group Testing: a test mixes up to L sub-bands and decides between "all
members empty" and "at least one member busy".

Cycle utilities use the worst-case missed-detection bound (every busy state
is treated as if theta were theta_min), which groups the 2^|C| joint states
into the all-empty state and the rest. For |C| = 2 the closed forms below are
the pairwise edge utility and threshold; for |C| = 1 they are the direct
inspection ones.
'''
from __future__ import division

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from activesense._direct import di_threshold
from activesense._exceptions import PlanningError, ValidationError
from activesense._misc import exact_sum
from activesense._model import Mode, SensingPlan, TestCycle, null_mean

log = logging.getLogger(__name__)

# candidate enumeration is O(N^L); larger tests need allow_large=True
MAX_TEST_SIZE = 4


@dataclass(frozen=True)
class CycleCandidate:
    members: Tuple[int, ...]
    theta0: float
    theta_min: float
    ratio: float
    gamma: float
    alpha: float
    beta_max: float
    unit_utility: float

    def as_cycle(self):
        return TestCycle(members=self.members, threshold=self.gamma, alpha=self.alpha,
                         beta_max=self.beta_max, unit_utility=self.unit_utility)


@dataclass(frozen=True)
class PenaltyConfig:
    '''Weight M of the degree penalty sum_i Upsilon(deg(i)).'''
    weight: float

    @classmethod
    def for_ensemble(cls, ensemble, K, L):
        best = max(c.unit_utility for c in enumerate_candidates(ensemble, L, allow_large=True))
        return cls(weight=K * best * (1.0 + 1e-6) if best > 0.0 else 1e-6)


def upsilon(degree):
    '''Penalty for a node covered by `degree` cycles: max(degree - 1, 0).'''
    return max(degree - 1, 0)


def _mean_ratio(members, ensemble):
    theta0 = null_mean(members, ensemble)
    return theta0, theta0 + ensemble.phi_min


def group_error_probs(candidate, gamma):
    '''False-alarm probability and missed-detection bound of a group test.

    candidate -- a CycleCandidate, or directly the ratio theta_min / theta_0.
    gamma -- likelihood-ratio threshold; math.inf means "never positive".
    '''
    ratio = float(getattr(candidate, "ratio", candidate))
    if not ratio > 1.0:
        raise ValidationError("theta_min / theta_0 = {0} must exceed 1".format(ratio), bound=1.0)
    if not gamma > 0.0:
        raise ValidationError("threshold {0} must be positive".format(gamma), bound=0.0)
    if math.isinf(gamma):
        return 0.0, 1.0
    if gamma * ratio <= 1.0:
        return 1.0, 0.0
    alpha = min((1.0 / (gamma * ratio)) ** (ratio / (ratio - 1.0)), 1.0)
    beta_max = min(max(1.0 - alpha ** (1.0 / ratio), 0.0), 1.0)
    return alpha, beta_max


def _cycle_terms(members, ensemble):
    omega = ensemble.prior_empty[list(members)]
    r = ensemble.reward[list(members)]
    rho = ensemble.penalty[list(members)]
    all_empty = float(np.prod(omega))
    return omega, r, rho, all_empty


def cycle_threshold(members, ensemble):
    '''Threshold maximising the bounded utility of the test on `members`.

    SS: gamma = P0 S / (P0 S - sum_i (omega_i r_i - (1 - omega_i)|rho_i|)),
    with P0 the probability that all members are empty and S the summed
    rewards. R: gamma = P0 sum|rho| / G, G = sum_i ((1 - omega_i) r_i -
    omega_i |rho_i|) + P0 sum|rho|; when G <= 0 no positive declaration pays
    and the threshold is infinite.
    '''
    members = tuple(members)
    if len(members) == 1:
        return di_threshold(members[0], ensemble)
    omega, r, rho, all_empty = _cycle_terms(members, ensemble)
    if ensemble.mode is Mode.SS:
        gain = all_empty * exact_sum(r)
        denominator = gain - exact_sum(omega * r - (1.0 - omega) * rho)
        if not denominator > 0.0:
            raise PlanningError("threshold denominator {0} for cycle {1} is not positive".format(
                denominator, members))
        return gain / denominator
    cost = all_empty * exact_sum(rho)
    gain = exact_sum((1.0 - omega) * r - omega * rho) + cost
    if gain <= 0.0:
        return math.inf
    return cost / gain


def cycle_utility_at(members, ensemble, gamma):
    '''Bounded per-slot utility of the test on `members` with threshold gamma.'''
    members = tuple(members)
    theta0, theta_min = _mean_ratio(members, ensemble)
    alpha, beta_max = group_error_probs(theta_min / theta0, gamma)
    omega, r, rho, all_empty = _cycle_terms(members, ensemble)
    if ensemble.mode is Mode.SS:
        # declare every member empty on a negative test
        gain = all_empty * exact_sum(r)
        return gain * (1.0 - alpha) + beta_max * (exact_sum(omega * r - (1.0 - omega) * rho) - gain)
    # declare every member busy on a positive test
    cost = all_empty * exact_sum(rho)
    return -alpha * cost + (1.0 - beta_max) * (exact_sum((1.0 - omega) * r - omega * rho) + cost)


def cycle_unit_utility(members, ensemble):
    return max(cycle_utility_at(members, ensemble, cycle_threshold(members, ensemble)), 0.0)


def make_candidate(members, ensemble):
    members = tuple(sorted(members))
    theta0, theta_min = _mean_ratio(members, ensemble)
    gamma = cycle_threshold(members, ensemble)
    alpha, beta_max = group_error_probs(theta_min / theta0, gamma)
    return CycleCandidate(
        members=members,
        theta0=theta0,
        theta_min=theta_min,
        ratio=theta_min / theta0,
        gamma=gamma,
        alpha=alpha,
        beta_max=beta_max,
        unit_utility=max(cycle_utility_at(members, ensemble, gamma), 0.0),
    )


def enumerate_candidates(ensemble, L, allow_large=False):
    '''Every test of size 1..L, sum_l C(N, l) candidates.'''
    if L < 1:
        raise ValidationError("test size L = {0} must be at least 1".format(L), bound=1)
    if L > MAX_TEST_SIZE and not allow_large:
        raise ValidationError("test size L = {0} exceeds {1}; pass allow_large=True".format(
            L, MAX_TEST_SIZE), bound=MAX_TEST_SIZE)
    resources = range(ensemble.n_resources)
    return [make_candidate(members, ensemble)
            for size in range(1, L + 1)
            for members in itertools.combinations(resources, size)]


def greedy_plan(ensemble, K=None, L=2, allow_large=False):
    '''Greedy maximisation over disjoint tests of size <= L.

    Candidates are taken in decreasing unit utility (then smaller size, then
    lexicographic members); a candidate disjoint from the plan is added while
    (K - |plan| - 1) u_C - sum of planned u stays positive.
    '''
    K = ensemble.horizon if K is None else K
    candidates = enumerate_candidates(ensemble, L, allow_large=allow_large)
    candidates.sort(key=lambda c: (-c.unit_utility, len(c.members), c.members))

    chosen = []
    used = set()
    total = 0.0
    for candidate in candidates:
        if used.intersection(candidate.members):
            continue
        marginal = (K - len(chosen) - 1) * candidate.unit_utility - total
        if marginal <= 0.0:
            break
        chosen.append(candidate)
        used.update(candidate.members)
        total = exact_sum(c.unit_utility for c in chosen)
        log.debug("greedy adds %s (u=%.6g, marginal=%.6g)", candidate.members, candidate.unit_utility, marginal)

    cycles = tuple(c.as_cycle() for c in chosen)
    return SensingPlan(cycles=cycles, horizon=K, expected_utility=(K - len(cycles)) * total)


def _cycle_utilities(cycles, ensemble):
    values = []
    for cycle in cycles:
        if hasattr(cycle, "unit_utility"):
            values.append(cycle.unit_utility)
        else:
            values.append(cycle_unit_utility(tuple(cycle), ensemble))
    return values


def plan_expected_utility(plan, K=None):
    '''(K - |cycles|) * sum of u_C for a disjoint plan.'''
    cycles = getattr(plan, "cycles", plan)
    if K is None:
        K = plan.horizon
    if len(cycles) >= K:
        raise PlanningError("{0} tests leave no slot of a horizon of {1}".format(len(cycles), K))
    return (K - len(cycles)) * exact_sum(c.unit_utility for c in cycles)


def penalized_objective(cycles, ensemble, K=None, M=None, L=None):
    '''U(cycles) - M * sum_i Upsilon(deg(i)); cycles may overlap.

    cycles -- TestCycle / CycleCandidate objects or plain member tuples.
    M -- penalty weight; by default K * max u_C * (1 + 1e-6) over every
         candidate of size up to L (L defaults to the largest given cycle).
    '''
    cycles = list(cycles)
    K = ensemble.horizon if K is None else K
    if M is None:
        if L is None:
            L = max((len(getattr(c, "members", c)) for c in cycles), default=1)
        M = PenaltyConfig.for_ensemble(ensemble, K, L).weight
    degree = {}
    for cycle in cycles:
        for i in getattr(cycle, "members", cycle):
            degree[i] = degree.get(i, 0) + 1
    utility = (K - len(cycles)) * exact_sum(_cycle_utilities(cycles, ensemble))
    return utility - M * sum(upsilon(d) for d in degree.values())


def approximation_factor(L_eff, K):
    '''Guarantee of the greedy plan relative to the optimum for its largest test size.'''
    m = min(L_eff, K / 2.0)
    return (1.0 / m) * (K - 1.0) / (K - m)
