'''
Brute-force references for checking the planners and the detection analysis.

Each oracle refuses instances above its size guard with OracleLimitError.
The enumerations below recompute error probabilities and utilities from
their definitions instead of calling the closed forms they are meant to check.
'''
import itertools
import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from activesense._direct import di_assess
from activesense._exceptions import OracleLimitError
from activesense._group import cycle_unit_utility, cycle_utility_at, make_candidate
from activesense._model import Mode, SensingPlan, TestCycle

MAX_PLAN_RESOURCES = 8
MAX_PLAN_TEST_SIZE = 3
MAX_SUBSET_RESOURCES = 12
MAX_PBD_TRIALS = 12


@dataclass(frozen=True)
class ProbeReport:
    trials: int
    violations: int
    witness: Optional[Any] = None

    @property
    def passed(self):
        return self.violations == 0


def _partial_partitions(remaining, L):
    '''Every collection of disjoint blocks of size <= L drawn from `remaining`.'''
    if not remaining:
        yield ()
        return
    first, rest = remaining[0], remaining[1:]
    # first resource left unsensed
    for blocks in _partial_partitions(rest, L):
        yield blocks
    for size in range(min(L, len(remaining))):
        for partners in itertools.combinations(rest, size):
            left = tuple(i for i in rest if i not in partners)
            for blocks in _partial_partitions(left, L):
                yield ((first,) + partners,) + blocks


def brute_force_plan(ensemble, K=None, L=2):
    '''Exact maximiser of (K - |C|) sum u_C over disjoint tests of size <= L.'''
    K = ensemble.horizon if K is None else K
    n = ensemble.n_resources
    if n > MAX_PLAN_RESOURCES or L > MAX_PLAN_TEST_SIZE:
        raise OracleLimitError("brute_force_plan handles N <= {0} and L <= {1}, got N={2}, L={3}".format(
            MAX_PLAN_RESOURCES, MAX_PLAN_TEST_SIZE, n, L))
    utility = {}
    best_value, best_blocks = 0.0, ()
    for blocks in _partial_partitions(tuple(range(n)), L):
        if len(blocks) > K - 1:
            continue
        for block in blocks:
            if block not in utility:
                utility[block] = cycle_unit_utility(block, ensemble)
        value = (K - len(blocks)) * math.fsum(utility[b] for b in blocks)
        if value > best_value:
            best_value, best_blocks = value, blocks
    cycles = tuple(make_candidate(block, ensemble).as_cycle() for block in sorted(best_blocks))
    return SensingPlan(cycles=cycles, horizon=K, expected_utility=best_value)


def brute_force_di(ensemble, K=None):
    '''Best set of direct tests over all 2^N subsets.'''
    K = ensemble.horizon if K is None else K
    n = ensemble.n_resources
    if n > MAX_SUBSET_RESOURCES:
        raise OracleLimitError("brute_force_di handles N <= {0}, got {1}".format(MAX_SUBSET_RESOURCES, n))
    assessment = di_assess(ensemble)
    u = assessment.unit_utility
    best_value, best_subset = 0.0, ()
    for size in range(1, min(n, K - 1) + 1):
        for subset in itertools.combinations(range(n), size):
            value = (K - size) * math.fsum(u[i] for i in subset)
            if value > best_value:
                best_value, best_subset = value, subset
    cycles = tuple(
        TestCycle(members=(i,), threshold=float(assessment.gamma[i]), alpha=float(assessment.alpha[i]),
                  beta_max=float(assessment.beta_max[i]), unit_utility=float(u[i]))
        for i in best_subset)
    return SensingPlan(cycles=cycles, horizon=K, expected_utility=best_value)


def pbd_enumerate(k, probs):
    '''P(at most k successes), summed over all 2^n outcome vectors.'''
    probs = [float(p) for p in probs]
    if len(probs) > MAX_PBD_TRIALS:
        raise OracleLimitError("pbd_enumerate handles n <= {0}, got {1}".format(MAX_PBD_TRIALS, len(probs)))
    terms = []
    for outcome in itertools.product((0, 1), repeat=len(probs)):
        if sum(outcome) > k:
            continue
        weight = 1.0
        for hit, p in zip(outcome, probs):
            weight *= p if hit else 1.0 - p
        terms.append(weight)
    return math.fsum(terms)


def submodularity_probe(objective, universe, trials, rng, tol=1e-9):
    '''Check f(A+a) + f(A+b) >= f(A+a+b) + f(A) on random (A, a, b).

    objective -- callable on a frozenset of universe elements.
    Returns a ProbeReport whose witness is the first violating (A, a, b).
    '''
    universe = list(universe)
    if len(universe) < 2:
        return ProbeReport(trials=0, violations=0)
    violations, witness = 0, None
    for _ in range(trials):
        a, b = rng.choice(len(universe), size=2, replace=False)
        rest = [j for j in range(len(universe)) if j not in (a, b)]
        keep = rng.random(len(rest)) < rng.random()
        base = frozenset(universe[j] for j, kept in zip(rest, keep) if kept)
        x, y = universe[a], universe[b]
        lhs = objective(base | {x}) + objective(base | {y})
        rhs = objective(base | {x, y}) + objective(base)
        if lhs < rhs - tol:
            violations += 1
            if witness is None:
                witness = (base, x, y)
    return ProbeReport(trials=trials, violations=violations, witness=witness)


def threshold_grid(grid_size=1000):
    return np.logspace(-3.0, 3.0, grid_size)


def threshold_grid_opt(members, ensemble, grid_size=1000):
    '''Grid argmax over gamma in [1e-3, 1e3] of the cycle utility.'''
    members = tuple(members)
    grid = threshold_grid(grid_size)
    values = [cycle_utility_at(members, ensemble, gamma) for gamma in grid]
    return float(grid[int(np.argmax(values))])


def _error_probs_from_means(theta0, theta_min, gamma):
    # P(y >= t | theta) = exp(-t / theta) with the simple-test level t
    level = math.log(gamma * theta_min / theta0) / (1.0 / theta0 - 1.0 / theta_min)
    if level <= 0.0:
        return 1.0, 0.0
    return math.exp(-level / theta0), 1.0 - math.exp(-level / theta_min)


def enumerate_cycle_utility(members, ensemble, gamma):
    '''Cycle utility summed over all 2^|C| joint states.

    The all-empty state tests positive with the false-alarm probability; every
    other state is treated as missed with the worst-case probability.
    '''
    members = tuple(members)
    theta0 = math.fsum(ensemble.noise_power[i] for i in members)
    alpha, beta_max = _error_probs_from_means(theta0, theta0 + ensemble.phi_min, gamma)
    terms = []
    for state in itertools.product((0, 1), repeat=len(members)):
        weight = 1.0
        payoff = []
        for busy, i in zip(state, members):
            omega, r, rho = ensemble.prior_empty[i], ensemble.reward[i], ensemble.penalty[i]
            weight *= (1.0 - omega) if busy else omega
            if ensemble.mode is Mode.SS:
                payoff.append(-rho if busy else r)
            else:
                payoff.append(r if busy else -rho)
        if any(state):
            positive = 1.0 - beta_max
        else:
            positive = alpha
        # SS acts on a negative test, R on a positive one
        acting = 1.0 - positive if ensemble.mode is Mode.SS else positive
        terms.append(weight * acting * math.fsum(payoff))
    return math.fsum(terms)


def pairwise_threshold_reference(omega_i, omega_j, r_i, r_j, rho_i, rho_j):
    '''Explicit two-resource threshold; rho_i, rho_j are the signed (negative) penalties.'''
    numerator = omega_i * omega_j * (r_i + r_j)
    return numerator / ((1 - omega_i) * (abs(rho_i) - omega_j * r_j) + (1 - omega_j) * (abs(rho_j) - omega_i * r_i))


def pairwise_utility_reference(omega_i, omega_j, r_i, r_j, rho_i, rho_j, alpha, beta_max):
    '''Explicit two-resource utility with signed (negative) penalties.'''
    miss = (omega_i * (1 - omega_j) * (r_i + rho_j)
            + omega_j * (1 - omega_i) * (r_j + rho_i)
            + (1 - omega_i) * (1 - omega_j) * (rho_i + rho_j))
    return omega_i * omega_j * (r_i + r_j) * (1 - alpha) + miss * beta_max
