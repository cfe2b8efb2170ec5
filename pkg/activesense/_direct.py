'''
Direct Inspection: every test observes a single sub-band.

With one resource per test the expected utility of a set A of sensed
resources is (K - |A|) * sum of u_i over A, a submodular function whose
maximum is a prefix of the resources sorted by u_i.
'''
from dataclasses import dataclass

import numpy as np

from activesense._model import Mode, SensingPlan, TestCycle
from activesense._misc import exact_sum


@dataclass(frozen=True, eq=False)
class DiAssessment:
    alpha: np.ndarray
    beta_max: np.ndarray
    unit_utility: np.ndarray
    gamma: np.ndarray


def di_threshold(i, ensemble):
    '''Likelihood-ratio threshold that maximises the utility of a direct test.'''
    omega = ensemble.prior_empty[i]
    r, rho = ensemble.reward[i], ensemble.penalty[i]
    if ensemble.mode is Mode.SS:
        return float(r * omega / (rho * (1.0 - omega)))
    return float(rho * omega / (r * (1.0 - omega)))


def di_error_probs(i, ensemble):
    '''False-alarm probability and missed-detection bound of the direct test on i.

    The bound assumes the weakest admissible signal, phi_min.
    '''
    snr = ensemble.phi_min / ensemble.noise_power[i]
    inner = 1.0 / (di_threshold(i, ensemble) * (1.0 + snr))
    alpha = min(inner ** ((1.0 + snr) / snr), 1.0)
    beta_max = min(max(1.0 - inner ** (1.0 / snr), 0.0), 1.0)
    return alpha, beta_max


def di_unit_utility(i, ensemble):
    alpha, beta_max = di_error_probs(i, ensemble)
    omega = ensemble.prior_empty[i]
    r, rho = ensemble.reward[i], ensemble.penalty[i]
    if ensemble.mode is Mode.SS:
        u = omega * r * (1.0 - alpha) - (1.0 - omega) * rho * beta_max
    else:
        u = (1.0 - omega) * r * (1.0 - beta_max) - omega * rho * alpha
    # the optimised threshold never does worse than the uninformative test
    return max(float(u), 0.0)


def di_assess(ensemble):
    n = ensemble.n_resources
    probs = [di_error_probs(i, ensemble) for i in range(n)]
    return DiAssessment(
        alpha=np.array([a for a, _ in probs]),
        beta_max=np.array([b for _, b in probs]),
        unit_utility=np.array([di_unit_utility(i, ensemble) for i in range(n)]),
        gamma=np.array([di_threshold(i, ensemble) for i in range(n)]),
    )


def di_subset_utility(unit_utility, subset, horizon):
    '''U(A) = (K - |A|) * sum of u_i over A.'''
    subset = list(subset)
    return (horizon - len(subset)) * exact_sum(unit_utility[i] for i in subset)


def di_plan(ensemble, K=None):
    '''Best set of direct tests: the prefix of the u-sorted resources where the
    marginal (K - i) u_{i+1} - sum_{k <= i+1} u_k first stops being positive.'''
    K = ensemble.horizon if K is None else K
    assessment = di_assess(ensemble)
    u = assessment.unit_utility
    # ties go to the lower index
    order = sorted(range(ensemble.n_resources), key=lambda i: (-u[i], i))

    chosen = []
    for i in order:
        if len(chosen) >= K - 1:
            break
        total = exact_sum(u[j] for j in chosen)
        if (K - len(chosen) - 1) * u[i] - total <= 0.0:
            break
        chosen.append(i)

    cycles = tuple(
        TestCycle(members=(i,), threshold=float(assessment.gamma[i]), alpha=float(assessment.alpha[i]),
                  beta_max=float(assessment.beta_max[i]), unit_utility=float(u[i]))
        for i in chosen)
    return SensingPlan(cycles=cycles, horizon=K, expected_utility=di_subset_utility(u, chosen, K))
