'''
Domain types of the sensing problem and the energy observation model.

A test mixes the sub-bands listed in its members with unit coefficients; the
squared magnitude of the resulting sample is exponentially distributed with
mean theta = sum over members of (s_i * phi_i + n_i).
'''
import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from activesense._exceptions import PlanningError, ValidationError
from activesense._misc import exact_sum


class Mode(enum.Enum):
    '''Which declaration earns the reward: empty sub-bands (SS) or busy ones (R).'''
    SS = "SS"
    R = "R"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValidationError("unknown mode {0!r}, expected SS or R".format(value))


def _frozen_array(values, dtype=float):
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ResourceEnsemble:
    '''
    Per-resource priors and utilities of one sensing problem.

    prior_empty -- probability that each sub-band is empty (omega).
    reward -- utility per slot for a correct declaration (r).
    penalty -- magnitude of the utility lost per slot on an error (|rho|).
    noise_power -- noise power of each sub-band (n), Watts.
    phi_min -- smallest received power of an active user, Watts.
    mode -- Mode.SS or Mode.R.
    horizon -- number of slots K.

    Build instances with validate_ensemble; the constructor does not check
    the prior bound.
    '''
    prior_empty: np.ndarray
    reward: np.ndarray
    penalty: np.ndarray
    noise_power: np.ndarray
    phi_min: float
    mode: Mode
    horizon: int

    @property
    def n_resources(self):
        return len(self.prior_empty)

    @property
    def snr_min(self):
        '''Per-resource worst-case SNR, phi_min / n_i.'''
        return self.phi_min / self.noise_power

    def with_horizon(self, horizon):
        return validate_ensemble(self.prior_empty, self.reward, self.penalty, self.noise_power,
                                 self.phi_min, self.mode, horizon)


@dataclass(frozen=True, eq=False)
class GroundTruth:
    occupied: np.ndarray
    signal_power: np.ndarray

    def __post_init__(self):
        if self.occupied.shape != self.signal_power.shape:
            raise ValidationError("occupancy and power vectors differ in length")
        idle = ~self.occupied
        if np.any(self.signal_power[idle] != 0.0):
            index = int(np.flatnonzero(idle & (self.signal_power != 0.0))[0])
            raise ValidationError("resource {0} is empty but carries power".format(index), index=index)


@dataclass(frozen=True)
class TestCycle:
    '''One measurement: the mixed sub-bands and the operating point of its test.'''
    members: Tuple[int, ...]
    threshold: float
    alpha: float
    beta_max: float
    unit_utility: float

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class SensingPlan:
    cycles: Tuple[TestCycle, ...]
    horizon: int
    expected_utility: float

    def __post_init__(self):
        seen = set()
        for cycle in self.cycles:
            overlap = seen.intersection(cycle.members)
            if overlap:
                raise PlanningError("resource {0} appears in two tests".format(min(overlap)))
            seen.update(cycle.members)

    @property
    def kappa(self):
        return len(self.cycles)

    @property
    def largest_test(self):
        '''Size of the largest test in the plan (0 for the empty plan).'''
        return max((len(c.members) for c in self.cycles), default=0)

    def covered(self):
        return sorted(i for c in self.cycles for i in c.members)


@dataclass(frozen=True, eq=False)
class TrialRecord:
    '''Outcome of one Monte-Carlo trial of a policy.'''
    observations: np.ndarray
    test_positive: np.ndarray
    decision: np.ndarray
    realized_utility: float
    occupied: np.ndarray
    sensed: np.ndarray
    kappa: int

    def error_counts(self):
        '''(false alarms, empty sensed, misses, busy sensed) over sensed resources.'''
        sensed = self.sensed
        empty = sensed & ~self.occupied
        busy = sensed & self.occupied
        return (int(np.sum(self.decision[empty] == 1)), int(np.sum(empty)),
                int(np.sum(self.decision[busy] == 0)), int(np.sum(busy)))


def validate_ensemble(prior_empty, reward, penalty, noise_power, phi_min, mode, horizon):
    '''Check the raw parameters and return a ResourceEnsemble.

    Every resource must satisfy the prior bound (it cannot earn utility without
    being sensed): omega_i < |rho_i| / (|rho_i| + r_i) in SS mode and
    omega_i > r_i / (|rho_i| + r_i) in R mode. Boundary values are rejected.
    '''
    mode = Mode.parse(mode)
    columns = [np.atleast_1d(np.asarray(v, dtype=float))
               for v in (prior_empty, reward, penalty, noise_power)]
    omega, r, rho, noise = columns
    n = len(omega)
    if n == 0:
        raise ValidationError("an ensemble needs at least one resource")
    for name, column in zip(("reward", "penalty", "noise_power"), (r, rho, noise)):
        if len(column) != n:
            raise ValidationError("{0} has {1} entries, expected {2}".format(name, len(column), n))
        bad = np.flatnonzero(~(column > 0.0) | ~np.isfinite(column))
        if len(bad):
            raise ValidationError("{0}[{1}] = {2} must be positive".format(name, bad[0], column[bad[0]]),
                                  index=int(bad[0]), bound=0.0)
    bad = np.flatnonzero(~((omega > 0.0) & (omega < 1.0)))
    if len(bad):
        raise ValidationError("prior_empty[{0}] = {1} must lie in (0, 1)".format(bad[0], omega[bad[0]]),
                              index=int(bad[0]))
    if not phi_min > 0.0 or not math.isfinite(phi_min):
        raise ValidationError("phi_min = {0} must be positive".format(phi_min), bound=0.0)
    if int(horizon) != horizon or horizon < 2:
        raise ValidationError("horizon = {0} must be an integer >= 2".format(horizon), bound=2)

    if mode is Mode.SS:
        bound = rho / (rho + r)
        bad = np.flatnonzero(~(omega < bound))
        relation = "<"
    else:
        bound = r / (rho + r)
        bad = np.flatnonzero(~(omega > bound))
        relation = ">"
    if len(bad):
        i = int(bad[0])
        raise ValidationError(
            "resource {0}: prior_empty = {1} violates prior_empty {2} {3} in {4} mode".format(
                i, omega[i], relation, bound[i], mode.value),
            index=i, bound=float(bound[i]))

    return ResourceEnsemble(
        prior_empty=_frozen_array(omega),
        reward=_frozen_array(r),
        penalty=_frozen_array(rho),
        noise_power=_frozen_array(noise),
        phi_min=float(phi_min),
        mode=mode,
        horizon=int(horizon),
    )


def make_ground_truth(occupied, signal_power, ensemble):
    occupied = _frozen_array(occupied, dtype=bool)
    power = _frozen_array(signal_power)
    if len(occupied) != ensemble.n_resources:
        raise ValidationError("ground truth covers {0} resources, ensemble has {1}".format(
            len(occupied), ensemble.n_resources))
    weak = np.flatnonzero(occupied & (power < ensemble.phi_min))
    if len(weak):
        i = int(weak[0])
        raise ValidationError("resource {0} is busy with power {1} below phi_min {2}".format(
            i, power[i], ensemble.phi_min), index=i, bound=ensemble.phi_min)
    return GroundTruth(occupied=occupied, signal_power=power)


def draw_ground_truth(ensemble, rng, snr_span_db=0.0):
    '''Draw occupancy from the priors and, for busy sub-bands, a power whose
    SNR in dB is uniform over [SNR_min, SNR_min + snr_span_db].'''
    occupied = rng.random(ensemble.n_resources) >= ensemble.prior_empty
    snr_min_db = 10.0 * np.log10(ensemble.snr_min)
    snr_db = snr_min_db + snr_span_db * rng.random(ensemble.n_resources)
    power = np.where(occupied, ensemble.noise_power * 10.0 ** (snr_db / 10.0), 0.0)
    # keep the floor exact against rounding in the dB round trip
    power = np.where(occupied, np.maximum(power, ensemble.phi_min), 0.0)
    return make_ground_truth(occupied, power, ensemble)


def _members_of(cycle):
    return tuple(getattr(cycle, "members", cycle))


def theta_of(cycle, truth, ensemble):
    '''Mean of the energy observation of a test: sum of (s_i phi_i + n_i) over members.'''
    members = _members_of(cycle)
    n = ensemble.n_resources
    for i in members:
        if not 0 <= i < n:
            raise ValidationError("resource index {0} out of range for {1} resources".format(i, n), index=i)
    return exact_sum(truth.signal_power[i] * truth.occupied[i] + ensemble.noise_power[i] for i in members)


def null_mean(members, ensemble):
    '''theta_0: observation mean when every member is empty.'''
    return exact_sum(ensemble.noise_power[i] for i in members)


def sample_observation(theta, rng):
    '''One energy sample y ~ Exp with mean theta.'''
    if not theta > 0.0:
        raise ValidationError("theta = {0} must be positive".format(theta), bound=0.0)
    return float(rng.exponential(theta))


def null_decision(ensemble):
    '''Decision for a resource that was not sensed; it earns nothing in either mode.'''
    return 1 if ensemble.mode is Mode.SS else 0


def per_resource_payoff(decision, truth, ensemble):
    '''Utility per slot earned by each resource under the mode's rule.'''
    decision = np.asarray(decision, dtype=int)
    s = truth.occupied
    r, rho = ensemble.reward, ensemble.penalty
    if ensemble.mode is Mode.SS:
        acting = decision == 0
        return np.where(acting, np.where(s, -rho, r), 0.0)
    acting = decision == 1
    return np.where(acting, np.where(s, r, -rho), 0.0)


def realized_utility(decision, truth, ensemble, kappa):
    '''(K - kappa) times the payoff of the declarations against the truth.'''
    K = ensemble.horizon
    if kappa > K:
        raise PlanningError("{0} tests do not fit a horizon of {1} slots".format(kappa, K))
    return (K - kappa) * exact_sum(per_resource_payoff(decision, truth, ensemble))
