from abc import ABCMeta, abstractmethod

import numpy as np
import six

import activesense._exceptions as exceptions
from activesense._detection import glrt_decide, majority_decision
from activesense._model import TrialRecord, null_decision, realized_utility, sample_observation, theta_of


@six.add_metaclass(ABCMeta)
class AbstractPolicy(object):
    '''
    Abstract base class for sensing policies.
    '''
    name = None

    @property
    def label(self):
        '''Name as written on the command line, ex. GT(2).'''
        return self.name

    def plan(self, ensemble):
        '''Choose the tests to run before any observation is taken.

        ensemble -- validated ResourceEnsemble; its horizon is the K used.
        '''
        if not self.is_available():
            raise exceptions.PolicyUnavailableError("{0} cannot run with these settings".format(self.label))
        return self._plan(ensemble)

    def run_trial(self, ensemble, truth, rng, plan=None):
        '''Sense the ground truth with the planned tests and score the declarations.

        truth -- GroundTruth of this trial.
        rng -- numpy Generator driving the observations (and any random matrix).
        plan -- a plan from self.plan(ensemble); computed when omitted.
        '''
        if plan is None:
            plan = self.plan(ensemble)
        return self._execute(ensemble, plan, truth, rng)

    def with_size(self, L):
        '''Same policy with tests of up to L sub-bands.'''
        raise exceptions.PolicyUnavailableError("{0} takes no test size".format(self.name))

    @abstractmethod
    def is_available(self):
        raise NotImplementedError

    @abstractmethod
    def _plan(self, ensemble):
        raise NotImplementedError

    @abstractmethod
    def _execute(self, ensemble, plan, truth, rng):
        raise NotImplementedError

    def __repr__(self):
        return "<{0} {1}>".format(type(self).__name__, self.label)

    # helpers shared by the test-based policies

    def _sense(self, ensemble, plan, truth, rng):
        observations = np.array([sample_observation(theta_of(c, truth, ensemble), rng) for c in plan.cycles])
        positive = np.array([glrt_decide(y, c, ensemble) for y, c in zip(observations, plan.cycles)], dtype=int)
        return observations, positive

    def _declare(self, ensemble, plan, positive):
        outcomes = {}
        for cycle, outcome in zip(plan.cycles, positive):
            for i in cycle.members:
                outcomes.setdefault(i, []).append(int(outcome))
        decision = np.full(ensemble.n_resources, null_decision(ensemble), dtype=int)
        for i, tests in outcomes.items():
            decision[i] = majority_decision(tests)
        return decision

    def _record(self, ensemble, plan, truth, observations, positive, decision, sensed=None):
        if sensed is None:
            sensed = np.zeros(ensemble.n_resources, dtype=bool)
            sensed[plan.covered()] = True
        return TrialRecord(
            observations=observations,
            test_positive=positive,
            decision=decision,
            realized_utility=realized_utility(decision, truth, ensemble, plan.kappa),
            occupied=truth.occupied,
            sensed=sensed,
            kappa=plan.kappa,
        )
