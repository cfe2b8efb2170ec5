# Abstract base error class
class Error(Exception):
    pass


# Parameters that break an invariant of the model.
# ex. a prior outside the prior bound, a non-positive noise power.
class ValidationError(Error):
    def __init__(self, message, index=None, bound=None):
        Error.__init__(self, message)
        self.index = index
        self.bound = bound

    def __reduce__(self):
        return (type(self), (self.args[0], self.index, self.bound))


# Plans that cannot be scored or built.
# ex. more tests than slots in the horizon, overlapping cycles where disjointness is required.
class PlanningError(Error):
    pass


# Errors while turning observations into decisions.
class DetectionError(Error):
    pass


class ConvergenceError(Error):
    def __init__(self, residual, iterations):
        Error.__init__(self, "coordinate descent stopped after {0} sweeps, last change {1:.3g}".format(
            iterations, residual))
        self.residual = residual
        self.iterations = iterations

    def __reduce__(self):
        return (type(self), (self.residual, self.iterations))


# Brute-force references refuse instances they cannot enumerate.
class OracleLimitError(Error):
    pass


class PolicyUnavailableError(Error): pass


# A Monte-Carlo trial failed; the original exception is kept as cause.
class ExperimentError(Error):
    def __init__(self, policy, trial_index, cause):
        Error.__init__(self, "policy {0} failed on trial {1}: {2}".format(policy, trial_index, cause))
        self.policy = policy
        self.trial_index = trial_index
        self.cause = cause

    def __reduce__(self):
        return (type(self), (self.policy, self.trial_index, self.cause))
