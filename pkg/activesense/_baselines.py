'''
Static compressive baselines.

Both baselines estimate the power vector phi from energy observations of a
fixed mixing matrix B by a non-negative weighted LASSO

    minimize  sum_i lambda_i phi_i + 1/2 || y - B (phi + n) ||^2_W

and declare a resource busy when its estimate clears a support threshold.
The linearized maximum-likelihood variant weights each sample by 1/y_k^2;
the MWC variant pools many samples per row and uses W = I.
'''
import logging
from dataclasses import dataclass

import numpy as np

from activesense._exceptions import ConvergenceError, ValidationError
from activesense._model import null_decision, realized_utility

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DenseSensingMatrix:
    '''Non-negative mixing coefficients, one row per measurement.'''
    rows: np.ndarray

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if np.any(rows < 0.0) or not np.all(np.isfinite(rows)):
            raise ValidationError("mixing coefficients must be finite and non-negative")
        empty = np.flatnonzero(~np.any(rows > 0.0, axis=1))
        if len(empty):
            raise ValidationError("row {0} of the sensing matrix is all zero".format(empty[0]),
                                  index=int(empty[0]))
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self):
        return self.rows.shape

    def covered(self):
        return np.flatnonzero(np.any(self.rows > 0.0, axis=0))


@dataclass(frozen=True, eq=False)
class LassoProblem:
    observations: np.ndarray
    matrix: DenseSensingMatrix
    weights: np.ndarray
    data_weight: np.ndarray
    noise_power: np.ndarray

    def __post_init__(self):
        m, n = self.matrix.shape
        for name, value, size in (("observations", self.observations, m),
                                  ("data_weight", self.data_weight, m),
                                  ("weights", self.weights, n),
                                  ("noise_power", self.noise_power, n)):
            value = np.asarray(value, dtype=float)
            if value.shape != (size,):
                raise ValidationError("{0} has shape {1}, expected ({2},)".format(name, value.shape, size))
            object.__setattr__(self, name, value)
        if np.any(self.weights < 0.0):
            raise ValidationError("lasso weights must be non-negative")
        if np.any(self.data_weight <= 0.0):
            raise ValidationError("data weights must be positive")

    @property
    def target(self):
        '''y - B n, the part of the observations left to the signal powers.'''
        return self.observations - self.matrix.rows @ self.noise_power


def ml_problem(observations, matrix, weights, noise_power):
    '''Linearized maximum-likelihood weighting: W = diag(1 / y_k^2).'''
    y = np.asarray(observations, dtype=float)
    floor = np.finfo(float).tiny ** 0.25
    return LassoProblem(observations=y, matrix=matrix, weights=weights,
                        data_weight=1.0 / np.maximum(y, floor) ** 2, noise_power=noise_power)


def mwc_problem(observations, matrix, lam, noise_power):
    n = matrix.shape[1]
    return LassoProblem(observations=np.asarray(observations, dtype=float), matrix=matrix,
                        weights=np.full(n, float(lam)), data_weight=np.ones(len(observations)),
                        noise_power=noise_power)


def lasso_objective(phi, problem):
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (problem.matrix.shape[1],):
        raise ValidationError("phi has shape {0}, expected ({1},)".format(phi.shape, problem.matrix.shape[1]))
    residual = problem.target - problem.matrix.rows @ phi
    return float(problem.weights @ phi + 0.5 * problem.data_weight @ residual ** 2)


def lasso_gradient(phi, problem):
    '''Gradient of the smooth part plus lambda; zero on the support at an optimum.'''
    residual = problem.target - problem.matrix.rows @ phi
    return problem.weights - problem.matrix.rows.T @ (problem.data_weight * residual)


def lambda_max(problem):
    '''Smallest constant lambda at which the non-negative LASSO estimate is all zero.'''
    gradient = problem.matrix.rows.T @ (problem.data_weight * problem.target)
    return max(float(np.max(gradient)), 0.0)


def lasso_solve(problem, tol=1e-10, max_iters=10000, raise_on_failure=True, init=None, callback=None):
    '''Cyclic coordinate descent with every coordinate clamped at zero.

    tol -- stop once no coordinate moves by more than tol in a sweep.
    max_iters -- sweep cap; reaching it raises ConvergenceError, or logs a
                 warning and returns the last iterate if raise_on_failure is False.
    callback -- called as callback(sweep, phi, objective) after every sweep.
    '''
    B = problem.matrix.rows
    w = problem.data_weight
    n = B.shape[1]
    curvature = (w[:, None] * B ** 2).sum(axis=0)

    phi = np.zeros(n) if init is None else np.maximum(np.array(init, dtype=float), 0.0)
    residual = problem.target - B @ phi
    change = np.inf
    for sweep in range(1, max_iters + 1):
        change = 0.0
        for j in range(n):
            if curvature[j] == 0.0:
                continue
            column = B[:, j]
            old = phi[j]
            residual += column * old
            new = max((w * column) @ residual - problem.weights[j], 0.0) / curvature[j]
            residual -= column * new
            phi[j] = new
            change = max(change, abs(new - old))
        if callback is not None or log.isEnabledFor(logging.DEBUG):
            objective = lasso_objective(phi, problem)
            log.debug("sweep %d objective %.12g change %.3g", sweep, objective, change)
            if callback is not None:
                callback(sweep, phi.copy(), objective)
        if change < tol:
            return phi

    if raise_on_failure:
        raise ConvergenceError(change, max_iters)
    log.warning("lasso stopped after %d sweeps with last change %.3g", max_iters, change)
    return phi


def random_dense_matrix(n_rows, columns, n_resources, rng):
    '''Uniform(0, 1] weights on the given columns, zero elsewhere.'''
    columns = np.asarray(columns, dtype=int)
    if n_rows < 1 or len(columns) == 0:
        raise ValidationError("a dense matrix needs at least one row and one column")
    rows = np.zeros((n_rows, n_resources))
    rows[:, columns] = 1.0 - rng.random((n_rows, len(columns)))
    return DenseSensingMatrix(rows)


def mwc_matrix(n_channels, n_resources, rng):
    '''Random 0/1 mixing rows over every resource; all-zero rows are redrawn.'''
    if n_channels < 1:
        raise ValidationError("the MWC needs at least one channel", bound=1)
    rows = (rng.random((n_channels, n_resources)) < 0.5).astype(float)
    for m in range(n_channels):
        while not rows[m].any():
            rows[m] = (rng.random(n_resources) < 0.5).astype(float)
    return DenseSensingMatrix(rows)


def mwc_observations(truth, matrix, num_samples, rng, ensemble):
    '''Per row, the mean of num_samples energy samples of variance theta_m.

    theta_m = sum_i b_mi (s_i phi_i + n_i); the mean of P exponential samples
    with mean theta is Gamma(P, theta / P), which is what is drawn.
    '''
    if num_samples < 1:
        raise ValidationError("num_samples = {0} must be at least 1".format(num_samples), bound=1)
    power = truth.signal_power * truth.occupied + ensemble.noise_power
    theta = matrix.rows @ power
    return rng.gamma(shape=num_samples, scale=theta / num_samples)


def support_decisions(phi_hat, ensemble, covered=None, threshold=None):
    '''delta_i = 1 iff phi_hat_i > threshold (phi_min / 2 by default); others take the null action.'''
    threshold = ensemble.phi_min / 2.0 if threshold is None else threshold
    phi_hat = np.asarray(phi_hat, dtype=float)
    decision = np.full(ensemble.n_resources, null_decision(ensemble), dtype=int)
    covered = np.arange(ensemble.n_resources) if covered is None else np.asarray(covered, dtype=int)
    decision[covered] = (phi_hat[covered] > threshold).astype(int)
    return decision


def baseline_detect_and_utility(phi_hat, ensemble, K, kappa_used, truth, covered=None, threshold=None):
    decision = support_decisions(phi_hat, ensemble, covered=covered, threshold=threshold)
    scored = ensemble if K == ensemble.horizon else ensemble.with_horizon(K)
    return decision, realized_utility(decision, truth, scored, kappa_used)
