'''
Monte-Carlo harness.

Every trial draws its ground truth and its observations from streams keyed by
(master_seed, trial_index), so all policies see the same truths and results do
not depend on how trials are split across workers. Per-trial results are
sorted by trial index and summed with math.fsum before anything is reported.
'''
import csv
import io
import logging
import math
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from activesense._baselines import support_decisions
from activesense._config import default_workers, draw_ensemble
from activesense._exceptions import Error, ExperimentError
from activesense._misc import ensemble_stream, exact_sum, format_float, trial_streams
from activesense._model import draw_ground_truth, realized_utility
from activesense._policies import DenseLasso, MwcBaseline, get

log = logging.getLogger(__name__)

CSV_COLUMNS = ("axis", "policy", "mean_utility", "std_err", "mean_kappa", "mean_alpha", "mean_beta", "trials")

# chunks per worker; more chunks balance uneven trials
_CHUNKS_PER_WORKER = 4


@dataclass(frozen=True)
class PolicySummary:
    policy: str
    trials: int
    mean_utility: float
    std_error: float
    mean_kappa: float
    mean_alpha: float
    mean_beta: float
    false_alarms: int
    empty_sensed: int
    misses: int
    busy_sensed: int


@dataclass(frozen=True)
class SweepRow:
    axis: str
    policy: str
    mean_utility: float
    std_error: float
    mean_kappa: float
    mean_alpha: float
    mean_beta: float
    trials: int

    @classmethod
    def from_summary(cls, axis, summary):
        return cls(axis=axis, policy=summary.policy, mean_utility=summary.mean_utility,
                   std_error=summary.std_error, mean_kappa=summary.mean_kappa,
                   mean_alpha=summary.mean_alpha, mean_beta=summary.mean_beta, trials=summary.trials)

    def as_csv_row(self):
        return [self.axis, self.policy, format_float(self.mean_utility), format_float(self.std_error),
                format_float(self.mean_kappa), format_float(self.mean_alpha), format_float(self.mean_beta),
                str(self.trials)]


def _split_seed(trial_seed):
    if isinstance(trial_seed, tuple):
        return trial_seed
    return trial_seed, 0


def run_trial(policy, ensemble, K=None, trial_seed=0, plan=None, snr_span_db=0.0):
    '''One trial of a policy.

    K -- horizon of the trial; the ensemble's own horizon when None.
    trial_seed -- (master_seed, trial_index), or a bare master seed for trial 0.
    '''
    if K is not None and K != ensemble.horizon:
        ensemble = ensemble.with_horizon(K)
    master_seed, trial_index = _split_seed(trial_seed)
    truth_rng, sense_rng = trial_streams(master_seed, trial_index)
    truth = draw_ground_truth(ensemble, truth_rng, snr_span_db)
    return policy.run_trial(ensemble, truth, sense_rng, plan=plan)


def policy_for(config, name):
    '''Registered policy for a name, with the baseline knobs of the config applied.'''
    policy = get(name)
    if isinstance(policy, DenseLasso):
        return DenseLasso(policy.L, averaging=config.averaging, lam=config.lasso_lambda,
                          threshold=config.detect_threshold)
    if isinstance(policy, MwcBaseline):
        return MwcBaseline(policy.L, channels=config.mwc_channels, multiplier=config.mwc_multiplier,
                           lam=config.mwc_lambda, threshold=config.detect_threshold)
    return policy


def _run_chunk(job):
    policy, ensemble, plan, master_seed, indices, snr_span_db = job
    results = []
    for index in indices:
        try:
            record = run_trial(policy, ensemble, trial_seed=(master_seed, index), plan=plan,
                               snr_span_db=snr_span_db)
        except Error as e:
            raise ExperimentError(policy.label, index, e)
        results.append((index, record.realized_utility, record.kappa) + record.error_counts())
    return results


def _chunks(trials, workers):
    count = max(1, min(trials, workers * _CHUNKS_PER_WORKER))
    return [tuple(int(i) for i in part) for part in np.array_split(np.arange(trials), count) if len(part)]


def _map(function, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [function(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, jobs))


def _rate(count, total):
    return count / total if total else float("nan")


def summarize(label, results):
    '''PolicySummary of (index, utility, kappa, fa, empty, md, busy) tuples.'''
    results = sorted(results)
    n = len(results)
    utilities = [r[1] for r in results]
    mean = exact_sum(utilities) / n
    if n > 1:
        variance = exact_sum((u - mean) ** 2 for u in utilities) / (n - 1)
        std_error = math.sqrt(variance / n)
    else:
        std_error = 0.0
    fa, empty, md, busy = (sum(r[k] for r in results) for k in range(3, 7))
    return PolicySummary(
        policy=label,
        trials=n,
        mean_utility=mean,
        std_error=std_error,
        mean_kappa=exact_sum(r[2] for r in results) / n,
        mean_alpha=_rate(fa, empty),
        mean_beta=_rate(md, busy),
        false_alarms=fa,
        empty_sensed=empty,
        misses=md,
        busy_sensed=busy,
    )


def monte_carlo(config, ensemble=None, workers=None, grid_index=0):
    '''Run config.trials trials of every configured policy.

    Returns an OrderedDict from policy label to PolicySummary.
    '''
    workers = workers or config.workers or default_workers()
    if ensemble is None:
        ensemble = draw_ensemble(config, ensemble_stream(config.master_seed, grid_index))
    summaries = OrderedDict()
    for name in config.policies:
        policy = policy_for(config, name)
        plan = policy.plan(ensemble)
        log.info("%s: %d tests, expected utility %.6g, %d trials",
                 policy.label, plan.kappa, plan.expected_utility, config.trials)
        jobs = [(policy, ensemble, plan, config.master_seed, indices, config.snr_span_db)
                for indices in _chunks(config.trials, workers)]
        results = [r for chunk in _map(_run_chunk, jobs, workers) for r in chunk]
        summaries[policy.label] = summarize(policy.label, results)
    return summaries


def write_csv(rows, out):
    '''Write SweepRows to a path or an open text file.'''
    if isinstance(out, str):
        with io.open(out, "w", encoding="utf8", newline="") as fp:
            return write_csv(rows, fp)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())
        out.flush()


class _RowSink(object):
    '''Writes rows as they arrive so an aborted sweep keeps its finished points.'''

    def __init__(self, out):
        self._owned = isinstance(out, str)
        self._fp = io.open(out, "w", encoding="utf8", newline="") if self._owned else out
        self._writer = None
        if self._fp is not None:
            self._writer = csv.writer(self._fp, lineterminator="\n")
            self._writer.writerow(CSV_COLUMNS)
            self._fp.flush()

    def write(self, row):
        if self._writer is not None:
            self._writer.writerow(row.as_csv_row())
            self._fp.flush()

    def close(self):
        if self._owned:
            self._fp.close()


def sweep(config, workers=None, out=None):
    '''One monte_carlo per grid value of the sweep axis.

    out -- path or text file receiving the CSV; config.output_path when omitted.
    '''
    out = config.output_path if out is None else out
    sink = _RowSink(out)
    rows = []
    try:
        for grid_index, value in enumerate(config.sweep_values):
            point = config.with_axis(value)
            axis = format_float(value)
            log.info("%s = %s", config.sweep_axis, axis)
            for summary in monte_carlo(point, workers=workers, grid_index=grid_index).values():
                row = SweepRow.from_summary(axis, summary)
                sink.write(row)
                rows.append(row)
    finally:
        sink.close()
    return rows


def _roc_chunk(job):
    policy, ensemble, plan, master_seed, indices, snr_span_db, fractions, threshold = job
    results = []
    for index in indices:
        truth_rng, sense_rng = trial_streams(master_seed, index)
        truth = draw_ground_truth(ensemble, truth_rng, snr_span_db)
        empty = ~truth.occupied
        try:
            matrix, observations = policy.observe(ensemble, plan, truth, sense_rng)
            scale = policy.lambda_scale(ensemble, matrix, observations)
            phi_hat = None
            detected = np.zeros(ensemble.n_resources, dtype=bool)
            per_lambda = []
            # from strong to weak shrinkage, each solve warm-started from the last;
            # a resource stays detected once it clears the threshold at a larger lambda
            for fraction in fractions:
                phi_hat = policy.solve(ensemble, matrix, observations, fraction * scale, init=phi_hat)
                detected |= support_decisions(phi_hat, ensemble, threshold=threshold) == 1
                decision = detected.astype(int)
                per_lambda.append((
                    realized_utility(decision, truth, ensemble, plan.kappa), plan.kappa,
                    int(np.sum(detected[empty])), int(np.sum(empty)),
                    int(np.sum(~detected[truth.occupied])), int(np.sum(truth.occupied))))
        except Error as e:
            raise ExperimentError(policy.label, index, e)
        results.append((index, per_lambda))
    return results


def fair_config(config):
    '''The config with busy SNRs raised by the MWC observation count per test.

    The MWC front end collects mwc_channels * mwc_multiplier samples for every
    sample a single test takes; a test averaging as many samples gains that
    factor in SNR.
    '''
    gain = config.mwc_channels * config.mwc_multiplier
    return config.replace(snr_min_db=config.snr_min_db + 10.0 * math.log10(gain))


def roc(config, workers=None, out=None):
    '''False-alarm and detection rates of the MWC baseline over config.roc_lambdas.

    Each trial solves the LASSO from lambda_max down through the fractions in
    config.roc_lambdas; the points come out in order of non-decreasing
    false-alarm and detection rate. The test-based policies of the config add
    one row with axis "operating_point" at the configured SNR and one with
    axis "operating_point_fair" at the SNR of fair_config. mean_alpha is the
    pooled false-alarm rate and 1 - mean_beta the detection rate.
    '''
    workers = workers or config.workers or default_workers()
    ensemble = draw_ensemble(config, ensemble_stream(config.master_seed))
    rows = []
    fractions = sorted(config.roc_lambdas, reverse=True)
    for name in config.policies:
        policy = policy_for(config, name)
        if not isinstance(policy, MwcBaseline):
            continue
        plan = policy.plan(ensemble)
        jobs = [(policy, ensemble, plan, config.master_seed, indices, config.snr_span_db, fractions,
                 config.detect_threshold) for indices in _chunks(config.trials, workers)]
        trials = sorted(r for chunk in _map(_roc_chunk, jobs, workers) for r in chunk)
        for k, fraction in enumerate(fractions):
            results = [(index,) + per_lambda[k] for index, per_lambda in trials]
            rows.append(SweepRow.from_summary(format_float(fraction), summarize(policy.label, results)))
        log.info("%s: %d lambda values, %d trials", policy.label, len(fractions), config.trials)

    others = tuple(n for n in config.policies if not isinstance(policy_for(config, n), MwcBaseline))
    if others:
        for axis, point in (("operating_point", config), ("operating_point_fair", fair_config(config))):
            point = point.replace(policies=others)
            point_ensemble = draw_ensemble(point, ensemble_stream(config.master_seed))
            for summary in monte_carlo(point, ensemble=point_ensemble, workers=workers).values():
                rows.append(SweepRow.from_summary(axis, summary))

    out = config.output_path if out is None else out
    if out is not None:
        write_csv(rows, out)
    return rows
