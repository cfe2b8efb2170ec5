'''
Experiment configuration: a frozen dataclass, JSON files, named presets and
the random ensembles the experiments are run on.
'''
import dataclasses
import io
import json
import os
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from activesense._exceptions import ValidationError
from activesense._model import Mode, validate_ensemble

AXES = ("none", "rho_over_r", "K_over_N", "snr_min_db")
PRIORS = ("fixed", "boundary", "uniform")


@dataclass(frozen=True)
class ExperimentConfig:
    '''
    Everything needed to rebuild an experiment from a seed.

    prior -- "fixed" (every omega_i = prior_empty), "boundary" (the
             prior bound stepped inside by prior_margin) or "uniform"
             (U(omega_low, bound) in SS mode, U(bound, omega_high) in R mode).
    unit_rewards -- r_i = 1; otherwise r_i = log2(1 + SNR_S) with SNR_S in dB
                    uniform over [reward_snr_low_db, reward_snr_high_db].
    snr_span_db -- busy SNRs are uniform in dB over [snr_min_db, snr_min_db + span].
    sweep_axis -- one of none, rho_over_r, K_over_N, snr_min_db.
    roc_lambdas -- MWC lambdas of a ROC run as fractions of lambda_max, the
                   smallest lambda that zeroes the estimate of a trial.
    '''
    mode: str = "SS"
    n_resources: int = 60
    horizon: int = 30
    policies: Tuple[str, ...] = ("DI", "GT(2)")
    trials: int = 10000
    master_seed: int = 0
    output_path: Optional[str] = None
    sweep_axis: str = "none"
    sweep_values: Tuple[float, ...] = ()

    rho_over_r: float = 5.0
    unit_rewards: bool = False
    reward_snr_low_db: float = 10.0
    reward_snr_high_db: float = 20.0
    prior: str = "uniform"
    prior_empty: float = 0.9
    prior_margin: float = 1e-6
    omega_low: float = 0.7
    omega_high: float = 0.95
    noise_power: float = 1.0
    snr_min_db: float = 10.0
    snr_span_db: float = 10.0

    averaging: int = 10
    lasso_lambda: Optional[float] = None
    detect_threshold: Optional[float] = None
    mwc_channels: int = 30
    mwc_multiplier: int = 1
    mwc_lambda: float = 1.0
    roc_lambdas: Tuple[float, ...] = (1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001, 0.0003, 0.0001)
    workers: Optional[int] = None

    def __post_init__(self):
        Mode.parse(self.mode)
        for name in ("policies", "sweep_values", "roc_lambdas"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.trials < 1:
            raise ValidationError("trials = {0} must be at least 1".format(self.trials), bound=1)
        if self.n_resources < 1:
            raise ValidationError("n_resources = {0} must be at least 1".format(self.n_resources), bound=1)
        if self.horizon < 2:
            raise ValidationError("horizon = {0} must be at least 2".format(self.horizon), bound=2)
        if self.sweep_axis not in AXES:
            raise ValidationError("sweep_axis {0!r} is not one of {1}".format(self.sweep_axis, ", ".join(AXES)))
        if self.prior not in PRIORS:
            raise ValidationError("prior {0!r} is not one of {1}".format(self.prior, ", ".join(PRIORS)))
        if not self.policies:
            raise ValidationError("at least one policy is needed")
        if self.rho_over_r <= 0.0 or self.noise_power <= 0.0:
            raise ValidationError("rho_over_r and noise_power must be positive", bound=0.0)
        if self.snr_span_db < 0.0:
            raise ValidationError("snr_span_db = {0} must be non-negative".format(self.snr_span_db), bound=0.0)
        if not 0.0 < self.prior_margin < 0.5:
            raise ValidationError("prior_margin = {0} must lie in (0, 0.5)".format(self.prior_margin))
        if not all(0.0 < f <= 1.0 for f in self.roc_lambdas):
            raise ValidationError("roc_lambdas must lie in (0, 1]", bound=1.0)

    @property
    def mode_value(self):
        return Mode.parse(self.mode)

    @property
    def phi_min(self):
        return self.noise_power * 10.0 ** (self.snr_min_db / 10.0)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def with_axis(self, value):
        '''Config of one grid point of the sweep axis.'''
        if self.sweep_axis == "rho_over_r":
            return self.replace(rho_over_r=float(value))
        if self.sweep_axis == "snr_min_db":
            return self.replace(snr_min_db=float(value))
        if self.sweep_axis == "K_over_N":
            if not value > 0.0:
                raise ValidationError("K/N = {0} must be positive".format(value), bound=0.0)
            return self.replace(n_resources=max(1, int(round(self.horizon / float(value)))))
        return self


def default_workers():
    '''Worker count from ACTIVESENSE_WORKERS, 1 when unset or invalid.'''
    value = os.environ.get("ACTIVESENSE_WORKERS", "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _prior_bound(mode, reward, penalty):
    if mode is Mode.SS:
        return penalty / (penalty + reward)
    return reward / (penalty + reward)


def draw_ensemble(config, rng):
    '''Rewards, penalties and priors of one experiment, validated.'''
    mode = config.mode_value
    n = config.n_resources
    if config.unit_rewards:
        reward = np.ones(n)
    else:
        snr_db = rng.uniform(config.reward_snr_low_db, config.reward_snr_high_db, n)
        reward = np.log2(1.0 + 10.0 ** (snr_db / 10.0))
    penalty = config.rho_over_r * reward
    bound = _prior_bound(mode, reward, penalty)

    if config.prior == "fixed":
        omega = np.full(n, config.prior_empty)
    elif config.prior == "boundary":
        step = -config.prior_margin if mode is Mode.SS else config.prior_margin
        omega = bound + step
    elif mode is Mode.SS:
        if not np.all(config.omega_low < bound):
            raise ValidationError("omega_low = {0} is not below the prior bound {1}".format(
                config.omega_low, float(np.min(bound))), bound=float(np.min(bound)))
        omega = rng.uniform(config.omega_low, bound)
    else:
        if not np.all(config.omega_high > bound):
            raise ValidationError("omega_high = {0} is not above the prior bound {1}".format(
                config.omega_high, float(np.max(bound))), bound=float(np.max(bound)))
        # (bound, omega_high], never the bound itself
        omega = bound + (config.omega_high - bound) * (1.0 - rng.random(n))

    return validate_ensemble(omega, reward, penalty, np.full(n, config.noise_power),
                             config.phi_min, mode, config.horizon)


def load_config(path):
    with io.open(path, encoding="utf8") as fp:
        document = json.load(fp)
    return config_from_dict(document)


def config_from_dict(document):
    known = set(f.name for f in dataclasses.fields(ExperimentConfig))
    unknown = sorted(set(document) - known)
    if unknown:
        raise ValidationError("unknown configuration keys: {0}".format(", ".join(unknown)))
    return ExperimentConfig(**document)


def dump_config(config, path):
    with io.open(path, "w", encoding="utf8") as fp:
        json.dump(dataclasses.asdict(config), fp, indent=2, sort_keys=True)
        fp.write("\n")


def register_preset(name, config):
    _presets[name] = config


def get_preset(name):
    try:
        return _presets[name]
    except KeyError:
        raise ValidationError("{0} preset is not defined".format(name))


def presets():
    return OrderedDict(_presets)


_presets = OrderedDict()

_rho_grid = (0.5, 1.0, 2.0, 5.0, 10.0)
_k_over_n_grid = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5)
_snr_grid = (0.0, 5.0, 10.0, 15.0, 20.0)

register_preset("fig3_ss", ExperimentConfig(
    mode="SS", n_resources=60, horizon=30, policies=("DI", "GT(2)", "GT(3)", "MAP(2)"),
    sweep_axis="rho_over_r", sweep_values=_rho_grid, unit_rewards=True, prior="boundary",
    snr_span_db=0.0))
register_preset("fig3_radar", ExperimentConfig(
    mode="R", n_resources=60, horizon=30, policies=("DI", "GT(2)", "GT(3)", "MAP(2)"),
    sweep_axis="rho_over_r", sweep_values=_rho_grid, unit_rewards=True, prior="boundary",
    snr_span_db=0.0))
register_preset("fig4_k10", ExperimentConfig(
    horizon=10, n_resources=40, policies=("DI", "GT(2)", "GT(3)"),
    sweep_axis="K_over_N", sweep_values=_k_over_n_grid))
register_preset("fig4_k30", ExperimentConfig(
    horizon=30, n_resources=120, policies=("DI", "GT(2)", "GT(3)"),
    sweep_axis="K_over_N", sweep_values=_k_over_n_grid))
register_preset("fig5_k10", ExperimentConfig(
    horizon=10, n_resources=20, policies=("DI", "GT(2)", "GT(3)", "LASSO"),
    sweep_axis="snr_min_db", sweep_values=_snr_grid))
register_preset("fig5_k30", ExperimentConfig(
    horizon=30, n_resources=20, policies=("DI", "GT(2)", "GT(3)", "LASSO"),
    sweep_axis="snr_min_db", sweep_values=_snr_grid))
register_preset("fig6_10db", ExperimentConfig(
    n_resources=150, horizon=30, policies=("DI", "GT(2)", "MWC"), unit_rewards=True,
    rho_over_r=19.0, prior="boundary", snr_min_db=10.0, snr_span_db=0.0,
    mwc_channels=30))
register_preset("fig6_20db", ExperimentConfig(
    n_resources=150, horizon=30, policies=("DI", "GT(2)", "MWC"), unit_rewards=True,
    rho_over_r=19.0, prior="boundary", snr_min_db=20.0, snr_span_db=0.0,
    mwc_channels=30))
