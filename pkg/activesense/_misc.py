import math

import numpy as np

# spawn_key prefix that keeps ensemble streams apart from per-trial streams
_ENSEMBLE_KEY = 2 ** 32


def majority_count(n_tests):
    r"""
    Number of positive tests needed to declare a resource busy.

    >>> [majority_count(n) for n in range(1, 7)]
    [1, 1, 2, 2, 3, 3]
    """
    return (n_tests + 1) // 2


def trial_streams(master_seed, trial_index):
    r"""
    Independent generators for the ground truth and the sensing of one trial.

    The streams depend only on (master_seed, trial_index), so any worker can
    rebuild them.

    >>> a, _ = trial_streams(7, 3)
    >>> b, _ = trial_streams(7, 3)
    >>> a.random() == b.random()
    True
    """
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(trial_index),))
    truth_seq, sense_seq = seq.spawn(2)
    return np.random.default_rng(truth_seq), np.random.default_rng(sense_seq)


def ensemble_stream(master_seed, grid_index=0):
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(_ENSEMBLE_KEY, int(grid_index)))
    return np.random.default_rng(seq)


def exact_sum(values):
    r"""
    Correctly rounded sum, independent of the order of the values.

    >>> exact_sum([1e16, 1.0, -1e16]) == exact_sum([1.0, -1e16, 1e16])
    True
    """
    return math.fsum(float(v) for v in values)


def format_float(value):
    r"""
    Stable text form for CSV cells and plan tables.

    >>> format_float(0.1 + 0.2)
    '0.3'
    >>> format_float(float('nan'))
    'nan'
    """
    return "{0:.10g}".format(value)
