#!/usr/bin/env python3
# -*- coding: ascii -*-
import logging
import sys
from argparse import SUPPRESS, Action, ArgumentParser

import activesense
from activesense._config import ExperimentConfig, draw_ensemble, get_preset, load_config, presets
from activesense._misc import ensemble_stream, format_float
from activesense._simulation import SweepRow, monte_carlo, policy_for, roc, sweep, write_csv

log = logging.getLogger("activesense")


class PrintPresets(Action):
    def __init__(self, option_strings, dest=SUPPRESS, default=SUPPRESS, help=None):
        super(PrintPresets, self).__init__(
            option_strings=option_strings,
            dest=dest,
            default=default,
            nargs=0,
            help=help,
        )

    def __call__(self, parser, namespace, values, option_string=None):
        message = "".join(name + "\n" for name in presets())
        parser.exit(message=message)


def _setup_logging(verbose):
    handlers = [h for h in log.handlers if type(h) is logging.StreamHandler]
    if handlers:
        handlers[0].setStream(sys.stderr)
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
        log.addHandler(handler)
    log.setLevel(logging.DEBUG if verbose else logging.INFO)


def build_config(opts):
    if opts.config:
        config = load_config(opts.config)
    elif opts.preset:
        config = get_preset(opts.preset)
    else:
        config = ExperimentConfig()
    changes = {}
    if opts.seed is not None:
        changes["master_seed"] = opts.seed
    if opts.trials is not None:
        changes["trials"] = opts.trials
    if opts.out is not None:
        changes["output_path"] = opts.out
    if opts.policy:
        changes["policies"] = tuple(name.strip() for name in opts.policy.split(",") if name.strip())
    if opts.workers is not None:
        changes["workers"] = opts.workers
    return config.replace(**changes) if changes else config


def print_plan(config, out):
    ensemble = draw_ensemble(config, ensemble_stream(config.master_seed))
    for name in config.policies:
        policy = policy_for(config, name)
        plan = policy.plan(ensemble)
        out.write("policy {0}\n".format(policy.label))
        out.write("members gamma alpha beta_max u\n")
        for cycle in plan.cycles:
            out.write("{0} {1} {2} {3} {4}\n".format(
                ",".join(str(i) for i in cycle.members), format_float(cycle.threshold),
                format_float(cycle.alpha), format_float(cycle.beta_max), format_float(cycle.unit_utility)))
        out.write("kappa {0}\n".format(plan.kappa))
        out.write("expected_utility {0}\n".format(format_float(plan.expected_utility)))


def _emit(rows, config):
    if config.output_path is None:
        write_csv(rows, sys.stdout)


def main(argv=None):
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", action="store", dest="config")
    common.add_argument("--preset", action="store", dest="preset")
    common.add_argument("--seed", action="store", dest="seed", type=int)
    common.add_argument("--trials", action="store", dest="trials", type=int)
    common.add_argument("--out", action="store", dest="out")
    common.add_argument("--policy", action="store", dest="policy", help="comma separated, ex. DI,GT(2)")
    common.add_argument("--workers", action="store", dest="workers", type=int)
    common.add_argument("-v", "--verbose", action="store_true", dest="verbose")

    parser = ArgumentParser(prog="activesense")
    parser.add_argument("--print-presets", action=PrintPresets)
    commands = parser.add_subparsers(dest="command")
    commands.required = True
    for name in ("plan", "simulate", "sweep", "roc"):
        commands.add_parser(name, parents=[common])

    opts = parser.parse_args(argv)
    _setup_logging(opts.verbose)

    try:
        config = build_config(opts)
        if opts.command == "plan":
            print_plan(config, sys.stdout)
        elif opts.command == "simulate":
            rows = [SweepRow.from_summary("none", s) for s in monte_carlo(config).values()]
            if config.output_path is not None:
                write_csv(rows, config.output_path)
            _emit(rows, config)
        elif opts.command == "sweep":
            _emit(sweep(config), config)
        else:
            _emit(roc(config), config)
    except activesense.Error as e:
        parser.exit(status=1, message="activesense: error: {0}\n".format(e))


if "__main__" == __name__:
    main()
