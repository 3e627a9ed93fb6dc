# Copyright (c) 2024 The comparator_bandits developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You may obtain a copy of the License at
#     https:#www.gnu.org/licenses/gpl-3.0.txt

""" Command-line front end: ``comparator_bandits run|verify|sweep --config FILE`` """

import argparse
import logging
import multiprocessing as mp
import os
import sys

import numpy as np

from .bounds import BOUNDS_BY_MODE, bound_inputs, make_report
from .config import SWEEP_AXES, parse_config
from .errors import AssumptionViolation, ConfigurationError
from .harness import run_episode
from .output import (ensure_dir, render_summary, report_record, write_bound_report,
                     write_ledger_csv, write_ledger_h5, write_sweep_csv)
from .verification import run_suites

logger = logging.getLogger('comparator_bandits')

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ASSUMPTION = 2


# ----------------------------------------------------------------------
def _job(task):
    config, seed = task
    return run_episode(config, seed)


def run_tasks(tasks, parallel=1):

    """ Run (config, seed) tasks; results come back in task order """

    if parallel <= 1 or len(tasks) <= 1:
        return [_job(task) for task in tasks]
    with mp.Pool(processes=parallel) as pool:
        return pool.map(_job, tasks)


# ----------------------------------------------------------------------
def _load(args):
    config = parse_config(args.config)
    overrides = {}
    if args.seed_override is not None:
        overrides['seeds'] = [args.seed_override]
    if args.out is not None:
        overrides['output'] = args.out
    if args.strict_assumptions:
        overrides['strict_assumptions'] = True
    return config.replace(**overrides)


def bound_records(config, ledgers):

    """ One record per (comparator, bound of the mode) with the mean regret over seeds """

    model = config.make_model()
    inputs = bound_inputs(config.W_budget, model)
    records = []
    for cid in ledgers[0].comparators:
        regrets = np.array([ledger.regret(cid) for ledger in ledgers])
        for bound_id in BOUNDS_BY_MODE[config.mode]:
            report = make_report(bound_id, inputs, float(regrets.mean()), cid)
            rec = report_record(report, violations=int(np.sum(regrets > report.rhs)))
            rec['std_regret'] = float(regrets.std(ddof=1)) if regrets.size > 1 else 0.0
            records.append(rec)
    return records


# ----------------------------------------------------------------------
def cmd_run(args):
    config = _load(args)
    ledgers = run_tasks([(config, seed) for seed in config.seeds], args.parallel)

    out = ensure_dir(config.output)
    for seed, ledger in zip(config.seeds, ledgers):
        write_ledger_csv(ledger, os.path.join(out, f'ledger_{seed}.csv'))
        write_ledger_h5(ledger, os.path.join(out, f'ledger_{seed}.h5'))
    if args.export_losses:
        config.make_model().to_csv(os.path.join(out, 'losses.csv'))

    records = bound_records(config, ledgers)
    write_bound_report(records, os.path.join(out, 'bound_report.json'))

    audit = {}
    for ledger in ledgers:
        for name, count in ledger.audit.items():
            audit[name] = audit.get(name, 0) + count
    print(render_summary(config, records, {k: v for k, v in audit.items() if v}))
    return EXIT_OK


# ----------------------------------------------------------------------
def cmd_verify(args):
    config = _load(args) if args.config else None
    results = run_suites(config)
    print('=' * 72)
    for r in results:
        print(f"{r.name:<20} {'PASS' if r.passed else 'FAIL'}  {r.detail}")
    print('=' * 72)
    return EXIT_OK if all(r.passed for r in results) else EXIT_ASSUMPTION


# ----------------------------------------------------------------------
def cmd_sweep(args):
    config = _load(args)
    axis = args.axis or config.sweep_axis
    values = args.values or config.sweep_values
    if not values:
        raise ConfigurationError('sweep needs values, in [sweep] or with --values')

    grid = [config.with_axis(axis, v) for v in values]
    tasks = [(cfg, seed) for cfg in grid for seed in config.seeds]
    ledgers = run_tasks(tasks, args.parallel)

    out = ensure_dir(config.output)
    rows, n = [], len(config.seeds)
    for k, (value, cfg) in enumerate(zip(values, grid)):
        chunk = ledgers[k * n:(k + 1) * n]
        for seed, ledger in zip(config.seeds, chunk):
            write_ledger_csv(ledger, os.path.join(out, f'ledger_{axis}{value:g}_{seed}.csv'))
        for rec in bound_records(cfg, chunk):
            rows.append({'axis': axis, 'value': float(value), 'comparator': rec['comparator'],
                         'mean_regret': rec['regret'], 'std_regret': rec['std_regret'],
                         'bound_id': rec['bound_id'], 'rhs': rec['rhs'], 'slack': rec['slack']})

    path = os.path.join(out, f'sweep_{axis}.csv')
    write_sweep_csv(rows, path)
    print('=' * 72)
    print(f'sweep over {axis}: {len(values)} values x {n} seeds -> {path}')
    print('=' * 72)
    return EXIT_OK


# ----------------------------------------------------------------------
def build_parser():
    parser = argparse.ArgumentParser(
        prog='comparator_bandits',
        description='Exponential weighting against comparator classes: runs, verification and sweeps')
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p, config_required=True):
        p.add_argument('--config', required=config_required, help='run-config INI file')
        p.add_argument('--seed-override', type=int, default=None, help='run this single seed')
        p.add_argument('--out', default=None, help='output directory')
        p.add_argument('--parallel', type=int, default=1, help='worker processes')
        p.add_argument('--strict-assumptions', action='store_true',
                       help='turn diagnostic audits into hard failures')
        p.add_argument('--verbose', action='store_true', help='debug logging')

    p = sub.add_parser('run', help='run every seed of a config')
    common(p)
    p.add_argument('--export-losses', action='store_true', help='also write the loss matrix CSV')
    p.set_defaults(func=cmd_run)

    p = sub.add_parser('verify', help='oracle, affine-invariance, simplex and monotone-eta suites')
    common(p, config_required=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('sweep', help='grid of runs over one axis')
    common(p)
    p.add_argument('--axis', choices=SWEEP_AXES, default=None)
    p.add_argument('--values', type=float, nargs='+', default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


# ----------------------------------------------------------------------
def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    try:
        return args.func(args)
    except ConfigurationError as err:
        for msg in err.messages:
            logger.error('config: %s', msg)
        return EXIT_CONFIG
    except AssumptionViolation as err:
        logger.error('%s', err)
        return EXIT_ASSUMPTION


if __name__ == '__main__':
    sys.exit(main())
