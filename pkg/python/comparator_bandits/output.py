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

""" Result files: ledger CSV and HDF5 archive, bound-report JSON, sweep CSV, summary text """

import datetime
import json
import os

import h5py
import numpy as np
from mako.template import Template

FLOAT_FORMAT = '%.12g'

SWEEP_COLUMNS = ('axis', 'value', 'comparator', 'mean_regret', 'std_regret', 'bound_id', 'rhs', 'slack')


def _g(x):
    return FLOAT_FORMAT % x


# ----------------------------------------------------------------------
def write_ledger_csv(ledger, path):

    """ Columns t,arm,eta,eps,exp_loss,regret_<comparator>... """

    ids = list(ledger.comparators)
    columns = [np.arange(1, ledger.T + 1), ledger.arm, ledger.eta, ledger.eps, ledger.exp_loss]
    columns += [ledger.cumulative(cid) for cid in ids]
    header = ','.join(['t', 'arm', 'eta', 'eps', 'exp_loss'] + [f'regret_{cid}' for cid in ids])
    fmt = ['%d', '%d'] + [FLOAT_FORMAT] * (len(columns) - 2)
    np.savetxt(path, np.column_stack(columns), fmt=fmt, delimiter=',', header=header, comments='')


# ----------------------------------------------------------------------
def write_ledger_h5(ledger, path):

    """ Archive every ledger array; comparators under /regret/<id> """

    with h5py.File(path, 'w') as f:
        f.attrs['M'] = ledger.M
        f.attrs['T'] = ledger.T
        if ledger.seed is not None:
            f.attrs['seed'] = ledger.seed
        for name in ('arm', 'p', 'q', 'exp_loss', 'eta', 'eps', 'd', 'v'):
            f.create_dataset(name, data=getattr(ledger, name))
        grp = f.create_group('regret')
        for cid in ledger.comparators:
            sub = grp.create_group(cid)
            sub.create_dataset('arms', data=ledger.comparators[cid])
            sub.create_dataset('cumulative', data=ledger.cumulative(cid))
        audit = f.create_group('audit')
        for name, count in ledger.audit.items():
            audit.attrs[name] = count


# ----------------------------------------------------------------------
def read_ledger_h5(path):

    """ Arrays of an archived ledger as a plain dict """

    with h5py.File(path, 'r') as f:
        out = {name: f[name][()] for name in ('arm', 'p', 'q', 'exp_loss', 'eta', 'eps', 'd', 'v')}
        out['regret'] = {cid: f['regret'][cid]['cumulative'][()] for cid in f['regret']}
        out['attrs'] = dict(f.attrs)
    return out


# ----------------------------------------------------------------------
def report_record(report, violations=None):
    rec = {
        'bound_id': report.bound_id,
        'comparator': report.comparator,
        'rhs': float(_g(report.rhs)),
        'regret': float(_g(report.regret)),
        'slack': float(_g(report.slack)),
        'terms': {k: float(_g(v)) for k, v in report.terms.items()},
        'inputs': {k: (float(_g(v)) if isinstance(v, float) else v) for k, v in report.inputs.items()},
    }
    if violations is not None:
        rec['seed_violations'] = int(violations)
    return rec


def write_bound_report(records, path):

    """ JSON list of bound records; ``timestamp`` is the only varying field """

    doc = {'timestamp': datetime.datetime.now().isoformat(timespec='seconds'), 'reports': records}
    with open(path, 'w') as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write('\n')


# ----------------------------------------------------------------------
def write_sweep_csv(rows, path):
    with open(path, 'w') as f:
        f.write(','.join(SWEEP_COLUMNS) + '\n')
        for row in rows:
            f.write(','.join(_g(row[c]) if isinstance(row[c], float) else str(row[c])
                             for c in SWEEP_COLUMNS) + '\n')


# ----------------------------------------------------------------------
SUMMARY = Template("""\
${'=' * 72}
comparator_bandits run
${'=' * 72}
kernel       : ${config.family} (M=${config.M})
mode         : ${config.mode}
environment  : ${config.environment_family}
T            : ${config.T}
seeds        : ${', '.join(str(s) for s in config.seeds)}
W_budget     : ${fmt(config.W_budget)}
% for name, W in config.complexities.items():
W(${name}) : ${fmt(W)}
% endfor
${'-' * 72}
% for rec in records:
${'%-16s' % rec['bound_id']} ${'%-14s' % rec['comparator']} regret ${fmt(rec['regret'])}  rhs ${fmt(rec['rhs'])}  slack ${fmt(rec['slack'])}${'' if rec['slack'] >= 0 else '  VIOLATED'}
% endfor
% if audit:
${'-' * 72}
% for name, count in audit.items():
audit ${name}: ${count}
% endfor
% endif
${'=' * 72}
""")


def render_summary(config, records, audit=None):
    return SUMMARY.render(config=config, records=records, audit=audit or {}, fmt=_g)


# ----------------------------------------------------------------------
def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path
