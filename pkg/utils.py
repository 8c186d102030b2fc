import csv
import os
import time
from argparse import ArgumentTypeError
from concurrent.futures import ProcessPoolExecutor
from types import SimpleNamespace

import numpy as np
from prefetch_generator import BackgroundGenerator

from cliffsim.exceptions import ConfigError
from cliffsim.methods.samplermethod import shot_rng

LIST_KEYS = ("sizes", "suite")
TRUE_WORDS = frozenset(('yes', 'true', 't', 'y', '1', 'on'))
FALSE_WORDS = frozenset(('no', 'false', 'f', 'n', '0', 'off'))


class AverageMeter(object):
    """Running mean and peak of a per-shot quantity: wall time, group rank, component size, work."""

    def __init__(self, name, fmt=':f', unit=''):
        self.name = name
        self.fmt = fmt
        self.unit = unit
        self.reset()

    def reset(self):
        self.val = 0
        self.avg = 0
        self.sum = 0
        self.count = 0
        self.peak = 0

    def update(self, val, n=1):
        self.peak = val if self.count == 0 else max(self.peak, val)
        self.val = val
        self.sum += val * n
        self.count += n
        self.avg = self.sum / self.count

    def __str__(self):
        fmtstr = '{name} {avg' + self.fmt + '}{unit} (peak {peak' + self.fmt + '}{unit})'
        return fmtstr.format(**self.__dict__)


def str_to_bool(v):
    """argparse type for switches such as ``--record-timing true``; also reads run-config values."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    word = str(v).strip().lower()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    raise ArgumentTypeError('expected a boolean, got {!r}'.format(v))


def format_float(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return '{:.17g}'.format(float(v))
    return str(v)


def write_csv(path, header, rows):
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) for v in row])


def read_run_config(path):
    """``key value...`` lines mirroring the long flags; ``#`` starts a comment."""
    try:
        with open(path) as f:
            lines = f.readlines()
    except OSError as e:
        raise ConfigError("cannot read run config {}: {}".format(path, e))
    values = {}
    for lineno, line in enumerate(lines, 1):
        tokens = line.split('#', 1)[0].split()
        if not tokens:
            continue
        key = tokens[0].lstrip('-').replace('-', '_')
        if len(tokens) < 2:
            raise ConfigError("{} line {}: {} needs a value".format(path, lineno, key))
        if key in LIST_KEYS:
            values[key] = tokens[1:]
        elif key == 'noise':
            values[key] = tokens[1] if len(tokens) == 2 else '{}:{}'.format(tokens[1], ','.join(tokens[2:]))
        else:
            values[key] = ' '.join(tokens[1:])
    return values


def init_recorder():
    rec = SimpleNamespace()
    rec.shot = []
    rec.wall_micros = []
    rec.aborted = []
    rec.max_component = []
    rec.max_rank = []
    rec.work = []
    return rec


def record_shot(rec, report):
    rec.shot.append(report.shot)
    rec.wall_micros.append(report.wall_micros)
    rec.aborted.append(report.aborted)
    rec.max_component.append(report.max_component)
    rec.max_rank.append(report.max_rank)
    rec.work.append(report.work)
    return rec


def _run_shot(task):
    sampler, seed, shot = task
    return sampler.run_shot(seed, shot)[1]


class ShotLoaderX(object):
    """Runs shots ``0..shots-1`` on up to ``workers`` processes and yields their
    reports in shot order; a background thread keeps the pipeline full."""

    def __init__(self, sampler, seed, shots, workers=1, chunksize=16):
        self.sampler = sampler
        self.seed = seed
        self.shots = shots
        self.workers = max(1, workers)
        self.chunksize = chunksize

    def _iter_reports(self):
        tasks = ((self.sampler, self.seed, k) for k in range(self.shots))
        if self.workers == 1:
            for task in tasks:
                yield _run_shot(task)
            return
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            for report in pool.map(_run_shot, tasks, chunksize=self.chunksize):
                yield report

    def _guarded(self):
        # an exception inside the prefetch thread would otherwise never reach the consumer
        try:
            for report in self._iter_reports():
                yield report
        except Exception as e:
            yield e

    def __iter__(self):
        for item in BackgroundGenerator(self._guarded()):
            if isinstance(item, Exception):
                raise item
            yield item

    def __len__(self):
        return self.shots


def worker_count():
    try:
        return max(1, int(os.environ.get('CLIFFSIM_THREADS', '1')))
    except ValueError:
        raise ConfigError('CLIFFSIM_THREADS must be an integer')


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


__all__ = ['AverageMeter', 'str_to_bool', 'format_float', 'write_csv', 'read_run_config', 'init_recorder',
           'record_shot', 'ShotLoaderX', 'worker_count', 'timed', 'shot_rng']
