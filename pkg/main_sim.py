import argparse
import logging
import os
import sys
import time

import numpy as np

import cliffsim.methods as methods
from cliffsim.checks import run_checks
from cliffsim.circuits import BlochRotation, Geometry, random_clifford_circuit, read_circuit
from cliffsim.diagnostics import COMPONENT_FIELDS, SUMMARY_FIELDS, component_size_stats, depth_thresholds
from cliffsim.exceptions import CliffsimError, ConfigError
from cliffsim.noise import Depolarizing, parse_noise
from cliffsim.oracle import anticoncentration_bound, collision_pauli_bound, collision_probability
from utils import *

COMMANDS = ("sample", "verify", "percolation", "anticoncentration", "bench")
KINDS = ("clifford", "ccc", "cm", "iqp")


def build_parser():
    parser = argparse.ArgumentParser(description='Exact sampling from noisy Clifford and IQP+CNOT circuits')
    parser.add_argument('command', choices=COMMANDS, help='what to run')

    # Circuit and noise
    parser.add_argument('--circuit', type=str, default=None, help='circuit file')
    parser.add_argument('--kind', type=str, default='clifford', choices=KINDS, help='circuit kind')
    parser.add_argument('--noise', type=str, default='depolarizing:0.1',
                        help="'depolarizing:G' or 'pauli:PX,PY,PZ' (default: depolarizing:0.1)")
    parser.add_argument('--rotation', type=str, default=None,
                        help="conjugating rotation 'ax,ay,az,theta' for --kind ccc (default: Hadamard)")

    # Sampling
    parser.add_argument('--shots', type=int, default=100, help='number of shots (default: 100)')
    parser.add_argument('--seed', default=int(time.time() * 1000) % 100000, type=int, help="random seed")
    parser.add_argument('--cutoff-log2', dest='cutoff_log2', type=int, default=methods.DEFAULT_CUTOFF_LOG2,
                        help='largest group rank enumerated before a shot aborts (default: 22)')
    parser.add_argument("--record-timing", dest='record_timing', default=False, type=str_to_bool,
                        help="write measured wall times into the shot CSV")

    # Diagnostics
    parser.add_argument('--trials', type=int, default=100, help='configurations or circuits per diagnostic')
    parser.add_argument('--qubits', type=int, default=None, help='qubits for generated circuits')
    parser.add_argument('--depth', type=int, default=None, help='gate layers for generated circuits')
    parser.add_argument('--sizes', type=int, nargs='+', default=[64, 128, 256, 512], help='bench qubit counts')
    parser.add_argument('--suite', type=str, action='append', default=None, help='verify only these suites')
    parser.add_argument("--inject-fault", dest='inject_fault', default=False, type=str_to_bool,
                        help="corrupt the exactness suites so verify must fail")
    parser.add_argument("--quick", default=False, type=str_to_bool,
                        help="run the verify suites at reduced scale")

    # Output
    parser.add_argument('--out', type=str, default=None, help='per-shot / per-trial CSV')
    parser.add_argument('--report', type=str, default=None, help='summary CSV')
    parser.add_argument('--config', type=str, default=None, help='run-config file; explicit flags win')
    parser.add_argument('--log', type=str, default='./logs/cliffsim.log', help='logging file')
    parser.add_argument("--verbose", default=False, type=str_to_bool, help="log at DEBUG level")
    return parser


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        known = {a.dest for a in parser._actions}
        values = read_run_config(args.config)
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError("unknown run-config keys: {}".format(", ".join(unknown)))
        if 'sizes' in values:
            values['sizes'] = [int(v) for v in values['sizes']]
        parser.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def setup_logging(args):
    directory = os.path.dirname(args.log)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    log_format = '%(asctime)s %(message)s'
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    logging.basicConfig(stream=sys.stdout, level=logging.DEBUG if args.verbose else logging.INFO,
                        format=log_format, datefmt='%m/%d %I:%M:%S %p')
    fh = logging.FileHandler(os.path.join(args.log))
    fh.setFormatter(logging.Formatter(log_format))
    root.addHandler(fh)


def validate(args):
    if args.shots < 1:
        raise ConfigError("--shots must be at least 1")
    if args.trials < 1:
        raise ConfigError("--trials must be at least 1")
    if not 0 <= args.seed < 1 << 64:
        raise ConfigError("--seed must be a 64-bit unsigned value")
    if args.cutoff_log2 < 0:
        raise ConfigError("--cutoff-log2 must be nonnegative")
    if args.circuit is not None and not os.path.isfile(args.circuit):
        raise ConfigError("circuit file {} does not exist".format(args.circuit))
    args.model = parse_noise(args.noise)
    return args


def _output(args, name):
    return args.out or os.path.join('results', name + '.csv')


def _report(args, name):
    return args.report or os.path.join('results', name + '_summary.csv')


def build_sampler(args):
    if args.circuit is None:
        raise ConfigError("sample needs --circuit")
    circuit = read_circuit(args.circuit, 'iqp' if args.kind == 'iqp' else 'clifford')
    rotation = BlochRotation.parse(args.rotation) if args.rotation else BlochRotation.hadamard()
    return methods.__dict__[args.kind.capitalize()](circuit, args.model, args.cutoff_log2, rotation=rotation)


SAMPLE_SUMMARY_FIELDS = ('kind', 'noise', 'seed', 'shots', 'aborted', 'abort_rate', 'mean_max_component',
                         'peak_max_component', 'mean_max_rank', 'peak_max_rank', 'mean_work', 'mean_wall_micros')
VERIFY_FIELDS = ('check', 'measured', 'bound', 'passed', 'detail')
BENCH_FIELDS = ('n', 'depth', 'gamma', 'shots', 'mean_seconds', 'peak_seconds', 'mean_work', 'aborted')
BENCH_SUMMARY_FIELDS = ('sizes', 'depth', 'gamma', 'fit_exponent')


def cmd_sample(args):
    sampler = build_sampler(args)
    rec = init_recorder()
    component, rank = AverageMeter('Component', ':.1f'), AverageMeter('Rank', ':.1f')
    work, shot_time = AverageMeter('Work', ':.1f'), AverageMeter('Shot', ':.0f', unit='us')
    rows = []
    for report in ShotLoaderX(sampler, args.seed, args.shots, worker_count()):
        record_shot(rec, report)
        component.update(report.max_component)
        rank.update(report.max_rank)
        work.update(report.work)
        shot_time.update(report.wall_micros)
        rows.append(report.to_row(args.record_timing))
        logging.debug("shot %d: %s", report.shot, report.hex_bits())
    write_csv(_output(args, 'samples'), methods.CSV_FIELDS, rows)
    aborts = int(np.sum(rec.aborted))
    summary = (args.kind, str(args.model), args.seed, args.shots, aborts, aborts / args.shots, component.avg,
               component.peak, rank.avg, rank.peak, work.avg, shot_time.avg if args.record_timing else 0)
    write_csv(_report(args, 'samples'), SAMPLE_SUMMARY_FIELDS, [summary])
    logging.info("%d shots, abort rate %s (added TV distance at most this), %s, %s, %s", args.shots,
                 format_float(aborts / args.shots), component, rank, shot_time)
    return 0


def cmd_verify(args):
    try:
        results = run_checks(args.seed, args.suite, args.inject_fault, args.quick)
    except KeyError as e:
        raise ConfigError(str(e))
    write_csv(_report(args, 'verify'), VERIFY_FIELDS, [r.to_row() for r in results])
    scale = 'quick' if args.quick else 'full'
    failed = [r.name for r in results if not r.passed]
    if failed:
        logging.info("%s scale: %d of %d checks failed: %s", scale, len(failed), len(results), ", ".join(failed))
        return 1
    logging.info("%s scale: all %d checks passed", scale, len(results))
    return 0


def _depolarizing(args):
    if not isinstance(args.model, Depolarizing):
        raise ConfigError("{} takes depolarizing noise".format(args.command))
    return args.model


def cmd_percolation(args):
    model = _depolarizing(args)
    if args.circuit is not None:
        circuit = read_circuit(args.circuit)
    else:
        n, d = args.qubits or 64, args.depth or 12
        circuit = random_clifford_circuit(n, d, shot_rng(args.seed, 1 << 32), Geometry((n,)))
    if circuit.geometry is None:
        raise ConfigError("percolation needs a circuit with a lattice")
    stats = component_size_stats(circuit, model, args.trials, args.seed)
    write_csv(_output(args, 'percolation'), COMPONENT_FIELDS, stats.rows)
    write_csv(_report(args, 'percolation'), SUMMARY_FIELDS, stats.summary_rows(circuit.depth, circuit.geometry.D))
    if 0 < model.gamma < 1:
        thresholds = depth_thresholds(model.gamma, circuit.geometry.D, circuit.n if circuit.n > 1 else None)
        logging.info("local threshold %d, non-local threshold %s, circuit depth %d", thresholds.local_depth,
                     thresholds.nonlocal_depth, circuit.depth)
    logging.info("max component size: mean %s over %d trials", format_float(stats.max_sizes.mean()), args.trials)
    return 0


def cmd_anticoncentration(args):
    model = _depolarizing(args)
    if args.circuit is not None:
        circuits = [read_circuit(args.circuit)]
    else:
        n, d = args.qubits or 3, args.depth or 10
        circuits = [random_clifford_circuit(n, d, shot_rng(args.seed, k)) for k in range(args.trials)]
    rows, failed = [], 0
    for k, c in enumerate(circuits):
        value = collision_probability(c, model)
        pauli = collision_pauli_bound(c, model)
        bound = anticoncentration_bound(c.n, c.noise_layers, model.gamma)
        ok = value <= bound + 1e-12 and value <= pauli + 1e-12
        failed += not ok
        rows.append((k, c.n, c.noise_layers, model.gamma, value, pauli, bound, int(ok)))
    write_csv(_output(args, 'anticoncentration'),
              ('circuit', 'n', 'layers', 'gamma', 'collision', 'pauli_bound', 'bound', 'passed'), rows)
    logging.info("%d of %d circuits within the anticoncentration bound", len(rows) - failed, len(rows))
    return 1 if failed else 0


def cmd_bench(args):
    model = _depolarizing(args)
    d = args.depth or 16
    rows = []
    for k, n in enumerate(args.sizes):
        circuit = random_clifford_circuit(n, d, shot_rng(args.seed, k), Geometry((n,)))
        sampler = methods.Clifford(circuit, model, args.cutoff_log2)
        shot_time, work = AverageMeter('Time', ':.6f', unit='s'), AverageMeter('Work', ':.1f')
        aborts = 0
        for shot in range(args.shots):
            (_, report), seconds = timed(sampler.run_shot, args.seed, shot)
            shot_time.update(seconds)
            work.update(report.work)
            aborts += report.aborted
        logging.info("n=%d d=%d: %s %s aborts %d", n, d, shot_time, work, aborts)
        rows.append((n, d, model.gamma, args.shots, shot_time.avg, shot_time.peak, work.avg, aborts))
    write_csv(_output(args, 'bench'), BENCH_FIELDS, rows)
    if len(rows) > 1:
        slope = float(np.polyfit(np.log([r[0] for r in rows]), np.log([max(r[4], 1e-12) for r in rows]), 1)[0])
        sizes = ' '.join(str(r[0]) for r in rows)
        write_csv(_report(args, 'bench'), BENCH_SUMMARY_FIELDS, [(sizes, d, model.gamma, slope)])
        logging.info("mean shot time grows like n^%s", format_float(slope))
    return 0


def main(argv=None):
    try:
        args = parse_args(argv)
    except CliffsimError as e:
        print(e, file=sys.stderr)
        return e.exit_code
    setup_logging(args)
    try:
        validate(args)
        logging.info("command %s, seed %d", args.command, args.seed)
        return globals()['cmd_' + args.command](args)
    except CliffsimError as e:
        logging.error("%s: %s", type(e).__name__, e)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
