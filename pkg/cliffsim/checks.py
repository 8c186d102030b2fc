"""Acceptance suites run by ``main_sim.py verify``.

Each suite returns CheckResult rows comparing a measured quantity with the
bound it must respect. Statistical comparisons use a family-wise 3 sigma level:
the per-outcome z threshold is Bonferroni-corrected for the number of outcomes
compared at once. Suite defaults are the full acceptance scale; ``QUICK_SCALE``
holds the reduced arguments used by ``verify --quick``.
"""
import logging
import math
from collections import OrderedDict
from typing import List, NamedTuple

import numpy as np
from scipy.stats import norm

from .circuits.generators import random_clifford_circuit, random_iqp_circuit, random_measurement_basis, \
    random_product_state
from .circuits.geometry import Geometry
from .circuits.states import BlochRotation
from .diagnostics.bounds import expected_group_size_bound
from .diagnostics.percolation import component_sublattices_connected, component_size_stats, sublattice_graph
from .exceptions import ToleranceError
from .linalg.gf2 import EchelonBasis, Gf2Matrix
from .linalg.pauli import PauliString
from .methods.clifford import Ccc, configuration_distribution, plan_components
from .methods.iqp import ComponentInput, configuration_distribution_iqp, iqp_converter
from .methods.samplermethod import shot_rng
from .noise.noise import Depolarizing, ErrorConfiguration, PauliChannel, propagate_errors, \
    sample_error_configuration, survival_probability
from .oracle.counting import enumerate_S_w
from .oracle.density import anticoncentration_bound, collision_pauli_bound, collision_probability, \
    exact_ccc_distribution, exact_iqp_distribution, exact_noisy_distribution

logger = logging.getLogger(__name__)

EXACT_TOL = 1e-9
CONVERTER_TOL = 1e-12
FAMILY_TAIL = norm.sf(3.0)
NOT_EXERCISED = "not exercised"


class CheckResult(NamedTuple):
    name: str
    measured: float
    bound: float
    passed: bool
    detail: str = ""

    def to_row(self) -> list:
        return [self.name, self.measured, self.bound, int(self.passed), self.detail]


def unexercised(name: str, bound: float = 0.0) -> CheckResult:
    return CheckResult(name, 0.0, bound, False, NOT_EXERCISED)


def family_threshold(k: int) -> float:
    """z level keeping the family-wise one-sided error of k comparisons at the 3 sigma tail."""
    return float(norm.isf(FAMILY_TAIL / max(1, k)))


def _zscores(samples: np.ndarray, reference: np.ndarray) -> np.ndarray:
    mean = samples.mean(axis=0)
    se = samples.std(axis=0, ddof=1) / math.sqrt(samples.shape[0])
    return np.abs(mean - reference) / (se + 1e-12)


def _exact(name, deviations) -> CheckResult:
    if not len(deviations):
        return unexercised(name, EXACT_TOL)
    worst = float(max(deviations))
    return CheckResult(name, worst, EXACT_TOL, worst < EXACT_TOL)


# --- Clifford -------------------------------------------------------------------

def check_fixed_configuration(seed: int, circuits: int = 50, configs: int = 20, n_max: int = 4,
                              depth_max: int = 4, gamma: float = 0.3, inject_fault: bool = False):
    model = Depolarizing(gamma)
    devs = []
    for i in range(circuits):
        rng = shot_rng(seed, i)
        n, d = int(rng.integers(1, n_max + 1)), int(rng.integers(1, depth_max + 1))
        c = random_clifford_circuit(n, d, rng)
        state, basis = random_product_state(n, rng), random_measurement_basis(n, rng)
        for _ in range(configs):
            b = sample_error_configuration(rng, n, d, model)
            p = configuration_distribution(c, state, basis, b)
            if inject_fault:
                p = np.roll(p, 1)
            devs.append(np.max(np.abs(p - exact_noisy_distribution(c, state, basis, config=b))))
    return [_exact("fixed_configuration", devs)]


def check_channel_average(seed: int, configs: int = 10000, n: int = 3, depth: int = 3,
                          gammas=(0.1, 0.3, 0.7)):
    out = []
    for k, gamma in enumerate(gammas):
        rng = shot_rng(seed, k)
        model = Depolarizing(gamma)
        c = random_clifford_circuit(n, depth, rng)
        state, basis = random_product_state(n, rng), random_measurement_basis(n, rng)
        samples = np.array([configuration_distribution(c, state, basis, sample_error_configuration(rng, n, depth, model))
                            for _ in range(configs)])
        z = _zscores(samples, exact_noisy_distribution(c, state, basis, model))
        limit = family_threshold(z.size)
        out.append(CheckResult("channel_average[gamma={}]".format(gamma), float(z.max()), limit, bool(z.max() <= limit)))
    return out


def _killing_sites(c, s: PauliString) -> np.ndarray:
    """Sites whose propagated X/Z pair does not commute with ``s``."""
    kills = np.zeros((c.depth + 1, c.n), dtype=bool)
    for t in range(c.depth + 1):
        for q in range(c.n):
            single = ErrorConfiguration(c.n, c.depth, ((t, q),))
            kills[t, q] = not all(s.commutes(g) for g in propagate_errors(c, single).generators)
    return kills


def check_survival_law(seed: int, pairs: int = 100, configs: int = 100000, gamma: float = 0.2,
                       chunk: int = 10000):
    z = []
    for i in range(pairs):
        rng = shot_rng(seed, i)
        n, d = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        c = random_clifford_circuit(n, d, rng)
        x, zz = 0, 0
        while not (x or zz):
            x, zz = int(rng.integers(0, 2 ** n)), int(rng.integers(0, 2 ** n))
        s = PauliString(n, x, zz)
        kills = _killing_sites(c, s)
        hits = 0
        # same Bernoulli draws as sample_error_configuration, one (d+1, n) block per configuration
        for start in range(0, configs, chunk):
            fired = rng.random((min(chunk, configs - start), d + 1, n)) < gamma
            hits += int(np.sum(~np.any(fired & kills, axis=(1, 2))))
        p = survival_probability(c, s, gamma)
        se = math.sqrt(max(p * (1 - p), 1e-12) / configs)
        z.append(abs(hits / configs - p) / se)
    limit = family_threshold(len(z))
    return [CheckResult("survival_law", float(max(z)), limit, bool(max(z) <= limit))]


def check_counting_bound(seed: int, circuits: int = 5, regions: int = 30, n_max: int = 5, depth_max: int = 4):
    violations = 0
    for i in range(circuits):
        rng = shot_rng(seed, i)
        n, d = int(rng.integers(2, n_max + 1)), int(rng.integers(1, depth_max + 1))
        c = random_clifford_circuit(n, d, rng)
        for _ in range(regions):
            region = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist()
            for w in range(len(region) + 1):
                try:
                    enumerate_S_w(c, region, w)
                except ToleranceError:
                    violations += 1
    return [CheckResult("counting_bound", float(violations), 0.0, violations == 0)]


# (depth, gamma): at n = 64 and gamma = 0.4 a depth-16 circuit depolarizes every qubit,
# so the deeper case runs where fewer than n sites fire on average
GROUP_SIZE_CASES = ((8, 0.4), (16, 0.05))


def check_expected_group_size(seed: int, n: int = 64, cases=GROUP_SIZE_CASES, configs: int = 1000):
    out = []
    geometry = Geometry((n,))
    for k, (d, gamma) in enumerate(cases):
        name = "expected_group_size[d={},gamma={}]".format(d, gamma)
        rng = shot_rng(seed, k)
        model = Depolarizing(gamma)
        c = random_clifford_circuit(n, d, rng, geometry)
        sizes, bounds = [], []
        for _ in range(configs):
            plan = plan_components(c, sample_error_configuration(rng, n, d, model))
            for comp, r in zip(plan.components, plan.ranks):
                sizes.append(2.0 ** r)
                bounds.append(expected_group_size_bound(c.noise_layers, gamma, len(comp)))
        if not sizes:
            out.append(unexercised(name))
            continue
        sizes = np.array(sizes)
        se = sizes.std(ddof=1) / math.sqrt(sizes.size) if sizes.size > 1 else 0.0
        limit = float(np.mean(bounds) + 3 * se)
        out.append(CheckResult(name, float(sizes.mean()), limit, bool(sizes.mean() <= limit),
                               "{} components".format(sizes.size)))
    return out


def check_percolation(seed: int, sizes=(128, 256, 512), depth: int = 12, gamma: float = 0.2, trials: int = 30):
    out = []
    model = Depolarizing(gamma)
    means = []
    for k, n in enumerate(sizes):
        name = "percolation_tail[n={}]".format(n)
        c = random_clifford_circuit(n, depth, shot_rng(seed, k), Geometry((n,)))
        stats = component_size_stats(c, model, trials, seed + k)
        means.append(float(stats.max_sizes.mean()))
        if not stats.rows:
            out.append(unexercised(name))
            continue
        excess = 0.0
        for x, p, _, bound in stats.summary_rows(depth, 1):
            se = math.sqrt(bound * (1 - bound) / trials)
            excess = max(excess, p - bound - 3 * se)
        out.append(CheckResult(name, excess, 0.0, excess <= 0.0, "{} components".format(len(stats.rows))))
    growth = max((b / a for a, b in zip(sizes, sizes[1:])), default=1.0)
    if len(means) < 2 or min(means) <= 0:
        out.append(unexercised("percolation_sublinear", growth))
        return out
    worst = max(b / a for a, b in zip(means, means[1:]))
    out.append(CheckResult("percolation_sublinear", worst, growth, worst < growth))
    return out


def check_sublattice_connectivity(seed: int, n: int = 48, depth: int = 3, gamma: float = 0.2, trials: int = 20):
    c = random_clifford_circuit(n, depth, shot_rng(seed, 0), Geometry((n,)))
    graph = sublattice_graph(c.geometry, depth)
    bad, seen = 0, 0
    for trial in range(trials):
        plan = plan_components(c, sample_error_configuration(shot_rng(seed, trial + 1), n, depth, Depolarizing(gamma)))
        seen += len(plan.components)
        bad += sum(not component_sublattices_connected(graph, comp) for comp in plan.components)
    if not seen:
        return [unexercised("sublattice_connectivity")]
    return [CheckResult("sublattice_connectivity", float(bad), 0.0, bad == 0, "{} components".format(seen))]


def check_anticoncentration(seed: int, circuits: int = 20, n: int = 3, depth: int = 10, gamma: float = 0.2):
    out = []
    worst_gap, worst_pauli = -math.inf, -math.inf
    model = Depolarizing(gamma)
    bound = anticoncentration_bound(n, depth + 1, gamma)
    for i in range(circuits):
        c = random_clifford_circuit(n, depth, shot_rng(seed, i))
        value = collision_probability(c, model)
        worst_gap = max(worst_gap, value - bound)
        worst_pauli = max(worst_pauli, value - collision_pauli_bound(c, model))
    out.append(CheckResult("anticoncentration", worst_gap + bound, bound, worst_gap <= 0))
    out.append(CheckResult("collision_pauli_bound", worst_pauli, 1e-12, worst_pauli <= 1e-12))
    c = random_clifford_circuit(n, depth, shot_rng(seed, circuits))
    full = collision_probability(c, Depolarizing(1.0))
    out.append(CheckResult("anticoncentration_uniform", abs(full - 2.0 ** -n), 1e-12, abs(full - 2.0 ** -n) < 1e-12))
    return out


def check_conjugated_clifford(seed: int, circuits: int = 20, configs: int = 4, n_max: int = 4, gamma: float = 0.3):
    model = Depolarizing(gamma)
    devs = []
    for i in range(circuits):
        rng = shot_rng(seed, i)
        n, d = int(rng.integers(1, n_max + 1)), int(rng.integers(1, 4))
        c = random_clifford_circuit(n, d, rng)
        axis = rng.standard_normal(3)
        rotation = BlochRotation(axis / np.linalg.norm(axis), float(rng.uniform(0, 2 * np.pi)))
        sampler = Ccc(c, model, rotation=rotation)
        for _ in range(configs):
            b = sample_error_configuration(rng, n, d, model)
            devs.append(np.max(np.abs(sampler.distribution(b) - exact_ccc_distribution(c, rotation, config=b))))
    return [_exact("conjugated_clifford", devs)]


# --- IQP+CNOT -------------------------------------------------------------------

IQP_MODELS = (Depolarizing(0.2), PauliChannel(0.0, 0.0, 0.15))


def check_iqp_fixed_configuration(seed: int, circuits: int = 50, configs: int = 20, n_max: int = 6,
                                  depth_max: int = 4, inject_fault: bool = False):
    devs = []
    for i in range(circuits):
        rng = shot_rng(seed, i)
        n, d = int(rng.integers(1, n_max + 1)), int(rng.integers(1, depth_max + 1))
        c = random_iqp_circuit(n, d, rng)
        channel = IQP_MODELS[i % len(IQP_MODELS)].as_pauli_channel()
        for _ in range(configs):
            b = sample_error_configuration(rng, n, d, channel)
            p = configuration_distribution_iqp(c, b)
            if inject_fault:
                p = np.roll(p, 1)
            devs.append(np.max(np.abs(p - exact_iqp_distribution(c, config=b))))
    return [_exact("iqp_fixed_configuration", devs)]


def check_iqp_channel_average(seed: int, configs: int = 10000, n: int = 3, depth: int = 3):
    out = []
    for k, model in enumerate(IQP_MODELS):
        rng = shot_rng(seed, k)
        c = random_iqp_circuit(n, depth, rng)
        channel = model.as_pauli_channel()
        samples = np.array([configuration_distribution_iqp(c, sample_error_configuration(rng, n, depth, channel))
                            for _ in range(configs)])
        z = _zscores(samples, exact_iqp_distribution(c, model))
        limit = family_threshold(z.size)
        out.append(CheckResult("iqp_channel_average[{}]".format(model), float(z.max()), limit, bool(z.max() <= limit)))
    return out


def _x_power(m: int, g: int) -> np.ndarray:
    idx = np.arange(2 ** m)
    out = np.zeros((2 ** m, 2 ** m))
    out[idx ^ g, idx] = 1.0
    return out


def _group_state(m: int, rows) -> np.ndarray:
    """2^-m sum over the span of X^g."""
    span = [0]
    for r in rows:
        span += [s ^ r for s in span]
    return sum(_x_power(m, g) for g in span) / 2 ** m


def _gate_permutation(m: int, kind: str, a: int, b: int) -> np.ndarray:
    idx = np.arange(2 ** m)
    if kind == "CNOT":
        image = idx ^ (((idx >> a) & 1) << b)
    else:
        image = idx ^ ((((idx >> a) ^ (idx >> b)) & 1) * ((1 << a) | (1 << b)))
    out = np.zeros((2 ** m, 2 ** m))
    out[image, idx] = 1.0
    return out


def converter_error(m: int, rows) -> float:
    """Entrywise error of V rho_G V^dagger = |+><+|^k (x) I/2^(m-k) and of the f-state mixture."""
    g = Gf2Matrix(rows, m)
    conv = iqp_converter(g)
    k = conv.rank
    v = np.eye(2 ** m)
    for kind, a, b in conv.gates():
        v = _gate_permutation(m, kind, a, b) @ v
    rho = _group_state(m, rows)
    target = _group_state(m, [1 << i for i in range(k)])
    err = float(np.max(np.abs(v @ rho @ v.T - target)))
    comp = ComponentInput(tuple(range(m)), list(range(m)), conv, np.zeros(k, dtype=np.int64))
    mix = np.zeros((2 ** m, 2 ** m), dtype=complex)
    for r in range(2 ** (m - k)):
        psi = comp.state(((r >> np.arange(m - k)) & 1).astype(np.uint8)).to_dense()
        mix += np.outer(psi, psi.conj()) / 2 ** (m - k)
    return max(err, float(np.max(np.abs(mix - rho))))


def check_converter_identity(seed: int, groups: int = 100, n_max: int = 6):
    errs = []
    for i in range(groups):
        rng = shot_rng(seed, i)
        m = int(rng.integers(1, n_max + 1))
        basis = EchelonBasis(m)
        rows = [r for r in rng.integers(1, 2 ** m, size=int(rng.integers(0, m + 1))).tolist() if basis.insert(r)]
        errs.append(converter_error(m, rows))
    worst = float(max(errs))
    return [CheckResult("converter_identity", worst, CONVERTER_TOL, worst < CONVERTER_TOL)]


SUITES = OrderedDict([
    ("fixed_configuration", check_fixed_configuration),
    ("channel_average", check_channel_average),
    ("iqp_fixed_configuration", check_iqp_fixed_configuration),
    ("iqp_channel_average", check_iqp_channel_average),
    ("converter_identity", check_converter_identity),
    ("survival_law", check_survival_law),
    ("counting_bound", check_counting_bound),
    ("expected_group_size", check_expected_group_size),
    ("percolation", check_percolation),
    ("sublattice_connectivity", check_sublattice_connectivity),
    ("anticoncentration", check_anticoncentration),
    ("conjugated_clifford", check_conjugated_clifford),
])

QUICK_SCALE = {
    "fixed_configuration": dict(circuits=20, configs=5),
    "channel_average": dict(configs=2000),
    "iqp_fixed_configuration": dict(circuits=10, configs=5, n_max=5),
    "iqp_channel_average": dict(configs=1000),
    "converter_identity": dict(groups=30),
    "survival_law": dict(pairs=20, configs=2000),
    "counting_bound": dict(regions=6),
    "expected_group_size": dict(configs=100),
    "percolation": dict(sizes=(32, 64, 128)),
    "anticoncentration": dict(circuits=5),
    "conjugated_clifford": dict(circuits=10),
}

FAULT_SUITES = ("fixed_configuration", "iqp_fixed_configuration")


def run_checks(seed: int, suites=None, inject_fault: bool = False, quick: bool = False) -> List[CheckResult]:
    names = list(suites) if suites else list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise KeyError("unknown check suite(s): {}".format(", ".join(unknown)))
    logger.info("verify scale: %s", "quick" if quick else "full")
    results = []
    for name in names:
        kwargs = dict(QUICK_SCALE.get(name, {})) if quick else {}
        if inject_fault and name in FAULT_SUITES:
            kwargs["inject_fault"] = True
        for result in SUITES[name](seed, **kwargs):
            logger.info("%-40s measured %.6g bound %.6g %s %s", result.name, result.measured, result.bound,
                        "ok" if result.passed else "FAIL", result.detail)
            results.append(result)
    return results
