"""Closed-form depth thresholds and percolation bounds.

Every evaluator takes the layer count it should use as an explicit argument;
callers pass ``c.noise_layers`` (gate layers + 1) to match the samplers.
"""
import math
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import comb

from ..exceptions import ConfigError
from ..noise.noise import Event, decompose_pauli_channel


def _check_gamma(gamma: float):
    if not 0.0 < gamma < 1.0:
        raise ConfigError("gamma must lie strictly between 0 and 1, got {}".format(gamma))


class DepthThresholds(NamedTuple):
    gamma: float
    D: int
    n: Optional[int]
    local_constant: float
    local_depth_constant: int
    lambert_constant: float
    local_depth_lambert: int
    nonlocal_depth: Optional[int]

    @property
    def local_depth(self) -> int:
        return max(self.local_depth_constant, self.local_depth_lambert)


def nonlocal_depth(gamma: float, n: int) -> int:
    """Smallest d >= 1 with 3 (1-gamma)^d n <= ln n."""
    if n < 2:
        raise ConfigError("the non-local threshold needs n >= 2")
    target = math.log(n)

    def ok(d):
        return 3.0 * (1.0 - gamma) ** d * n <= target

    d = max(1, math.ceil(math.log(target / (3.0 * n)) / math.log(1.0 - gamma)))
    while d > 1 and ok(d - 1):
        d -= 1
    while not ok(d):
        d += 1
    return d


def depth_thresholds(gamma: float, D: int, n: int = None) -> DepthThresholds:
    _check_gamma(gamma)
    if D < 1:
        raise ConfigError("lattice dimension must be positive")
    constant = 4 * 3 ** D * (3 ** D * math.log(2) + 2) / gamma
    lambert = 4 / gamma * math.log(3 * (24 * D / gamma) ** D)
    far = nonlocal_depth(gamma, n) if n is not None else None
    return DepthThresholds(gamma, D, n, constant, math.ceil(constant), lambert, max(1, math.ceil(lambert)), far)


def expected_group_size_bound(layers: int, gamma: float, size: int) -> float:
    return float(layers * math.exp(3.0 * (1.0 - gamma) ** layers * size))


def tail_bound(n: int, layers: int, x: float, d: int, D: int) -> float:
    """min(1, n L exp(-x / (2d)^D))."""
    return float(min(1.0, n * layers * math.exp(-x / (2 * d) ** D)))


def high_weight_count_bound(n: int, d: int, D: int, k: int, w: int) -> int:
    """n d 2^(3^D k) C(k (6d)^D, w) 3^w, exact."""
    return n * d * 2 ** (3 ** D * k) * int(comb(k * (6 * d) ** D, w, exact=True)) * 3 ** w


def percolation_bracket(d, gamma: float, D: int):
    d = np.asarray(d, dtype=float)
    return gamma * d / (4 * 3 ** D) - 3 ** D * math.log(2) - 3 * (1 - gamma) ** (d / 2) * (6 * d) ** D


def large_component_probability_bound(n: int, d: int, gamma: float, D: int, k: int) -> float:
    exponent = -k * float(percolation_bracket(d, gamma, D))
    try:
        return n * d * math.exp(exponent)
    except OverflowError:
        return math.inf


def percolation_depth(gamma: float, D: int, max_depth: int = 10 ** 7, chunk: int = 1 << 16) -> Optional[int]:
    """Smallest d whose percolation bracket reaches 1, or None below ``max_depth``."""
    _check_gamma(gamma)
    for start in range(1, max_depth + 1, chunk):
        ds = np.arange(start, min(start + chunk, max_depth + 1))
        hit = np.flatnonzero(percolation_bracket(ds, gamma, D) >= 1.0)
        if hit.size:
            return int(ds[hit[0]])
    return None


class IqpGammaReadings(NamedTuple):
    stated: float
    alternative: float
    projector_rate: float


def iqp_gamma_readings(p_x: float, p_y: float, p_z: float) -> IqpGammaReadings:
    """Two readings of the effective IQP noise rate and the rate the decomposition realises."""
    mixture = decompose_pauli_channel(p_x, p_y, p_z)
    return IqpGammaReadings(p_z + min(p_y, p_z), p_z + min(p_x, p_y),
                            mixture[Event.PROJ_Z] + mixture[Event.X_PROJ_Z])
