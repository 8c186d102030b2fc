"""Stochastic noise configurations and their propagation to the circuit input.

Noise acts at ``d + 1`` layers: layer 0 before the first gate layer and layer
``t`` right after gate layer ``t``.
"""
import logging
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from ..exceptions import ConfigError
from ..linalg.gf2 import Gf2Matrix
from ..linalg.pauli import PauliString

logger = logging.getLogger(__name__)

PROB_TOL = 1e-12


class Depolarizing(NamedTuple):
    gamma: float

    def validate(self) -> "Depolarizing":
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError("depolarizing rate must lie in [0, 1], got {}".format(self.gamma))
        return self

    def as_pauli_channel(self) -> "PauliChannel":
        q = self.gamma / 4
        return PauliChannel(q, q, q)

    def __str__(self):
        return "depolarizing:{!r}".format(self.gamma)


class PauliChannel(NamedTuple):
    p_x: float
    p_y: float
    p_z: float

    def validate(self) -> "PauliChannel":
        if min(self) < 0 or sum(self) > 1 + PROB_TOL:
            raise ConfigError("infeasible Pauli channel {}".format(tuple(self)))
        return self

    @property
    def p_i(self) -> float:
        return max(0.0, 1.0 - sum(self))

    def as_pauli_channel(self) -> "PauliChannel":
        return self

    def __str__(self):
        return "pauli:{!r},{!r},{!r}".format(*self)


def parse_noise(text: str):
    """``depolarizing:G`` / ``pauli:PX,PY,PZ`` (a space may replace the colon)."""
    kind, _, rest = text.strip().replace(" ", ":", 1).partition(":")
    try:
        values = [float(v) for v in rest.replace(" ", ",").split(",") if v]
    except ValueError:
        raise ConfigError("bad noise spec {!r}".format(text))
    if kind.lower() == "depolarizing" and len(values) == 1:
        return Depolarizing(values[0]).validate()
    if kind.lower() == "pauli" and len(values) == 3:
        return PauliChannel(*values).validate()
    raise ConfigError("noise must be 'depolarizing:G' or 'pauli:PX,PY,PZ', got {!r}".format(text))


class Event(Enum):
    IDENTITY = "I"
    X_INPLACE = "X"
    Z_DET = "Z"
    Y_DET = "Y"
    PROJ_Z = "PiZ"
    X_PROJ_Z = "XPiZ"

    @property
    def projects(self) -> bool:
        return self in (Event.PROJ_Z, Event.X_PROJ_Z)


def decompose_pauli_channel(p_x: float, p_y: float, p_z: float) -> Dict[Event, float]:
    """Split a Pauli channel into projector and deterministic events.

    Takes 2 min(p_I, p_Z) as Pi_Z and 2 min(p_X, p_Y) as X o Pi_Z, leaving the
    remainder as deterministic identity, X, Y and Z events.
    """
    channel = PauliChannel(p_x, p_y, p_z).validate()
    p_i = channel.p_i
    q1 = 2 * min(p_i, p_z)
    q2 = 2 * min(p_x, p_y)
    return {
        Event.IDENTITY: p_i - q1 / 2,
        Event.X_INPLACE: p_x - q2 / 2,
        Event.Y_DET: p_y - q2 / 2,
        Event.Z_DET: p_z - q1 / 2,
        Event.PROJ_Z: q1,
        Event.X_PROJ_Z: q2,
    }


_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)

EVENT_KRAUS = {
    Event.IDENTITY: [_I2],
    Event.X_INPLACE: [_X],
    Event.Y_DET: [_Y],
    Event.Z_DET: [_Z],
    Event.PROJ_Z: [_I2 / np.sqrt(2), _Z / np.sqrt(2)],
    Event.X_PROJ_Z: [_X / np.sqrt(2), _X @ _Z / np.sqrt(2)],
}


def superoperator(kraus) -> np.ndarray:
    """Row-major vec superoperator sum_k K (x) K*."""
    return sum(np.kron(k, k.conj()) for k in kraus)


def mixture_superoperator(mixture: Dict[Event, float]) -> np.ndarray:
    return sum(p * superoperator(EVENT_KRAUS[e]) for e, p in mixture.items())


def channel_superoperator(channel: PauliChannel) -> np.ndarray:
    return superoperator([np.sqrt(channel.p_i) * _I2, np.sqrt(channel.p_x) * _X,
                          np.sqrt(channel.p_y) * _Y, np.sqrt(channel.p_z) * _Z])


class ErrorConfiguration(NamedTuple):
    """Fired noise sites; ``tags`` is None for depolarizing configurations."""

    n: int
    depth: int
    sites: Tuple[Tuple[int, int], ...]
    tags: Optional[Tuple[Event, ...]] = None

    def __len__(self):
        return len(self.sites)

    def items(self):
        tags = self.tags if self.tags is not None else (None,) * len(self.sites)
        return zip(self.sites, tags)

    def with_event(self, *events: Event):
        return [site for site, tag in self.items() if tag in events]


def sample_error_configuration(rng: np.random.Generator, n: int, d: int, model) -> ErrorConfiguration:
    shape = (d + 1, n)
    if isinstance(model, Depolarizing):
        fired = np.argwhere(rng.random(shape) < model.gamma)
        return ErrorConfiguration(n, d, tuple((int(t), int(q)) for t, q in fired))
    mixture = decompose_pauli_channel(*model)
    events = [e for e in mixture if e is not Event.IDENTITY]
    cut = np.cumsum([mixture[e] for e in events])
    draws = np.searchsorted(cut, rng.random(shape), side="right")
    fired = np.argwhere(draws < len(events))
    return ErrorConfiguration(n, d, tuple((int(t), int(q)) for t, q in fired),
                              tuple(events[draws[t, q]] for t, q in fired))


class PropagatedErrorSet(object):
    """Generators M_b at the circuit input, stored as phase-0 Pauli strings."""

    def __init__(self, n: int, generators: List[PauliString]):
        self.n = n
        self.generators = [g.hermitian() for g in generators]

    def __len__(self):
        return len(self.generators)

    @property
    def tableau(self) -> Gf2Matrix:
        return Gf2Matrix([g.symplectic_vector().bits for g in self.generators], 2 * self.n)

    @property
    def z_parts(self) -> Gf2Matrix:
        return Gf2Matrix([g.z for g in self.generators], self.n)


def propagate_errors(c, b: ErrorConfiguration) -> PropagatedErrorSet:
    """Adds C_t^dagger(X_i) and C_t^dagger(Z_i) per depolarizing site; Z-projector
    events contribute only the Z image."""
    if b.depth > c.depth or b.n != c.n:
        raise ValueError("configuration does not fit the circuit")
    gens = []
    for (t, q), tag in b.items():
        if tag is None:
            gens.append(c.conjugate_backward(PauliString.single(c.n, q, "X"), t))
        elif not tag.projects:
            continue
        gens.append(c.conjugate_backward(PauliString.single(c.n, q, "Z"), t))
    logger.debug("propagated %d sites into %d generators", len(b), len(gens))
    return PropagatedErrorSet(c.n, gens)


def survival_probability(c, s: PauliString, gamma: float) -> float:
    """(1 - gamma) ** sum_t |C_t(s)| over the d + 1 noise layers."""
    if not s.is_hermitian:
        raise ValueError("survival probability needs a Hermitian Pauli")
    return float((1.0 - gamma) ** sum(c.weight_profile(s)))
