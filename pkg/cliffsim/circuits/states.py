"""Product input states, single-qubit measurement bases and the
conjugated-Clifford canonicalization."""
import math
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from ..exceptions import ConfigError

BLOCH_TOL = 1e-12

NAMED_STATES: Dict[str, Tuple[float, float, float]] = {
    "|0>": (0.0, 0.0, 1.0),
    "|1>": (0.0, 0.0, -1.0),
    "|+>": (1.0, 0.0, 0.0),
    "|->": (-1.0, 0.0, 0.0),
    "|A>": (math.sqrt(2) / 2, math.sqrt(2) / 2, 0.0),
}

NAMED_BASES: Dict[str, Tuple[float, float, float]] = {
    "Z": (0.0, 0.0, 1.0),
    "X": (1.0, 0.0, 0.0),
    "Y": (0.0, 1.0, 0.0),
}

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _as_vectors(vectors, n=None) -> np.ndarray:
    arr = np.array(vectors, dtype=float)
    if arr.ndim == 1:
        arr = np.tile(arr, (n or 1, 1))
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ConfigError("Bloch data must have shape (n, 3), got {}".format(arr.shape))
    return arr


class ProductState(object):
    """rho = tensor_q (I + b_q . sigma) / 2."""

    def __init__(self, bloch):
        self.bloch = _as_vectors(bloch)
        self.bloch.setflags(write=False)
        norms = np.linalg.norm(self.bloch, axis=1)
        bad = np.flatnonzero(norms > 1 + BLOCH_TOL)
        if bad.size:
            raise ConfigError("qubit {}: Bloch vector longer than 1".format(int(bad[0])))

    @classmethod
    def named(cls, names: Sequence[str]) -> "ProductState":
        try:
            return cls([NAMED_STATES[name] for name in names])
        except KeyError as e:
            raise ConfigError("unknown state {}".format(e))

    @classmethod
    def uniform(cls, n: int, name: str = "|0>") -> "ProductState":
        return cls.named([name] * n)

    @property
    def n(self) -> int:
        return self.bloch.shape[0]

    def qubit_density(self, q: int) -> np.ndarray:
        return bloch_density(self.bloch[q])

    def __eq__(self, other):
        if not isinstance(other, ProductState):
            return NotImplemented
        return np.array_equal(self.bloch, other.bloch)

    def __repr__(self):
        return "ProductState(n={})".format(self.n)


class MeasurementBasis(object):
    """Per-qubit Bloch axis of the outcome-0 projector."""

    def __init__(self, axes):
        self.axes = _as_vectors(axes)
        self.axes.setflags(write=False)
        norms = np.linalg.norm(self.axes, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1) > BLOCH_TOL)
        if bad.size:
            raise ConfigError("qubit {}: measurement axis is not a unit vector".format(int(bad[0])))

    @classmethod
    def named(cls, names: Sequence[str]) -> "MeasurementBasis":
        try:
            return cls([NAMED_BASES[name.upper()] for name in names])
        except KeyError as e:
            raise ConfigError("unknown basis {}".format(e))

    @classmethod
    def computational(cls, n: int) -> "MeasurementBasis":
        return cls.named(["Z"] * n)

    @property
    def n(self) -> int:
        return self.axes.shape[0]

    def measurement_unitary(self, q: int) -> np.ndarray:
        """W with rows <+n|, <-n| so that |W psi|^2 gives outcome probabilities 0, 1."""
        ax = self.axes[q]
        _, vecs = np.linalg.eigh(sum(a * s for a, s in zip(ax, SIGMA)))
        return np.stack([vecs[:, 1].conj(), vecs[:, 0].conj()])

    def __eq__(self, other):
        if not isinstance(other, MeasurementBasis):
            return NotImplemented
        return np.array_equal(self.axes, other.axes)

    def __repr__(self):
        return "MeasurementBasis(n={})".format(self.n)


def bloch_density(b) -> np.ndarray:
    return 0.5 * (np.eye(2, dtype=complex) + sum(c * s for c, s in zip(b, SIGMA)))


def bloch_of_ket(psi) -> np.ndarray:
    a, b = psi
    return np.array([2 * (np.conj(a) * b).real, 2 * (np.conj(a) * b).imag, abs(a) ** 2 - abs(b) ** 2])


class BlochRotation(object):
    """U = exp(-i theta/2 a . sigma) for a unit axis ``a``."""

    def __init__(self, axis, theta: float):
        axis = np.asarray(axis, dtype=float)
        if axis.shape != (3,) or abs(np.linalg.norm(axis) - 1) > 1e-9:
            raise ConfigError("rotation axis must be a unit 3-vector, got {}".format(axis.tolist()))
        self.axis = axis
        self.theta = float(theta)

    @classmethod
    def parse(cls, text: str) -> "BlochRotation":
        try:
            ax, ay, az, theta = (float(v) for v in text.split(","))
        except ValueError:
            raise ConfigError("rotation must be 'ax,ay,az,theta', got {!r}".format(text))
        return cls((ax, ay, az), theta)

    @classmethod
    def hadamard(cls) -> "BlochRotation":
        return cls(np.array([1.0, 0.0, 1.0]) / math.sqrt(2), math.pi)

    def unitary(self) -> np.ndarray:
        generator = sum(a * s for a, s in zip(self.axis, SIGMA))
        return expm(-0.5j * self.theta * generator)


def canonicalize_conjugated_clifford(rotation: BlochRotation, c):
    """Fold U^n C U^dagger^n on |0..0> with Z readout into (C, rho, basis).

    Input becomes U^dagger|0> on every qubit and the outcome-0 axis is the same
    Bloch vector. Depolarizing noise commutes with the conjugation.
    """
    u = rotation.unitary()
    if not np.allclose(u.conj().T @ u, np.eye(2), atol=1e-12):
        raise ConfigError("rotation spec is not unitary")
    b = bloch_of_ket(u.conj().T @ np.array([1.0, 0.0], dtype=complex))
    b = b / np.linalg.norm(b)
    return c, ProductState(np.tile(b, (c.n, 1))), MeasurementBasis(np.tile(b, (c.n, 1)))
