"""Pauli string algebra in the binary symplectic picture.

A :class:`PauliString` is ``i**phase`` times the tensor product of single-qubit
operators ``P(x_q, z_q)`` with ``P(1, 0) = X``, ``P(0, 1) = Z`` and
``P(1, 1) = +Y``. ``x`` and ``z`` are packed integers, bit ``q`` for qubit ``q``.
"""
from typing import List

import numpy as np

from .gf2 import BitVector, iter_bits, popcount

_SYMBOLS = "IXZY"
_PHASE_TEXT = ("+", "+i", "-", "-i")

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliString(object):
    __slots__ = ("n", "x", "z", "phase")

    def __init__(self, n: int, x: int = 0, z: int = 0, phase: int = 0):
        if n < 0:
            raise ValueError("Illegal qubit count.")
        if x < 0 or z < 0 or x >> n or z >> n:
            raise ValueError("Pauli bits set beyond n={}".format(n))
        self.n = n
        self.x = x
        self.z = z
        self.phase = phase & 3

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, symbol: str) -> "PauliString":
        if not 0 <= qubit < n:
            raise ValueError("qubit {} out of range for n={}".format(qubit, n))
        code = _SYMBOLS.index(symbol.upper())
        return cls(n, (code & 1) << qubit, (code >> 1) << qubit)

    @classmethod
    def from_string(cls, text: str) -> "PauliString":
        """Parse ``"+XIZY"``, ``"-iZZ"`` or a bare ``"XIZ"``; character k is qubit k."""
        text = text.strip()
        phase = 0
        for prefix, value in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if text.startswith(prefix):
                phase, text = value, text[len(prefix):]
                break
        x = z = 0
        for q, ch in enumerate(text):
            if ch not in _SYMBOLS:
                raise ValueError("bad Pauli symbol {!r}".format(ch))
            code = _SYMBOLS.index(ch)
            x |= (code & 1) << q
            z |= (code >> 1) << q
        return cls(len(text), x, z, phase)

    def __eq__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        return (self.n, self.x, self.z, self.phase) == (other.n, other.x, other.z, other.phase)

    def __hash__(self):
        return hash((self.n, self.x, self.z, self.phase))

    def __repr__(self):
        return "PauliString('{}')".format(self.to_string())

    def __str__(self):
        return self.to_string()

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def symbol(self, qubit: int) -> str:
        return _SYMBOLS[((self.x >> qubit) & 1) | (((self.z >> qubit) & 1) << 1)]

    def to_string(self) -> str:
        return _PHASE_TEXT[self.phase] + "".join(self.symbol(q) for q in range(self.n))

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError("non-Hermitian Pauli {} has no real sign".format(self))
        return 1 - self.phase

    def hermitian(self) -> "PauliString":
        """The phase-0 representative with the same bits."""
        return PauliString(self.n, self.x, self.z)

    def weight(self) -> int:
        return popcount(self.x | self.z)

    def support(self) -> List[int]:
        return list(iter_bits(self.x | self.z))

    def symplectic_vector(self) -> BitVector:
        return BitVector(2 * self.n, self.x | (self.z << self.n))

    def commutes(self, other: "PauliString") -> bool:
        _check_size(self, other)
        return popcount((self.x & other.z) ^ (self.z & other.x)) & 1 == 0

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; qubit 0 is the least significant index bit."""
        out = np.ones((1, 1), dtype=complex)
        for q in reversed(range(self.n)):
            out = np.kron(out, _PAULI_MATRICES[self.symbol(q)])
        return (1j ** self.phase) * out


def _check_size(p: PauliString, q: PauliString):
    if p.n != q.n:
        raise ValueError("Pauli size mismatch: {} vs {}".format(p.n, q.n))


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent k with P(x1,z1) P(x2,z2) = i**k P(x1^x2, z1^z2) for Hermitian factors."""
    x3, z3 = x1 ^ x2, z1 ^ z2
    return (popcount(x1 & z1) + popcount(x2 & z2) + 2 * popcount(z1 & x2) - popcount(x3 & z3)) & 3


def symplectic_vector(p: PauliString) -> BitVector:
    return p.symplectic_vector()


def commutes(p: PauliString, q: PauliString) -> bool:
    return p.commutes(q)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    _check_size(p, q)
    phase = p.phase + q.phase + product_phase(p.x, p.z, q.x, q.z)
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, phase)


def weight(p: PauliString) -> int:
    return p.weight()


def support(p: PauliString) -> List[int]:
    return p.support()


def hermitian_from_symplectic(v: BitVector) -> PauliString:
    if v.length % 2:
        raise ValueError("symplectic vector length must be even, got {}".format(v.length))
    n = v.length // 2
    mask = (1 << n) - 1
    return PauliString(n, v.bits & mask, v.bits >> n)


_EVEN = {}


def _even_mask(n: int) -> int:
    mask = _EVEN.get(n)
    if mask is None:
        mask = int("01" * n, 2) if n else 0
        _EVEN[n] = mask
    return mask


def interleave(x: int, z: int) -> int:
    """Pack (x, z) as one integer with x_q at bit 2q and z_q at bit 2q+1.

    Keeps each qubit's two columns adjacent, so elimination over local circuits
    touches a narrow band of columns.
    """
    v = 0
    for q in iter_bits(x):
        v |= 1 << (2 * q)
    for q in iter_bits(z):
        v |= 2 << (2 * q)
    return v


def deinterleave(v: int):
    x = z = 0
    for b in iter_bits(v):
        if b & 1:
            z |= 1 << (b >> 1)
        else:
            x |= 1 << (b >> 1)
    return x, z


def swap_pairs(v: int, n: int) -> int:
    """Apply the symplectic form to an interleaved vector (exchange x_q and z_q)."""
    even = _even_mask(n)
    return ((v & even) << 1) | ((v >> 1) & even)


def qubit_mask_interleaved(qubits) -> int:
    mask = 0
    for q in qubits:
        mask |= 3 << (2 * q)
    return mask
