"""Bit-packed linear algebra over GF(2).

Rows are stored as Python integers: bit ``i`` of the integer is column ``i``,
so a row of ``n`` columns occupies ``ceil(n / 64)`` machine words and every
hot loop reduces to integer XOR/AND. Column 0 is printed leftmost.
"""
from bisect import bisect_left, insort
from typing import Iterable, List, NamedTuple, Sequence, Tuple, Union

import numpy as np

WORD_BITS = 64


def _lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


def popcount(v: int) -> int:
    return bin(v).count("1")


def iter_bits(v: int):
    """Yield the indices of the set bits of ``v`` in ascending order."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


class BitVector(object):
    """Fixed-length vector over GF(2)."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int = 0):
        if length < 0:
            raise ValueError("Illegal BitVector length.")
        if bits < 0 or bits >> length:
            raise ValueError("bits set beyond length {}".format(length))
        self.length = length
        self.bits = bits

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError("BitVector string must contain only 0 and 1: {!r}".format(text))
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(len(text), bits)

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitVector":
        bits = 0
        for i in indices:
            if not 0 <= i < length:
                raise ValueError("index {} out of range for length {}".format(i, length))
            bits |= 1 << i
        return cls(length, bits)

    @classmethod
    def from_array(cls, arr) -> "BitVector":
        arr = np.asarray(arr).reshape(-1)
        return cls.from_indices(arr.size, np.flatnonzero(arr & 1).tolist())

    def __len__(self):
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def _check(self, other: "BitVector"):
        if self.length != other.length:
            raise ValueError("BitVector length mismatch: {} vs {}".format(self.length, other.length))

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.length, self.bits ^ other.bits)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.length, self.bits & other.bits)

    def __or__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.length, self.bits | other.bits)

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and self.bits == other.bits

    def __hash__(self):
        return hash((self.length, self.bits))

    def __repr__(self):
        return "BitVector('{}')".format(self.to_string())

    def dot(self, other: "BitVector") -> int:
        self._check(other)
        return popcount(self.bits & other.bits) & 1

    def weight(self) -> int:
        return popcount(self.bits)

    def is_zero(self) -> bool:
        return self.bits == 0

    def indices(self) -> List[int]:
        return list(iter_bits(self.bits))

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.length))

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        out[self.indices()] = 1
        return out

    def words(self) -> np.ndarray:
        """The packed 64-bit blocks, least significant block first."""
        n_words = max(1, -(-self.length // WORD_BITS))
        mask = (1 << WORD_BITS) - 1
        return np.array([(self.bits >> (WORD_BITS * k)) & mask for k in range(n_words)], dtype=np.uint64)


RowLike = Union[int, BitVector, str]


class ColumnOp(NamedTuple):
    """Elementary column operation: ``swap`` exchanges columns ``target`` and
    ``source``; ``add`` sets column ``target`` to ``target XOR source``."""

    kind: str
    target: int
    source: int

    def __str__(self):
        if self.kind == "swap":
            return "swap({},{})".format(self.target, self.source)
        return "add({}<-{}^{})".format(self.target, self.target, self.source)


def swap_op(i: int, j: int) -> ColumnOp:
    return ColumnOp("swap", i, j)


def add_op(target: int, source: int) -> ColumnOp:
    return ColumnOp("add", target, source)


class Gf2Matrix(object):
    """Immutable binary matrix; ``rows`` holds one packed integer per row."""

    __slots__ = ("rows", "n_cols")

    def __init__(self, rows: Iterable[RowLike], n_cols: int):
        packed = []
        for row in rows:
            if isinstance(row, BitVector):
                if row.length != n_cols:
                    raise ValueError("row length {} != n_cols {}".format(row.length, n_cols))
                row = row.bits
            elif isinstance(row, str):
                vec = BitVector.from_string(row)
                if vec.length != n_cols:
                    raise ValueError("row length {} != n_cols {}".format(vec.length, n_cols))
                row = vec.bits
            elif row < 0 or row >> n_cols:
                raise ValueError("row has bits beyond n_cols {}".format(n_cols))
            packed.append(int(row))
        self.rows: Tuple[int, ...] = tuple(packed)
        self.n_cols = n_cols

    @classmethod
    def from_strings(cls, rows: Sequence[str], n_cols: int = None) -> "Gf2Matrix":
        if n_cols is None:
            if not rows:
                raise ValueError("n_cols is required for an empty matrix")
            n_cols = len(rows[0].strip())
        return cls(rows, n_cols)

    @classmethod
    def from_array(cls, arr) -> "Gf2Matrix":
        arr = np.atleast_2d(np.asarray(arr))
        return cls((BitVector.from_array(r).bits for r in arr), arr.shape[1])

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "Gf2Matrix":
        return cls([0] * n_rows, n_cols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls([1 << i for i in range(n)], n)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), self.n_cols

    def row(self, i: int) -> BitVector:
        return BitVector(self.n_cols, self.rows[i])

    def __iter__(self):
        return (BitVector(self.n_cols, r) for r in self.rows)

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.n_cols == other.n_cols and self.rows == other.rows

    def __hash__(self):
        return hash((self.rows, self.n_cols))

    def __repr__(self):
        return "Gf2Matrix({!r}, n_cols={})".format(self.to_strings(), self.n_cols)

    def to_strings(self) -> List[str]:
        return [BitVector(self.n_cols, r).to_string() for r in self.rows]

    def to_array(self) -> np.ndarray:
        out = np.zeros((len(self.rows), self.n_cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            out[i, list(iter_bits(r))] = 1
        return out

    def transpose(self) -> "Gf2Matrix":
        cols = [0] * self.n_cols
        for i, r in enumerate(self.rows):
            for j in iter_bits(r):
                cols[j] |= 1 << i
        return Gf2Matrix(cols, len(self.rows))

    def matvec(self, v: BitVector) -> BitVector:
        """M . v over GF(2)."""
        if v.length != self.n_cols:
            raise ValueError("vector length {} != n_cols {}".format(v.length, self.n_cols))
        out = 0
        for i, r in enumerate(self.rows):
            if popcount(r & v.bits) & 1:
                out |= 1 << i
        return BitVector(len(self.rows), out)

    def vstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if other.n_cols != self.n_cols:
            raise ValueError("column count mismatch")
        return Gf2Matrix(self.rows + other.rows, self.n_cols)

    def select_columns(self, columns: Sequence[int]) -> "Gf2Matrix":
        """Keep ``columns`` (in the given order) as the new columns 0..k-1."""
        out = []
        for r in self.rows:
            packed = 0
            for k, c in enumerate(columns):
                if (r >> c) & 1:
                    packed |= 1 << k
            out.append(packed)
        return Gf2Matrix(out, len(columns))


class EchelonBasis(object):
    """Incremental row echelon form.

    Each stored row is keyed by its lowest set bit (its pivot column). Rows are
    inserted in order, so the first row that owns a pivot keeps it and the
    result is deterministic. ``reduce_fully`` clears every pivot column from all
    other rows, giving reduced row echelon form.
    """

    def __init__(self, n_cols: int):
        self.n_cols = n_cols
        self.pivots = {}
        self._keys = []
        self._span = 0

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int) -> int:
        pivots = self.pivots
        while v:
            p = pivots.get(_lowbit(v))
            if p is None:
                return v
            v ^= p
        return 0

    def insert(self, v: int) -> bool:
        """Add ``v`` to the span; return True when it raised the rank."""
        v = self.reduce(v)
        if not v:
            return False
        key = _lowbit(v)
        self.pivots[key] = v
        insort(self._keys, key)
        self._span = max(self._span, v.bit_length() - 1 - key)
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def _rows_below(self, col: int):
        """Pivot keys that could still hold a set bit in ``col``."""
        lo = bisect_left(self._keys, col - self._span)
        hi = bisect_left(self._keys, col)
        return self._keys[lo:hi]

    def reduce_fully(self) -> "EchelonBasis":
        pivots = self.pivots
        for col in reversed(self._keys):
            src = pivots[col]
            for key in self._rows_below(col):
                row = pivots[key]
                if (row >> col) & 1:
                    row ^= src
                    pivots[key] = row
                    self._span = max(self._span, row.bit_length() - 1 - key)
        return self

    def rows(self) -> List[int]:
        return [self.pivots[k] for k in self._keys]

    def nullspace(self) -> List[int]:
        """Basis of {v : r . v = 0 for every stored row r}; requires reduce_fully()."""
        pivots = self.pivots
        basis = []
        for free in range(self.n_cols):
            if free in pivots:
                continue
            v = 1 << free
            for key in self._rows_below(free):
                if (pivots[key] >> free) & 1:
                    v |= 1 << key
            basis.append(v)
        return basis


def echelon(m: Gf2Matrix) -> EchelonBasis:
    basis = EchelonBasis(m.n_cols)
    for r in m.rows:
        basis.insert(r)
    return basis


def rank(m: Gf2Matrix) -> int:
    return echelon(m).rank


def nullspace_basis(m: Gf2Matrix) -> Gf2Matrix:
    return Gf2Matrix(echelon(m).reduce_fully().nullspace(), m.n_cols)


def row_space_membership(m: Gf2Matrix, v: BitVector) -> bool:
    if v.length != m.n_cols:
        raise ValueError("vector length {} != n_cols {}".format(v.length, m.n_cols))
    return echelon(m).contains(v.bits)


def independent_rows(m: Gf2Matrix) -> Gf2Matrix:
    """Rows of ``m`` that raise the rank when inserted in order."""
    basis = EchelonBasis(m.n_cols)
    return Gf2Matrix([r for r in m.rows if basis.insert(r)], m.n_cols)


def _apply_op(row: int, op: ColumnOp) -> int:
    if op.kind == "swap":
        a = (row >> op.target) & 1
        b = (row >> op.source) & 1
        if a != b:
            row ^= (1 << op.target) | (1 << op.source)
        return row
    if op.kind == "add":
        return row ^ (((row >> op.source) & 1) << op.target)
    raise ValueError("unknown column op {!r}".format(op.kind))


def apply_column_ops(m: Gf2Matrix, ops: Iterable[ColumnOp]) -> Gf2Matrix:
    rows = list(m.rows)
    for op in ops:
        rows = [_apply_op(r, op) for r in rows]
    return Gf2Matrix(rows, m.n_cols)


def column_reduce_with_ops(m: Gf2Matrix) -> Tuple[Gf2Matrix, List[ColumnOp]]:
    """Gauss-Jordan elimination on the transpose, recorded as column operations.

    For a matrix of full row rank the result is ``[I_rank | 0]``. Rows that
    depend on earlier rows consume no pivot.
    """
    rows = list(m.rows)
    ops: List[ColumnOp] = []
    pivot = 0
    for i in range(len(rows)):
        row = rows[i] >> pivot << pivot
        if not row:
            continue
        j = _lowbit(row)
        if j != pivot:
            op = swap_op(pivot, j)
            ops.append(op)
            rows = [_apply_op(r, op) for r in rows]
        for k in iter_bits(rows[i] & ~(1 << pivot)):
            op = add_op(k, pivot)
            ops.append(op)
            rows = [_apply_op(r, op) for r in rows]
        pivot += 1
    return Gf2Matrix(rows, m.n_cols), ops
