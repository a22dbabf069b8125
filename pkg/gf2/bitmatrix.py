"""Bit vectors and bit matrices over GF(2).

Rows are packed into Python integers with the least significant bit holding
column 0. Every constructor masks its input, so padding bits above the last
column are always zero and row operations reduce to integer XOR/AND.
"""

from typing import Iterable, List, NamedTuple, Sequence, Union

import numpy as np


class DimensionError(ValueError):
    """Operand shapes do not fit the requested operation."""


def _mask(width: int) -> int:
    return (1 << width) - 1


class BitVector:
    """Fixed-length vector of 0/1 entries, entry 0 in the lowest bit."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int = 0):
        if length < 0:
            raise DimensionError(f"negative vector length {length}")
        self.length = length
        self.bits = bits & _mask(length)

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "BitVector":
        bits = 0
        for i, value in enumerate(entries):
            if value not in (0, 1):
                raise ValueError(f"entry {i} is {value!r}, expected 0 or 1")
            bits |= value << i
        return cls(len(entries), bits)

    def to_list(self) -> List[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"index {i} outside vector of length {self.length}")
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.length, self.bits))

    def __repr__(self) -> str:
        return f"BitVector({''.join(str(b) for b in self.to_list())})"


class BitMatrix:
    """Immutable rows x cols matrix over GF(2).

    ``data`` is a tuple with one packed integer per row. Equality is
    structural: same shape and same entries.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Iterable[int]):
        if rows < 0 or cols < 0:
            raise DimensionError(f"negative shape {rows}x{cols}")
        mask = _mask(cols)
        packed = tuple(int(row) & mask for row in data)
        if len(packed) != rows:
            raise DimensionError(f"expected {rows} rows, got {len(packed)}")
        self.rows = rows
        self.cols = cols
        self.data = packed

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        """All-zero matrix."""
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        """n x n identity."""
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        """Build from nested 0/1 lists, one inner list per row."""
        if not entries:
            return cls(0, 0, [])
        cols = len(entries[0])
        data = []
        for r, row in enumerate(entries):
            if len(row) != cols:
                raise DimensionError(f"row {r} has {len(row)} entries, expected {cols}")
            data.append(BitVector.from_list(row).bits)
        return cls(len(entries), cols, data)

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BitMatrix":
        """Build from rows written as '0'/'1' strings, column 0 first."""
        return cls.from_rows([[int(ch) for ch in row] for row in rows])

    @classmethod
    def from_numpy(cls, cells: np.ndarray) -> "BitMatrix":
        """Build from a 2-d array of 0/1 values."""
        cells = np.asarray(cells)
        if cells.ndim != 2:
            raise DimensionError(f"expected a 2-d array, got shape {cells.shape}")
        rows, cols = cells.shape
        if rows and cols and not np.isin(cells, (0, 1)).all():
            raise ValueError("matrix entries must be 0 or 1")
        weights = [1 << j for j in range(cols)]
        data = [sum(w for w, v in zip(weights, row) if v) for row in cells.tolist()]
        return cls(rows, cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[BitVector]) -> "BitMatrix":
        """Build from column vectors of equal length."""
        if not columns:
            return cls(0, 0, [])
        rows = columns[0].length
        data = [0] * rows
        for j, column in enumerate(columns):
            if column.length != rows:
                raise DimensionError(f"column {j} has length {column.length}, expected {rows}")
            for i in range(rows):
                if (column.bits >> i) & 1:
                    data[i] |= 1 << j
        return cls(rows, len(columns), data)

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols} matrix")
        return (self.data[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def column(self, j: int) -> BitVector:
        """Column j as a vector, bit i = row i."""
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} outside {self.rows}x{self.cols} matrix")
        bits = 0
        for i, row in enumerate(self.data):
            bits |= ((row >> j) & 1) << i
        return BitVector(self.rows, bits)

    def transpose(self) -> "BitMatrix":
        """Rows become columns."""
        return BitMatrix.from_columns([self.row(i) for i in range(self.rows)])

    def to_rows(self) -> List[List[int]]:
        return [[(row >> j) & 1 for j in range(self.cols)] for row in self.data]

    def to_numpy(self) -> np.ndarray:
        """uint8 array of shape (rows, cols)."""
        return np.array(self.to_rows(), dtype=np.uint8).reshape(self.rows, self.cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "/".join("".join(str(v) for v in row) for row in self.to_rows())
        return f"BitMatrix({self.rows}x{self.cols}: {body})"

    def __str__(self) -> str:
        return "\n".join("".join(str(v) for v in row) for row in self.to_rows())


class Singular(NamedTuple):
    """Verdict for a square matrix that has no inverse."""

    rank: int


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Product over GF(2): row i of the result is the XOR of the rows of b picked by row i of a."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    data = []
    for row in a.data:
        acc = 0
        j = 0
        while row:
            if row & 1:
                acc ^= b.data[j]
            row >>= 1
            j += 1
        data.append(acc)
    return BitMatrix(a.rows, b.cols, data)


def mat_xor(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Entrywise sum over GF(2)."""
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.rows}x{a.cols} and {b.rows}x{b.cols}")
    return BitMatrix(a.rows, a.cols, [x ^ y for x, y in zip(a.data, b.data)])


def rank(a: BitMatrix) -> int:
    """Row rank by elimination on the packed rows."""
    rows = [r for r in a.data if r]
    result = 0
    for col in range(a.cols):
        bit = 1 << col
        pivot = next((idx for idx, r in enumerate(rows) if r & bit), None)
        if pivot is None:
            continue
        pivot_row = rows.pop(pivot)
        rows = [r ^ pivot_row if r & bit else r for r in rows]
        rows = [r for r in rows if r]
        result += 1
    return result


def invert(a: BitMatrix) -> Union[BitMatrix, Singular]:
    """Gauss-Jordan inverse, or ``Singular(rank)`` when the matrix has none."""
    if not a.is_square:
        raise DimensionError(f"cannot invert non-square {a.rows}x{a.cols} matrix")
    n = a.rows
    left = list(a.data)
    right = [1 << i for i in range(n)]
    for col in range(n):
        bit = 1 << col
        pivot = next((r for r in range(col, n) if left[r] & bit), None)
        if pivot is None:
            return Singular(rank(a))
        if pivot != col:
            left[col], left[pivot] = left[pivot], left[col]
            right[col], right[pivot] = right[pivot], right[col]
        for r in range(n):
            if r != col and left[r] & bit:
                left[r] ^= left[col]
                right[r] ^= right[col]
    return BitMatrix(n, n, right)


def solve(a: BitMatrix, b: BitMatrix) -> Union[BitMatrix, Singular]:
    """Solve a . X = b for square a."""
    if a.rows != b.rows:
        raise DimensionError(f"right-hand side has {b.rows} rows, system has {a.rows}")
    inverse = invert(a)
    if isinstance(inverse, Singular):
        return inverse
    return mat_mul(inverse, b)


def rotate_column(v: BitVector, m: int) -> BitVector:
    """Apply sigma m times; one step moves the last entry to the front."""
    n = v.length
    if n == 0:
        return v
    m %= n
    return BitVector(n, (v.bits << m) | (v.bits >> (n - m)))


def submatrix(a: BitMatrix, row_start: int, col_start: int, rows: int, cols: int) -> BitMatrix:
    """Contiguous block copy; no wrap-around at the matrix level."""
    if min(row_start, col_start, rows, cols) < 0:
        raise DimensionError("submatrix ranges must be non-negative")
    if row_start + rows > a.rows or col_start + cols > a.cols:
        raise DimensionError(
            f"block {rows}x{cols} at ({row_start}, {col_start}) exceeds {a.rows}x{a.cols} matrix"
        )
    mask = _mask(cols)
    return BitMatrix(rows, cols, [(r >> col_start) & mask for r in a.data[row_start:row_start + rows]])
