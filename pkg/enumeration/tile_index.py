"""Enumeration N_0 .. N_{2^(n*n) - 1} of the n x n binary matrices.

Bit positions count from the least significant digit (position 0). Entry
(i, j) of N_k is bit n*n - 1 - i*n - j of k, so the most significant digit
sits at (0, 0). The even/odd split places tile k at tile row odd_bits(k)
and tile column even_bits(k).

even_bits, odd_bits and join accept Python ints or numpy integer arrays.
"""

from typing import Optional, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from gf2.bitmatrix import BitMatrix, DimensionError

IntLike = TypeVar("IntLike", int, np.ndarray)


class IndexRangeError(ValueError):
    """Tile index outside 0 .. 2^(n*n) - 1."""


class TileIndex(BaseModel):
    """A checked tile index k for n x n tiles."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    k: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _check_range(self) -> "TileIndex":
        if self.k >= 1 << (self.n * self.n):
            raise ValueError(f"tile index {self.k} does not fit {self.n}x{self.n} tiles")
        return self

    def matrix(self) -> BitMatrix:
        return matrix_from_index(self.n, self.k)


def _reverse_bits(value: int, width: int) -> int:
    result = 0
    for _ in range(width):
        result = (result << 1) | (value & 1)
        value >>= 1
    return result


def matrix_from_index(n: int, k: Union[int, TileIndex]) -> BitMatrix:
    """Return N_k."""
    if isinstance(k, TileIndex):
        n, k = k.n, k.k
    if n < 1:
        raise DimensionError(f"tile side must be positive, got {n}")
    if not 0 <= k < 1 << (n * n):
        raise IndexRangeError(f"tile index {k} outside 0..2^{n * n}-1")
    mask = (1 << n) - 1
    # row i holds bits [(n-1-i)n, (n-i)n) of k, column 0 at the high end
    rows = [_reverse_bits((k >> ((n - 1 - i) * n)) & mask, n) for i in range(n)]
    return BitMatrix(n, n, rows)


def index_from_matrix(m: BitMatrix) -> int:
    """Inverse of matrix_from_index."""
    if not m.is_square:
        raise DimensionError(f"tile must be square, got {m.rows}x{m.cols}")
    n = m.rows
    k = 0
    for row in m.data:
        k = (k << n) | _reverse_bits(row, n)
    return k


def _width(k) -> int:
    if isinstance(k, np.ndarray):
        if k.size and int(k.min()) < 0:
            raise ValueError("bit split is defined for non-negative integers")
        return int(k.max()).bit_length() if k.size else 0
    if k < 0:
        raise ValueError(f"bit split is defined for non-negative integers, got {k}")
    return int(k).bit_length()


def _gather(k: IntLike, offset: int, width: Optional[int]) -> IntLike:
    width = _width(k) if width is None else width
    result = k * 0
    for i in range((width - offset + 1) // 2):
        result = result | (((k >> (2 * i + offset)) & 1) << i)
    return result


def even_bits(k: IntLike, width: Optional[int] = None) -> IntLike:
    """Digits of k at even positions, packed down."""
    return _gather(k, 0, width)


def odd_bits(k: IntLike, width: Optional[int] = None) -> IntLike:
    """Digits of k at odd positions, packed down."""
    return _gather(k, 1, width)


def join(ell: IntLike, m: IntLike) -> IntLike:
    """Interleave: bit i of m goes to bit 2i, bit i of ell to bit 2i+1."""
    width = max(_width(ell), _width(m))
    result = (ell * 0) | (m * 0)
    for i in range(width):
        result = result | (((m >> i) & 1) << (2 * i)) | (((ell >> i) & 1) << (2 * i + 1))
    return result
