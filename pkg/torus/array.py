"""Square binary arrays with wrap-around indexing.

Coordinates are (line, column) everywhere: the first index picks the row.
"""

import hashlib
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from gf2.bitmatrix import BitMatrix

logger = structlog.get_logger(__name__)

Position = Tuple[int, int]


class ConstructionError(RuntimeError):
    """Tile placement produced an inconsistent array."""


class TileOverlapError(ConstructionError):
    """A tile was placed over cells that already hold another tile."""


class WindowSpec(BaseModel):
    """Window of s rows and t columns."""

    model_config = ConfigDict(frozen=True)

    s: int = Field(..., ge=1, description="Rows of the window")
    t: int = Field(..., ge=1, description="Columns of the window")

    @property
    def cells(self) -> int:
        return self.s * self.t


class Modulo(BaseModel):
    """Residue modulus (p, q): positions fall into p*q classes."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(..., ge=1, description="Row modulus")
    q: int = Field(..., ge=1, description="Column modulus")

    @property
    def classes(self) -> int:
        return self.p * self.q


class ToroidalArray:
    """side x side array of 0/1 cells stored as uint8."""

    def __init__(self, cells: np.ndarray):
        cells = np.asarray(cells)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValueError(f"toroidal arrays are square, got shape {cells.shape}")
        if cells.shape[0] == 0:
            raise ValueError("toroidal array must have at least one cell")
        if not np.isin(cells, (0, 1)).all():
            raise ValueError("cells must be 0 or 1")
        self.cells = np.ascontiguousarray(cells, dtype=np.uint8)
        self._placed: Optional[np.ndarray] = None

    @classmethod
    def blank(cls, side: int) -> "ToroidalArray":
        """All-zero array that records which cells tiles have covered."""
        array = cls(np.zeros((side, side), dtype=np.uint8))
        array._placed = np.zeros((side, side), dtype=bool)
        return array

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "ToroidalArray":
        """Build from rows of '0'/'1' characters."""
        return cls(np.array([[int(ch) for ch in row] for row in rows], dtype=np.uint8))

    @property
    def side(self) -> int:
        return self.cells.shape[0]

    @property
    def fully_placed(self) -> bool:
        return self._placed is None or bool(self._placed.all())

    def freeze(self) -> "ToroidalArray":
        """Drop placement tracking and make the cells read-only."""
        self._placed = None
        self.cells.setflags(write=False)
        return self

    def __getitem__(self, pos: Position) -> int:
        r, c = pos
        return int(self.cells[r % self.side, c % self.side])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ToroidalArray):
            return NotImplemented
        return self.side == other.side and bool(np.array_equal(self.cells, other.cells))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ToroidalArray(side={self.side})"

    def to_strings(self) -> List[str]:
        return ["".join("1" if v else "0" for v in row) for row in self.cells.tolist()]

    def digest(self) -> str:
        """128-bit content digest of side and cells."""
        h = hashlib.blake2b(digest_size=16)
        h.update(self.side.to_bytes(8, "little"))
        h.update(np.packbits(self.cells).tobytes())
        return h.hexdigest()

    def xor_tiled(self, z: BitMatrix) -> "ToroidalArray":
        """This array XOR the tiling of the whole torus by copies of z."""
        if self.side % z.rows or self.side % z.cols:
            raise ValueError(f"{z.rows}x{z.cols} tile does not divide side {self.side}")
        tiling = np.tile(z.to_numpy(), (self.side // z.rows, self.side // z.cols))
        return ToroidalArray(self.cells ^ tiling)


def window_at(a: ToroidalArray, pos: Position, w: WindowSpec) -> BitMatrix:
    """The s x t window anchored at pos, read with wrap-around."""
    rows = np.arange(pos[0], pos[0] + w.s)
    cols = np.arange(pos[1], pos[1] + w.t)
    block = np.take(np.take(a.cells, rows, axis=0, mode="wrap"), cols, axis=1, mode="wrap")
    return BitMatrix.from_numpy(block)


def tile_at(a: ToroidalArray, ell: int, m: int, n: int) -> BitMatrix:
    """n x n tile in tile row ell, tile column m."""
    return window_at(a, (ell * n, m * n), WindowSpec(s=n, t=n))


def aligned_subarrays(a: ToroidalArray, part_side: int) -> List[Tuple[Position, ToroidalArray]]:
    """Copies of the aligned part_side x part_side blocks in row-major order."""
    if part_side < 1 or a.side % part_side:
        raise ValueError(f"part side {part_side} does not divide array side {a.side}")
    parts = []
    for r in range(0, a.side, part_side):
        for c in range(0, a.side, part_side):
            block = a.cells[r:r + part_side, c:c + part_side].copy()
            parts.append(((r, c), ToroidalArray(block)))
    return parts


def aligned_blocks(cells: np.ndarray, part_side: int) -> np.ndarray:
    """All aligned parts as one (parts, part_side, part_side) array, row-major part order."""
    side = cells.shape[0]
    per_side = side // part_side
    return (
        cells.reshape(per_side, part_side, per_side, part_side)
        .swapaxes(1, 2)
        .reshape(per_side * per_side, part_side, part_side)
    )
