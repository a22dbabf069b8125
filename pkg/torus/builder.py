"""Pascal and affine toroidal arrays.

For n = 2^d the array has side n * 2^(n*n/2). Tile k, the n x n matrix
M . N_k XOR Z, is placed with its upper-left corner at line odd(k) * n and
column even(k) * n. Every n x n matrix is used exactly once.
"""

from typing import Union

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from enumeration.tile_index import even_bits, odd_bits
from gf2.bitmatrix import BitMatrix
from pascal.matrices import RotationProfile, build_variant
from torus.array import ConstructionError, Position, TileOverlapError, ToroidalArray

logger = structlog.get_logger(__name__)

MAX_ARRAY_EXPONENT = 2


class InfeasibleSizeError(ValueError):
    """Array exponent outside what can be materialized."""


class AffineSpec(BaseModel):
    """Exponent d, rotation profile of M and the XOR tile Z."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(..., ge=0)
    profile: RotationProfile
    z: BitMatrix

    @model_validator(mode="after")
    def _check_shapes(self) -> "AffineSpec":
        n = 1 << self.d
        if self.profile.n != n:
            raise ValueError(f"profile has {self.profile.n} shifts, expected {n}")
        if self.z.shape != (n, n):
            raise ValueError(f"Z must be {n}x{n}, got {self.z.rows}x{self.z.cols}")
        return self

    @classmethod
    def pascal(cls, d: int) -> "AffineSpec":
        """Zero profile and zero Z."""
        n = 1 << d
        return cls(d=d, profile=RotationProfile.zero(n), z=BitMatrix.zeros(n, n))

    @property
    def n(self) -> int:
        return 1 << self.d


def array_side(d: int) -> int:
    """Side n * 2^(n*n/2) of the array for n = 2^d."""
    n = 1 << d
    return n << (n * n // 2)


def affine_family_size(n: int) -> int:
    """Number of (profile, Z) pairs for n x n tiles."""
    return 1 << (n * n + n - 1)


def check_array_exponent(d: int, max_exponent: int = MAX_ARRAY_EXPONENT) -> None:
    """Reject exponents that give no array or one too large to hold in memory."""
    if d < 1:
        raise InfeasibleSizeError(
            f"d={d} gives n={1 << max(d, 0)}; arrays need n >= 2 (n=1 has side 2^(1/2))"
        )
    if d > max_exponent:
        n = 1 << d
        side_exp = n * n // 2 + d
        raise InfeasibleSizeError(
            f"n={n} gives side 2^{side_exp}, i.e. 2^{2 * side_exp} cells "
            f"(2^{2 * side_exp - 3} bytes even bit-packed); "
            f"array construction is capped at d <= {max_exponent}"
        )


def place_tile(a: ToroidalArray, pos: Position, tile: Union[BitMatrix, np.ndarray]) -> None:
    """Copy tile into a with its upper-left corner at pos.

    Overlap is only detected on arrays from ToroidalArray.blank, which track
    placed cells. On any other array the tile overwrites what is there.
    """
    cells = tile.to_numpy() if isinstance(tile, BitMatrix) else np.asarray(tile, dtype=np.uint8)
    r, c = pos
    rows, cols = cells.shape
    if r < 0 or c < 0 or r + rows > a.side or c + cols > a.side:
        raise ConstructionError(f"{rows}x{cols} tile at ({r}, {c}) would wrap in side {a.side}")
    if a._placed is not None:
        if a._placed[r:r + rows, c:c + cols].any():
            raise TileOverlapError(f"tile at ({r}, {c}) overlaps a placed tile")
        a._placed[r:r + rows, c:c + cols] = True
    a.cells[r:r + rows, c:c + cols] = cells


def _tile_stack(spec: AffineSpec) -> np.ndarray:
    """M . N_k XOR Z for every k, shape (2^(n*n), n, n)."""
    n = spec.n
    matrix = build_variant(spec.d, spec.profile).matrix.to_numpy().astype(np.int64)
    ks = np.arange(1 << (n * n), dtype=np.int64)
    shifts = (n * n - 1 - np.arange(n * n, dtype=np.int64)).reshape(n, n)
    tiles = (ks[:, None, None] >> shifts[None, :, :]) & 1
    products = np.einsum("rs,ksc->krc", matrix, tiles) % 2
    return (products ^ spec.z.to_numpy()[None, :, :]).astype(np.uint8)


def build_affine_array(spec: AffineSpec, max_exponent: int = MAX_ARRAY_EXPONENT) -> ToroidalArray:
    """Place every tile M . N_k XOR Z and return the frozen array."""
    check_array_exponent(spec.d, max_exponent=max_exponent)
    n = spec.n
    side = array_side(spec.d)
    tiles = _tile_stack(spec)
    ks = np.arange(tiles.shape[0], dtype=np.int64)
    lines = odd_bits(ks, width=n * n) * n
    columns = even_bits(ks, width=n * n) * n

    a = ToroidalArray.blank(side)
    for k in range(tiles.shape[0]):
        place_tile(a, (int(lines[k]), int(columns[k])), tiles[k])
    if not a.fully_placed:
        raise ConstructionError(f"tiles left cells uncovered in side {side}")

    logger.info(
        "Built affine array",
        d=spec.d,
        side=side,
        profile=str(spec.profile),
        z=str(spec.z).replace("\n", "/"),
    )
    return a.freeze()


def build_pascal_array(d: int, max_exponent: int = MAX_ARRAY_EXPONENT) -> ToroidalArray:
    """Affine array with the unrotated Pascal matrix and Z = 0."""
    return build_affine_array(AffineSpec.pascal(d), max_exponent=max_exponent)
