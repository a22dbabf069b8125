"""Pascal matrices M_d, Pascal-like variants, borders and tau.

M_d is the 2^d x 2^d matrix with M_0 = (1) and M_{d+1} = [[M_d, M_d], [0, M_d]].
A variant rotates column j of M_d down by m_j steps (sigma^{m_j}); the
rotation profile m_0 .. m_{n-1} ends in 0 and steps by 0 or 1.

In column j of a variant the nonzero entries lie in rows m_j .. m_j + j
(upper and lower border). The decoder relies on three families of
invertible square blocks: right-anchored rows, blocks whose top-right entry
is on the upper border, and blocks whose bottom-right entry is on the lower
border.
"""

from typing import List, Sequence, Tuple, Union

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from gf2.bitmatrix import BitMatrix, rotate_column, submatrix

logger = structlog.get_logger(__name__)

MAX_MATRIX_EXPONENT = 10


class InvalidProfileError(ValueError):
    """Rotation profile violates m_{n-1} = 0 or the 0/1 step rule."""


class BorderError(ValueError):
    """Requested block is not anchored on the border it claims."""


class ExponentTooLargeError(ValueError):
    """Matrix exponent above the configured cap."""


def is_power_of_two(n: int) -> bool:
    """True for 1, 2, 4, 8, ..."""
    return n >= 1 and n & (n - 1) == 0


def exponent_of(n: int) -> int:
    """d with n = 2^d."""
    if not is_power_of_two(n):
        raise ValueError(f"n must be a power of 2, got {n}")
    return n.bit_length() - 1


class RotationProfile(BaseModel):
    """Shifts m_0 .. m_{n-1} selecting one Pascal-like matrix."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    m: Tuple[int, ...]

    @field_validator("n")
    @classmethod
    def _power_of_two(cls, n: int) -> int:
        if not is_power_of_two(n):
            raise ValueError(f"n must be a power of 2, got {n}")
        return n

    @model_validator(mode="after")
    def _check_shifts(self) -> "RotationProfile":
        if len(self.m) != self.n:
            raise ValueError(f"profile has {len(self.m)} shifts, expected {self.n}")
        if self.m[-1] != 0:
            raise ValueError(f"last shift must be 0, got {self.m[-1]}")
        for i in range(self.n - 1):
            if self.m[i] - self.m[i + 1] not in (0, 1):
                raise ValueError(
                    f"shifts m_{i}={self.m[i]} and m_{i + 1}={self.m[i + 1]} must differ by 0 or 1"
                )
        return self

    @classmethod
    def of(cls, shifts: Sequence[int]) -> "RotationProfile":
        """Validate a shift list, raising InvalidProfileError on bad input."""
        try:
            return cls(n=len(shifts), m=tuple(int(s) for s in shifts))
        except ValidationError as e:
            raise InvalidProfileError(_first_message(e)) from e

    @classmethod
    def zero(cls, n: int) -> "RotationProfile":
        """All shifts zero, which gives M_d itself."""
        return cls.of([0] * n)

    @property
    def is_zero(self) -> bool:
        return not any(self.m)

    def __str__(self) -> str:
        return ",".join(str(s) for s in self.m)


def _first_message(error: ValidationError) -> str:
    details = error.errors()
    return details[0]["msg"] if details else str(error)


class PascalLikeMatrix(BaseModel):
    """M_d^{m_0..m_{n-1}} together with the profile that produced it."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(..., ge=0)
    profile: RotationProfile
    matrix: BitMatrix

    @property
    def n(self) -> int:
        return 1 << self.d


ProfileLike = Union[RotationProfile, Sequence[int]]


def _as_profile(profile: ProfileLike) -> RotationProfile:
    if isinstance(profile, RotationProfile):
        return profile
    return RotationProfile.of(profile)


def build_pascal(d: int, max_exponent: int = MAX_MATRIX_EXPONENT) -> BitMatrix:
    """M_d by the block recurrence."""
    if d < 0:
        raise ValueError(f"exponent must be non-negative, got {d}")
    if d > max_exponent:
        raise ExponentTooLargeError(
            f"M_{d} would be {1 << d}x{1 << d}; the cap is d <= {max_exponent}"
        )
    rows = [1]
    width = 1
    for _ in range(d):
        top = [r | (r << width) for r in rows]
        bottom = [r << width for r in rows]
        rows = top + bottom
        width <<= 1
    return BitMatrix(width, width, rows)


def build_variant(d: int, profile: ProfileLike, max_exponent: int = MAX_MATRIX_EXPONENT) -> PascalLikeMatrix:
    """M_d with column j rotated down by m_j."""
    profile = _as_profile(profile)
    n = 1 << d if d >= 0 else 0
    if profile.n != n:
        raise InvalidProfileError(f"profile has {profile.n} shifts but M_{d} has {n} columns")
    base = build_pascal(d, max_exponent=max_exponent)
    columns = [rotate_column(base.column(j), profile.m[j]) for j in range(n)]
    logger.debug("Built Pascal-like matrix", d=d, profile=str(profile))
    return PascalLikeMatrix(d=d, profile=profile, matrix=BitMatrix.from_columns(columns))


def profile_from_differences(n: int, value: int) -> RotationProfile:
    """Profile whose steps m_i - m_{i+1} are the binary digits of value, step 0 lowest."""
    if not is_power_of_two(n):
        raise ValueError(f"n must be a power of 2, got {n}")
    if not 0 <= value < profile_count(n):
        raise ValueError(f"difference vector {value} outside 0..{profile_count(n) - 1}")
    shifts = [0] * n
    for i in range(n - 2, -1, -1):
        shifts[i] = shifts[i + 1] + ((value >> i) & 1)
    return RotationProfile(n=n, m=tuple(shifts))


def profile_index(profile: RotationProfile) -> int:
    """Position of a profile in enumerate_profiles order."""
    return sum((profile.m[i] - profile.m[i + 1]) << i for i in range(profile.n - 1))


def profile_count(n: int) -> int:
    """Number of valid rotation profiles, 2^(n-1)."""
    exponent_of(n)
    return 1 << (n - 1)


def enumerate_profiles(n: int) -> List[RotationProfile]:
    """Every valid profile for n columns, in binary-counter order of the steps."""
    return [profile_from_differences(n, v) for v in range(profile_count(n))]


def _check_column(p: PascalLikeMatrix, j: int) -> None:
    if not 0 <= j < p.n:
        raise ValueError(f"column {j} outside 0..{p.n - 1}")


def upper_border(p: PascalLikeMatrix, j: int) -> int:
    """Row of the topmost 1 in column j."""
    _check_column(p, j)
    return p.profile.m[j]


def lower_border(p: PascalLikeMatrix, j: int) -> int:
    """Row of the bottommost 1 in column j."""
    _check_column(p, j)
    return p.profile.m[j] + j


def tau(p: PascalLikeMatrix) -> List[int]:
    """Per column, the border row with no 1 to its left."""
    m = p.profile.m
    return [
        m[i] if i == 0 or m[i - 1] == m[i] + 1 else m[i] + i
        for i in range(p.n)
    ]


def leftmost_one_rows(p: PascalLikeMatrix, j: int) -> Tuple[int, int]:
    """Inclusive row interval whose leftmost 1 lies in a column < j (j >= 1)."""
    if not 1 <= j <= p.n:
        raise ValueError(f"column bound {j} outside 1..{p.n}")
    start = p.profile.m[j - 1]
    return start, start + j - 1


def right_submatrix(p: PascalLikeMatrix, ell: int, k: int) -> BitMatrix:
    """Rows ell .. ell+k-1 restricted to the last k columns."""
    if k < 1 or ell < 0 or ell + k > p.n:
        raise ValueError(f"rows {ell}..{ell + k - 1} outside 0..{p.n - 1}")
    return submatrix(p.matrix, ell, p.n - k, k, k)


def top_border_submatrix(p: PascalLikeMatrix, row_start: int, col_start: int, k: int) -> BitMatrix:
    """k x k block whose top-right entry lies on the upper border."""
    corner_col = col_start + k - 1
    if k < 1 or row_start < 0 or col_start < 0 or row_start + k > p.n or corner_col >= p.n:
        raise ValueError(f"{k}x{k} block at ({row_start}, {col_start}) outside {p.n}x{p.n} matrix")
    if upper_border(p, corner_col) != row_start:
        raise BorderError(
            f"top-right corner ({row_start}, {corner_col}) is not on the upper border "
            f"(column {corner_col} starts at row {upper_border(p, corner_col)})"
        )
    return submatrix(p.matrix, row_start, col_start, k, k)


def bottom_border_submatrix(p: PascalLikeMatrix, row_end: int, col_start: int, k: int) -> BitMatrix:
    """k x k block whose bottom-right entry lies on the lower border."""
    corner_col = col_start + k - 1
    row_start = row_end - k + 1
    if k < 1 or row_start < 0 or col_start < 0 or row_end >= p.n or corner_col >= p.n:
        raise ValueError(f"{k}x{k} block ending at ({row_end}, {corner_col}) outside {p.n}x{p.n} matrix")
    if lower_border(p, corner_col) != row_end:
        raise BorderError(
            f"bottom-right corner ({row_end}, {corner_col}) is not on the lower border "
            f"(column {corner_col} ends at row {lower_border(p, corner_col)})"
        )
    return submatrix(p.matrix, row_start, col_start, k, k)


def main():
    """Print a Pascal-like matrix with its borders and tau."""
    import argparse

    parser = argparse.ArgumentParser(description="Show a Pascal-like matrix")
    parser.add_argument("--d", type=int, default=2, help="Exponent, n = 2^d")
    parser.add_argument("--profile", default="zero", help="Comma list of shifts or 'zero'")
    args = parser.parse_args()

    n = 1 << args.d
    shifts = [0] * n if args.profile == "zero" else [int(s) for s in args.profile.split(",")]
    p = build_variant(args.d, shifts)
    print(p.matrix)
    print("upper:", [upper_border(p, j) for j in range(n)])
    print("lower:", [lower_border(p, j) for j in range(n)])
    print("tau:  ", tau(p))


if __name__ == "__main__":
    main()
