"""Locate a k x n pattern inside an aligned part of an affine array without scanning.

A part at level k covers tile rows p*2^w .. (p+1)*2^w - 1 and tile columns
q*2^w .. (q+1)*2^w - 1, w = kn/2. Inside the part every tile index shares its
high bits with (p, q), so rows 0 .. n-k-1 of N_{join(l, m)} are fixed and
the unknown rows n-k .. n-1 hold exactly the 2w local bits of l and m.

A window anchored at tile offset (i, j) of tile (l, m) reads up to four
tiles: (l, m), (l, m+1), (l+1, m), (l+1, m+1), neighbours wrapping inside
the part. Its rows in the upper tile row are rows of M . N_top, where N_top
takes tile columns >= j from N_{l,m} and columns < j from N_{l,m+1}; rows in
the lower tile row come from M . N_bottom built the same way from the l+1
tiles. Unknown rows are recovered from the bottom up, so each recovered row
yields the next low bits of l and m, and the bits read from a +1 neighbour
are undone with the carry of the bits already known.
"""

from typing import Dict, List, Optional, Tuple

import structlog

from enumeration.tile_index import join, matrix_from_index
from gf2.bitmatrix import BitMatrix, Singular, solve
from pascal.matrices import (
    PascalLikeMatrix,
    bottom_border_submatrix,
    build_variant,
    leftmost_one_rows,
    right_submatrix,
    tau,
    top_border_submatrix,
)
from torus.array import ToroidalArray
from torus.builder import AffineSpec

logger = structlog.get_logger(__name__)


class TheoryViolation(RuntimeError):
    """A block that must be invertible was singular, or the recovered tiles do not reproduce the pattern."""


class _IncrementDecoder:
    """Rebuilds x from its bits, least significant first, each read from x or from x + 1."""

    def __init__(self):
        self.value = 0
        self.width = 0
        self.carry = 1

    def push(self, bit: int, incremented: bool) -> None:
        if incremented:
            bit ^= self.carry
        self.value |= bit << self.width
        self.width += 1
        self.carry &= bit


def _rows_leading_from(p: PascalLikeMatrix, col: int) -> set:
    if col == 0:
        return set(range(p.n))
    start, end = leftmost_one_rows(p, col)
    return set(range(p.n)) - set(range(start, end + 1))


def parts_per_side(n: int, level: int) -> int:
    """Aligned parts per side at a level, 2^((n-k)n/2)."""
    return 1 << ((n - level) * n // 2)


def part_side(n: int, level: int) -> int:
    """Side n * 2^(kn/2) of one aligned part at level k."""
    return n << (level * n // 2)


def part_of(a: ToroidalArray, n: int, level: int, part: Tuple[int, int]) -> ToroidalArray:
    """Copy of the aligned part (p, q) at the given level."""
    side = part_side(n, level)
    r, c = part[0] * side, part[1] * side
    return ToroidalArray(a.cells[r:r + side, c:c + side].copy())


def _rotate_left(row: int, shift: int, n: int) -> int:
    return ((row << shift) | (row >> (n - shift))) & ((1 << n) - 1)


class _PartDecoder:
    def __init__(
        self,
        spec: AffineSpec,
        variant: PascalLikeMatrix,
        level: int,
        part: Tuple[int, int],
        pattern: BitMatrix,
        residue_class: Tuple[int, int],
    ):
        n = spec.n
        self.n = n
        self.k = level
        self.i, self.j = residue_class
        self.variant = variant
        self.matrix = variant.matrix
        self.w = level * n // 2
        self.base_l = part[0] << self.w
        self.base_m = part[1] << self.w
        self.high_mask = ((1 << n) - 1) ^ ((1 << self.j) - 1)
        self.low_mask = (1 << self.j) - 1
        self.fixed = matrix_from_index(n, join(self.base_l, self.base_m)).data
        self.ldec = _IncrementDecoder()
        self.mdec = _IncrementDecoder()

        # window row a sits in tile row (i + a) mod n; rows are rotated into tile-column order
        self.top: Dict[int, int] = {}
        self.bottom: Dict[int, int] = {}
        for a in range(level):
            y = _rotate_left(pattern.data[a], self.j, n) ^ spec.z.data[(self.i + a) % n]
            if self.i + a < n:
                self.top[self.i + a] = y
            else:
                self.bottom[self.i + a - n] = y

    def _tile(self, dl: int, dm: int) -> Tuple[int, ...]:
        mod = 1 << self.ldec.width
        ell = self.base_l + (self.ldec.value + dl) % mod
        m = self.base_m + (self.mdec.value + dm) % mod
        return matrix_from_index(self.n, join(ell, m)).data

    def composites(self) -> Tuple[List[int], List[int]]:
        """N_top and N_bottom; rows below the recovered ones are exact."""
        n00, n01, n10, n11 = self._tile(0, 0), self._tile(0, 1), self._tile(1, 0), self._tile(1, 1)
        top = [(n00[s] & self.high_mask) | (n01[s] & self.low_mask) for s in range(self.n)]
        bottom = [(n10[s] & self.high_mask) | (n11[s] & self.low_mask) for s in range(self.n)]
        return top, bottom

    def push_row(self, row: int, lower_tiles: bool) -> None:
        for c in range(self.n - 1, -1, -1):
            bit = (row >> c) & 1
            if c % 2 == 0:
                self.ldec.push(bit, incremented=lower_tiles)
            else:
                self.mdec.push(bit, incremented=c < self.j)

    def _solve(self, block: BitMatrix, rhs: List[int], what: str) -> BitMatrix:
        solution = solve(block, BitMatrix(len(rhs), self.n, rhs))
        if isinstance(solution, Singular):
            raise TheoryViolation(f"{what} block is singular (rank {solution.rank}) for profile {self.variant.profile}")
        return solution

    def _known_part(self, R: int, skip: range, composite: Optional[List[int]]) -> int:
        """XOR of the row contributions of M[R] outside the unknown columns."""
        acc = 0
        row = self.matrix.data[R]
        for s in range(self.n):
            if s in skip or not (row >> s) & 1:
                continue
            acc ^= self.fixed[s] if s < self.n - self.k else composite[s]
        return acc

    def run(self) -> Tuple[int, int]:
        n, k, i = self.n, self.k, self.i
        if i + k <= n:
            self._single_tile_row()
        else:
            self._two_tile_rows()
        self._confirm()
        return self.ldec.value * n + i, self.mdec.value * n + self.j

    def _single_tile_row(self) -> None:
        n, k, i = self.n, self.k, self.i
        unknown = range(n - k, n)
        rhs = [self.top[R] ^ self._known_part(R, unknown, None) for R in range(i, i + k)]
        solution = self._solve(right_submatrix(self.variant, i, k), rhs, "right-anchored")
        for idx in range(k - 1, -1, -1):
            self.push_row(solution.data[idx], lower_tiles=False)

    def _two_tile_rows(self) -> None:
        n, k, i = self.n, self.k, self.i
        order = tau(self.variant)
        seen = set(self.top) | set(self.bottom)

        # smallest r >= n - k such that every row with its leading 1 in a column >= r is covered
        r = n
        while r > n - k and _rows_leading_from(self.variant, r - 1) <= seen:
            r -= 1

        # rows whose leading 1 sits in column s recover row s directly
        for s in range(n - 1, r - 1, -1):
            top, bottom = self.composites()
            R = order[s]
            lower = R in self.bottom
            y, composite = (self.bottom[R], bottom) if lower else (self.top[R], top)
            acc = y
            for s2 in range(s + 1, n):
                if (self.matrix.data[R] >> s2) & 1:
                    acc ^= composite[s2]
            self.push_row(acc, lower_tiles=lower)

        if r == n - k:
            return

        u = r - (n - k)
        top, bottom = self.composites()
        corner = self.variant.profile.m[r - 1]
        if order[r - 1] == corner + r - 1:
            if corner + r - 1 != i - 1:
                raise TheoryViolation(f"cut row {order[r - 1]} is not the last row above the window gap")
            rows = range(corner, corner + u)
            block = top_border_submatrix(self.variant, corner, n - k, u)
            source, composite, lower = self.bottom, bottom, True
        else:
            if corner != i + k - n:
                raise TheoryViolation(f"cut row {order[r - 1]} is not the first row below the window gap")
            rows = range(i, i + u)
            block = bottom_border_submatrix(self.variant, i + u - 1, n - k, u)
            source, composite, lower = self.top, top, False

        unknown = range(n - k, r)
        rhs = []
        for R in rows:
            if R not in source:
                raise TheoryViolation(f"row {R} of the border block is not covered by the window")
            rhs.append(source[R] ^ self._known_part(R, unknown, composite))
        solution = self._solve(block, rhs, "border-anchored")
        for idx in range(u - 1, -1, -1):
            self.push_row(solution.data[idx], lower_tiles=lower)

    def _confirm(self) -> None:
        top, bottom = self.composites()
        for rows, composite in ((self.top, top), (self.bottom, bottom)):
            for R, y in rows.items():
                acc = 0
                for s in range(self.n):
                    if (self.matrix.data[R] >> s) & 1:
                        acc ^= composite[s]
                if acc != y:
                    raise TheoryViolation(f"recovered tiles do not reproduce tile row {R}")


def locate_pattern(
    spec: AffineSpec,
    level: int,
    part: Tuple[int, int],
    pattern: BitMatrix,
    residue_class: Tuple[int, int],
    variant: Optional[PascalLikeMatrix] = None,
) -> Tuple[int, int]:
    """Position, relative to the part, of the unique occurrence of pattern in the class.

    ``variant`` may be passed to reuse an already built matrix across queries.
    """
    n = spec.n
    if spec.d < 1:
        raise ValueError("decoding needs n >= 2")
    if not 1 <= level <= n:
        raise ValueError(f"level {level} outside 1..{n}")
    if pattern.shape != (level, n):
        raise ValueError(f"pattern must be {level}x{n}, got {pattern.rows}x{pattern.cols}")
    i, j = residue_class
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"class ({i}, {j}) outside modulo ({n}, {n})")
    count = parts_per_side(n, level)
    if not (0 <= part[0] < count and 0 <= part[1] < count):
        raise ValueError(f"part {part} outside 0..{count - 1} at level {level}")
    if variant is None:
        variant = build_variant(spec.d, spec.profile)
    elif variant.profile != spec.profile or variant.d != spec.d:
        raise ValueError("variant does not match the AffineSpec profile")

    position = _PartDecoder(spec, variant, level, tuple(part), pattern, (i, j)).run()
    logger.debug("Located pattern", level=level, part=part, residue_class=(i, j), position=position)
    return position


def global_position(n: int, level: int, part: Tuple[int, int], position: Tuple[int, int]) -> Tuple[int, int]:
    """Part-relative position translated to array coordinates."""
    side = part_side(n, level)
    return part[0] * side + position[0], part[1] * side + position[1]


