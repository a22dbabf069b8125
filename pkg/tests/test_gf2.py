"""Tests for the GF(2) kernel."""

import numpy as np
import pytest

from enumeration.tile_index import matrix_from_index
from gf2.bitmatrix import (
    BitMatrix,
    BitVector,
    DimensionError,
    Singular,
    invert,
    mat_mul,
    mat_xor,
    rank,
    rotate_column,
    solve,
    submatrix,
)
from pascal.matrices import build_pascal

M1 = BitMatrix.from_rows([[1, 1], [0, 1]])


def naive_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix.from_numpy((a.to_numpy().astype(int) @ b.to_numpy().astype(int)) % 2)


def random_matrix(rng, rows, cols) -> BitMatrix:
    return BitMatrix.from_numpy(rng.integers(0, 2, size=(rows, cols)))


def test_mat_mul_tile_products():
    """Products that tile the 8x8 Pascal array."""
    assert mat_mul(M1, matrix_from_index(2, 1)) == BitMatrix.from_rows([[0, 1], [0, 1]])
    assert mat_mul(M1, matrix_from_index(2, 4)) == BitMatrix.from_rows([[0, 1], [0, 0]])


def test_mat_mul_identity():
    """Identity is neutral on both sides."""
    x = BitMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    assert mat_mul(BitMatrix.identity(2), x) == x
    assert mat_mul(x, BitMatrix.identity(3)) == x


def test_mat_mul_dimension_mismatch():
    """Test product shape check."""
    with pytest.raises(DimensionError):
        mat_mul(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 3))


def test_mat_xor():
    """Test entrywise XOR of tiles."""
    x = BitMatrix.from_rows([[1, 0], [1, 1]])
    assert mat_xor(x, x) == BitMatrix.zeros(2, 2)
    assert mat_xor(x, BitMatrix.zeros(2, 2)) == x
    assert mat_xor(matrix_from_index(2, 5), matrix_from_index(2, 3)) == matrix_from_index(2, 6)
    with pytest.raises(DimensionError):
        mat_xor(x, BitMatrix.zeros(2, 3))


def test_invert():
    """M_1 is its own inverse; an all-ones block is singular of rank 1."""
    assert invert(M1) == M1
    assert invert(BitMatrix.identity(5)) == BitMatrix.identity(5)
    assert invert(BitMatrix.from_rows([[1, 1], [1, 1]])) == Singular(rank=1)
    with pytest.raises(DimensionError):
        invert(BitMatrix.zeros(2, 3))


def test_rank():
    """Test rank of M_2 and of degenerate matrices."""
    assert rank(build_pascal(2)) == 4
    assert rank(BitMatrix.zeros(3, 5)) == 0
    assert rank(BitMatrix.from_rows([[1, 1], [1, 1]])) == 1


def test_solve():
    """Test solving M_2 X = B."""
    a = build_pascal(2)
    x = BitMatrix.from_rows([[1, 0, 0], [0, 1, 1], [1, 1, 1], [0, 0, 1]])
    assert solve(a, mat_mul(a, x)) == x
    assert isinstance(solve(BitMatrix.zeros(2, 2), BitMatrix.zeros(2, 1)), Singular)


def test_rotate_column():
    """Rotation moves entry i to (i + m) mod n."""
    v = BitVector.from_list([1, 0, 0, 0])
    assert rotate_column(v, 1) == BitVector.from_list([0, 1, 0, 0])
    assert rotate_column(v, 0) == v
    w = BitVector.from_list([1, 1, 0, 1])
    assert rotate_column(w, 4) == w
    assert rotate_column(w, 1) == BitVector.from_list([1, 1, 1, 0])
    for m in range(1, 9):
        assert rotate_column(w, m) == rotate_column(rotate_column(w, 1), m - 1)


def test_submatrix():
    """Test blocks of M_2 and the bounds check."""
    m2 = build_pascal(2)
    assert submatrix(m2, 0, 0, 4, 4) == m2
    assert submatrix(m2, 1, 2, 2, 2) == BitMatrix.from_rows([[0, 1], [1, 1]])
    assert submatrix(m2, 2, 2, 2, 2) == BitMatrix.from_rows([[1, 1], [0, 1]])
    with pytest.raises(DimensionError):
        submatrix(m2, 3, 3, 2, 2)


def test_padding_bits_are_cleared():
    """Bits beyond the last column are dropped."""
    m = BitMatrix(2, 3, [0b11111, 0b1000])
    assert m.data == (0b111, 0)
    assert BitVector(3, 0b1111).bits == 0b111


def test_structural_equality():
    """Test equality and hashing by shape and entries."""
    assert BitMatrix.zeros(2, 3) != BitMatrix.zeros(3, 2)
    assert BitMatrix.from_strings(["01", "10"]) == BitMatrix.from_rows([[0, 1], [1, 0]])
    assert hash(BitMatrix.identity(3)) == hash(BitMatrix.identity(3))


def test_numpy_round_trip():
    """Test conversion to and from numpy."""
    rng = np.random.default_rng(1)
    cells = rng.integers(0, 2, size=(5, 7)).astype(np.uint8)
    assert np.array_equal(BitMatrix.from_numpy(cells).to_numpy(), cells)


class TestAlgebraicLaws:
    """Randomized checks against a naive numpy reference."""

    @pytest.fixture
    def rng(self):
        return np.random.default_rng(2024)

    def test_packed_product_matches_naive(self, rng):
        """Packed product agrees with integer matmul mod 2."""
        for _ in range(50):
            a = random_matrix(rng, 5, 6)
            b = random_matrix(rng, 6, 4)
            assert mat_mul(a, b) == naive_mul(a, b)

    def test_associative_and_distributive(self, rng):
        """Test ring laws on random 4x4 matrices."""
        for _ in range(30):
            a, b, c = (random_matrix(rng, 4, 4) for _ in range(3))
            assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))
            assert mat_xor(a, b) == mat_xor(b, a)
            assert mat_mul(a, mat_xor(b, c)) == mat_xor(mat_mul(a, b), mat_mul(a, c))

    def test_invert_iff_full_rank(self, rng):
        """Inversion succeeds exactly on full-rank matrices."""
        for _ in range(100):
            a = random_matrix(rng, 5, 5)
            inverse = invert(a)
            if rank(a) == 5:
                assert isinstance(inverse, BitMatrix)
                assert mat_mul(inverse, a) == BitMatrix.identity(5)
                assert mat_mul(a, inverse) == BitMatrix.identity(5)
            else:
                assert inverse == Singular(rank=rank(a))

    def test_transpose(self, rng):
        """Test transpose against numpy."""
        a = random_matrix(rng, 3, 6)
        assert np.array_equal(a.transpose().to_numpy(), a.to_numpy().T)
