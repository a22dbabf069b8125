"""Shared fixtures: the sample arrays and the Pascal arrays."""

from pathlib import Path

import pytest

from cli.array_io import load_array
from torus.builder import build_pascal_array

SAMPLE_DIR = Path(__file__).parent.parent / "sample_data"

A1_ROWS = [
    "00010100",
    "00010001",
    "10111110",
    "10111011",
    "10111110",
    "00010001",
    "00010100",
    "10111011",
]


@pytest.fixture(scope="session")
def perfect_4x4():
    return load_array(SAMPLE_DIR / "perfect_2211_4x4.txt")


@pytest.fixture(scope="session")
def not_nested_8x8():
    return load_array(SAMPLE_DIR / "not_nested_2222_8x8.txt")


@pytest.fixture(scope="session")
def nested_8x8():
    return load_array(SAMPLE_DIR / "nested_2222_8x8.txt")


@pytest.fixture(scope="session")
def pascal_a1():
    return build_pascal_array(1)


@pytest.fixture(scope="session")
def pascal_a2():
    return build_pascal_array(2)
