"""Exhaustive (s, t, p, q)-perfectness and nestedness checks.

Every window is packed into one integer key, row-major with the window's
(0, 0) entry in the most significant bit. Keys for all positions come from
s + t shifted copies of the array (shift-or along columns, then along rows),
and per-class tallies are a single bincount over (part, class, key).

An array is (s, t, p, q)-perfect when every class tally is exactly one for
every one of the 2^(s*t) patterns.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
import structlog

from gf2.bitmatrix import BitMatrix
from pascal.matrices import exponent_of
from torus.array import Modulo, ToroidalArray, WindowSpec, aligned_blocks
from verifier.reports import LevelReport, NestedReport, PartFailure, PerfectnessReport, Witness

logger = structlog.get_logger(__name__)

KEY_BITS = 62
DEFAULT_MAX_WITNESSES = 16


def _check_key_width(w: WindowSpec) -> None:
    if w.cells > KEY_BITS:
        raise ValueError(f"{w.s}x{w.t} windows need {w.cells} key bits; at most {KEY_BITS} are supported")


def window_keys(cells: np.ndarray, s: int, t: int) -> np.ndarray:
    """Key of the s x t window at every position of the last two axes, with wrap-around."""
    _check_key_width(WindowSpec(s=s, t=t))
    cells = cells.astype(np.int64)
    row_keys = np.zeros_like(cells)
    for b in range(t):
        row_keys = (row_keys << 1) | np.roll(cells, -b, axis=-1)
    keys = np.zeros_like(cells)
    for a in range(s):
        keys = (keys << t) | np.roll(row_keys, -a, axis=-2)
    return keys


def pattern_key(pattern: BitMatrix) -> int:
    """Pack a pattern row-major, entry (0, 0) in the top bit."""
    key = 0
    for row in pattern.data:
        for c in range(pattern.cols):
            key = (key << 1) | ((row >> c) & 1)
    return key


def key_to_rows(key: int, w: WindowSpec) -> List[List[int]]:
    """Unpack a window key into 0/1 rows."""
    bits = [(key >> (w.cells - 1 - i)) & 1 for i in range(w.cells)]
    return [bits[a * w.t:(a + 1) * w.t] for a in range(w.s)]


def _class_grid(side: int, m: Modulo) -> np.ndarray:
    idx = np.arange(side, dtype=np.int64)
    return (idx[:, None] % m.p) * m.q + (idx[None, :] % m.q)


def occurrence_positions(
    a: ToroidalArray, pattern: BitMatrix, modulo: Modulo, residue_class: Tuple[int, int]
) -> List[Tuple[int, int]]:
    """Positions congruent to residue_class where the window equals pattern."""
    i, j = residue_class
    if not (0 <= i < modulo.p and 0 <= j < modulo.q):
        raise ValueError(f"class ({i}, {j}) outside modulo ({modulo.p}, {modulo.q})")
    if pattern.rows > a.side or pattern.cols > a.side:
        raise ValueError(f"{pattern.rows}x{pattern.cols} pattern is larger than side {a.side}")
    rows = np.arange(i, a.side, modulo.p)
    cols = np.arange(j, a.side, modulo.q)
    w = WindowSpec(s=pattern.rows, t=pattern.cols)

    if w.cells <= KEY_BITS:
        keys = window_keys(a.cells, w.s, w.t)[np.ix_(rows, cols)]
        hits = np.argwhere(keys == pattern_key(pattern))
        return [(int(rows[r]), int(cols[c])) for r, c in hits]

    target = pattern.to_numpy()
    found = []
    for r in rows:
        band = np.take(a.cells, np.arange(r, r + w.s), axis=0, mode="wrap")
        for c in cols:
            block = np.take(band, np.arange(c, c + w.t), axis=1, mode="wrap")
            if np.array_equal(block, target):
                found.append((int(r), int(c)))
    return found


def count_occurrences(
    a: ToroidalArray, pattern: BitMatrix, modulo: Modulo, residue_class: Tuple[int, int]
) -> int:
    """Number of times pattern occurs at positions congruent to residue_class."""
    return len(occurrence_positions(a, pattern, modulo, residue_class))


def _tally_parts(parts: np.ndarray, w: WindowSpec, m: Modulo) -> np.ndarray:
    """Counts of shape (parts, classes, patterns) for a stack of square parts."""
    count, side, _ = parts.shape
    patterns = 1 << w.cells
    keys = window_keys(parts, w.s, w.t)
    part_ids = np.arange(count, dtype=np.int64)[:, None, None]
    flat = (part_ids * m.classes + _class_grid(side, m)[None, :, :]) * patterns + keys
    tally = np.bincount(flat.ravel(), minlength=count * m.classes * patterns)
    return tally.reshape(count, m.classes, patterns)


def _tally_band(cells: np.ndarray, w: WindowSpec, m: Modulo, start: int, stop: int) -> np.ndarray:
    """Counts of shape (classes, patterns) for windows anchored in rows start..stop-1."""
    side = cells.shape[0]
    patterns = 1 << w.cells
    extended = np.take(cells, np.arange(start, stop + w.s - 1), axis=0, mode="wrap")
    keys = window_keys(extended, w.s, w.t)[: stop - start]
    rows = np.arange(start, stop, dtype=np.int64)
    cols = np.arange(side, dtype=np.int64)
    classes = (rows[:, None] % m.p) * m.q + (cols[None, :] % m.q)
    tally = np.bincount((classes * patterns + keys).ravel(), minlength=m.classes * patterns)
    return tally.reshape(m.classes, patterns)


def _tally_array(cells: np.ndarray, w: WindowSpec, m: Modulo, workers: int) -> np.ndarray:
    side = cells.shape[0]
    if workers <= 1 or side < 2 * workers:
        return _tally_band(cells, w, m, 0, side)
    bounds = np.linspace(0, side, workers + 1, dtype=int)
    bands = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        partials = list(pool.map(lambda band: _tally_band(cells, w, m, *band), bands))
    return np.sum(partials, axis=0)


def _positions_with_key(cells: np.ndarray, w: WindowSpec, m: Modulo, cls: int, key: int) -> List[Tuple[int, int]]:
    keys = window_keys(cells, w.s, w.t)
    hits = np.argwhere((keys == key) & (_class_grid(cells.shape[0], m) == cls))
    return [(int(r), int(c)) for r, c in hits]


def _witness_from_tally(cells: np.ndarray, tally: np.ndarray, w: WindowSpec, m: Modulo) -> Optional[Witness]:
    """Duplicate witness if any class sees a pattern twice, else a missing one."""
    patterns = 1 << w.cells
    duplicates = np.flatnonzero(tally.ravel() >= 2)
    if duplicates.size:
        cls, key = divmod(int(duplicates[0]), patterns)
        return Witness(
            kind="duplicate",
            pattern=key_to_rows(key, w),
            residue_class=divmod(cls, m.q),
            positions=_positions_with_key(cells, w, m, cls, key),
        )
    missing = np.flatnonzero(tally.ravel() == 0)
    if missing.size:
        cls, key = divmod(int(missing[0]), patterns)
        return Witness(kind="missing", pattern=key_to_rows(key, w), residue_class=divmod(cls, m.q))
    return None


def _counting_witness(cells: np.ndarray, w: WindowSpec, m: Modulo) -> Witness:
    """Witness in class (0, 0) when class size and pattern count differ."""
    keys = window_keys(cells, w.s, w.t)[:: m.p, :: m.q]
    values, counts = np.unique(keys, return_counts=True)
    repeated = np.flatnonzero(counts >= 2)
    if repeated.size:
        key = int(values[repeated[0]])
        hits = np.argwhere(keys == key)
        return Witness(
            kind="duplicate",
            pattern=key_to_rows(key, w),
            residue_class=(0, 0),
            positions=[(int(r) * m.p, int(c) * m.q) for r, c in hits],
        )
    # values are sorted and distinct; the first gap is the smallest absent key
    gaps = np.flatnonzero(values != np.arange(values.size))
    key = int(gaps[0]) if gaps.size else int(values.size)
    return Witness(kind="missing", pattern=key_to_rows(key, w), residue_class=(0, 0))


def is_perfect(
    a: ToroidalArray, window: WindowSpec, modulo: Modulo, workers: int = 1
) -> PerfectnessReport:
    """Check that every window pattern occurs exactly once in every residue class.

    When the class size differs from 2^(s*t) no tally is taken: only class
    (0, 0) is read to produce a witness.
    """
    if a.side % modulo.p or a.side % modulo.q:
        raise ValueError(f"modulo ({modulo.p}, {modulo.q}) does not divide side {a.side}")
    _check_key_width(window)
    per_class = (a.side // modulo.p) * (a.side // modulo.q)
    patterns = 1 << window.cells

    if per_class != patterns:
        reason = (
            f"infeasible: {per_class} positions per residue class "
            f"for {patterns} patterns of size {window.s}x{window.t}"
        )
        logger.debug("Counting argument rules out perfectness", side=a.side, reason=reason)
        return PerfectnessReport(
            verdict="not-perfect",
            window=window,
            modulo=modulo,
            witness=_counting_witness(a.cells, window, modulo),
            positions_scanned=per_class,
            reason=reason,
        )

    tally = _tally_array(a.cells, window, modulo, workers)
    witness = _witness_from_tally(a.cells, tally, window, modulo)
    return PerfectnessReport(
        verdict="perfect" if witness is None else "not-perfect",
        window=window,
        modulo=modulo,
        witness=witness,
        positions_scanned=a.side * a.side,
    )


def _failing_parts(blocks: np.ndarray, w: WindowSpec, m: Modulo, workers: int) -> np.ndarray:
    """Boolean flag per part: some class tally differs from one."""

    def check(idx: np.ndarray) -> np.ndarray:
        return (_tally_parts(blocks[idx], w, m) != 1).any(axis=(1, 2))

    chunks = [c for c in np.array_split(np.arange(blocks.shape[0]), max(workers, 1)) if c.size]
    if len(chunks) == 1:
        return check(chunks[0])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.concatenate(list(pool.map(check, chunks)))


def _check_level(
    a: ToroidalArray, rows: int, t: int, modulo: Modulo, part_side: int, workers: int, max_witnesses: int
) -> LevelReport:
    w = WindowSpec(s=rows, t=t)
    per_side = a.side // part_side
    parts = per_side * per_side

    if parts == 1:
        report = is_perfect(a, w, modulo, workers=workers)
        failures = [] if report.perfect else [PartFailure(position=(0, 0), report=report)]
        return LevelReport(rows=rows, part_side=part_side, parts=1, failing_parts=len(failures), failures=failures)

    if part_side % modulo.p or part_side % modulo.q:
        raise ValueError(f"modulo ({modulo.p}, {modulo.q}) does not divide part side {part_side}")
    _check_key_width(w)
    blocks = aligned_blocks(a.cells, part_side)
    feasible = (part_side // modulo.p) * (part_side // modulo.q) == 1 << w.cells
    if feasible:
        bad = np.flatnonzero(_failing_parts(blocks, w, modulo, workers))
    else:
        bad = np.arange(parts)

    failures = []
    for idx in bad[:max_witnesses]:
        r, c = divmod(int(idx), per_side)
        part = ToroidalArray(blocks[idx].copy())
        failures.append(
            PartFailure(position=(r * part_side, c * part_side), report=is_perfect(part, w, modulo))
        )
    logger.debug("Checked level", rows=rows, part_side=part_side, parts=parts, failing=int(bad.size))
    return LevelReport(
        rows=rows, part_side=part_side, parts=parts, failing_parts=int(bad.size), failures=failures
    )


def nested_report(
    a: ToroidalArray,
    window: WindowSpec,
    modulo: Modulo,
    workers: int = 1,
    max_witnesses: int = DEFAULT_MAX_WITNESSES,
) -> NestedReport:
    """Check every subdivision level of the general nested definition.

    Level with r window rows splits the array into 2^((s-r)t/2) parts per
    side, each of which must be (r, t, p, q)-perfect.
    """
    levels = []
    for rows in range(1, window.s + 1):
        exponent = (window.s - rows) * window.t
        if exponent % 2:
            raise ValueError(f"{window.s}x{window.t} windows need (s - r) * t even at r = {rows}")
        divisor = 1 << (exponent // 2)
        if a.side % divisor:
            raise ValueError(f"side {a.side} cannot be split into {divisor} parts per side")
        levels.append(_check_level(a, rows, window.t, modulo, a.side // divisor, workers, max_witnesses))

    nested = all(level.passed for level in levels)
    logger.info(
        "Nested check finished",
        side=a.side,
        window=f"{window.s}x{window.t}",
        modulo=f"{modulo.p},{modulo.q}",
        nested=nested,
    )
    return NestedReport(window=window, modulo=modulo, nested=nested, levels=levels)


def is_nested_perfect(
    a: ToroidalArray, n: int, workers: int = 1, max_witnesses: int = DEFAULT_MAX_WITNESSES
) -> NestedReport:
    """Square case: for k = 1..n every aligned part of side n * 2^(nk/2) is (k, n, n, n)-perfect."""
    if n < 2:
        raise ValueError(f"nested square arrays need n >= 2, got {n}")
    exponent_of(n)
    expected = n << (n * n // 2)
    if a.side != expected:
        raise ValueError(f"side {a.side} does not match n * 2^(n^2/2) = {expected} for n = {n}")
    report = nested_report(a, WindowSpec(s=n, t=n), Modulo(p=n, q=n), workers=workers, max_witnesses=max_witnesses)
    return report.model_copy(update={"n": n})
