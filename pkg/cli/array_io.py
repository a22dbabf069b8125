"""Array files: plain text grids and PBM P1 bitmaps.

text-grid: `side` lines of `side` characters from {0, 1}.
PBM P1:    magic "P1", width, height, then width*height 0/1 pixels,
           written 35 pixels per line (70 characters), '#' comments
           accepted on read.
"""

from pathlib import Path
from typing import Iterator, List, Literal, Tuple

import numpy as np
import structlog

from torus.array import ToroidalArray

logger = structlog.get_logger(__name__)

ArrayFormat = Literal["text", "pbm"]
PBM_LINE_WIDTH = 70


class ArrayFormatError(ValueError):
    """Malformed array file; line and column are 1-based."""

    def __init__(self, message: str, line: int, column: int = 0):
        location = f"line {line}" + (f", column {column}" if column else "")
        super().__init__(f"{location}: {message}")
        self.line = line
        self.column = column


def write_array(a: ToroidalArray, fmt: ArrayFormat = "text") -> str:
    """Serialize as a text grid or PBM P1."""
    if fmt == "text":
        return "\n".join(a.to_strings()) + "\n"
    if fmt == "pbm":
        pixels = " ".join("1" if v else "0" for v in a.cells.ravel().tolist())
        per_line = PBM_LINE_WIDTH // 2
        lines = ["P1", f"{a.side} {a.side}"]
        step = per_line * 2
        lines.extend(pixels[i:i + step].strip() for i in range(0, len(pixels), step))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown array format {fmt!r}")


def _parse_text_grid(text: str) -> ToroidalArray:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    first = 0
    while first < len(lines) and not lines[first].strip():
        first += 1
    if first == len(lines):
        raise ArrayFormatError("empty array file", line=1)
    # line numbers stay those of the file
    lines = lines[first:]
    side = len(lines[0])
    rows = []
    for number, line in enumerate(lines, start=first + 1):
        for column, ch in enumerate(line, start=1):
            if ch not in "01":
                raise ArrayFormatError(f"illegal character {ch!r}", line=number, column=column)
        if len(line) != side:
            raise ArrayFormatError(f"row has {len(line)} cells, expected {side}", line=number)
        rows.append([int(ch) for ch in line])
    if len(rows) != side:
        raise ArrayFormatError(f"{len(rows)} rows of {side} cells is not square", line=first + len(rows))
    return ToroidalArray(np.array(rows, dtype=np.uint8))


def _pbm_tokens(text: str) -> Iterator[Tuple[str, int, int]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        column = 0
        for part in line.split():
            column = line.index(part, column)
            yield part, number, column + 1
            column += len(part)


def _parse_pbm(text: str) -> ToroidalArray:
    tokens = _pbm_tokens(text)
    magic = next(tokens, None)
    if magic is None or magic[0] != "P1":
        raise ArrayFormatError("missing P1 magic", line=magic[1] if magic else 1)

    dims: List[int] = []
    for name in ("width", "height"):
        token = next(tokens, None)
        if token is None:
            raise ArrayFormatError(f"missing {name}", line=magic[1])
        value, line, column = token
        if not value.isdigit() or int(value) < 1:
            raise ArrayFormatError(f"{name} must be a positive integer, got {value!r}", line, column)
        dims.append(int(value))
    width, height = dims
    if width != height:
        raise ArrayFormatError(f"{width}x{height} bitmap is not square", line=line)

    pixels: List[int] = []
    last_line = line
    for value, line, column in tokens:
        last_line = line
        # P1 allows pixels without separating whitespace
        for offset, ch in enumerate(value):
            if ch not in "01":
                raise ArrayFormatError(f"illegal pixel {ch!r}", line=line, column=column + offset)
            pixels.append(int(ch))
    if len(pixels) != width * height:
        raise ArrayFormatError(f"{len(pixels)} pixels for a {width}x{height} bitmap", line=last_line)
    return ToroidalArray(np.array(pixels, dtype=np.uint8).reshape(height, width))


def read_array(text: str) -> ToroidalArray:
    """Parse either format; PBM is recognised by its P1 magic."""
    if text.lstrip().startswith("P1"):
        return _parse_pbm(text)
    return _parse_text_grid(text)


def save_array(a: ToroidalArray, path: Path, fmt: ArrayFormat = "text") -> None:
    """Write an array file."""
    path.write_text(write_array(a, fmt), encoding="utf-8")
    logger.info("Wrote array", path=str(path), side=a.side, format=fmt)


def load_array(path: Path) -> ToroidalArray:
    """Read an array file in either format."""
    return read_array(path.read_text(encoding="utf-8"))
