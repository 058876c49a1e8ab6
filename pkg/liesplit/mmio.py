"""
Matrix Market I/O

Reads `matrix coordinate real {general,symmetric,skew-symmetric}` and
`matrix array real general` into dense arrays; writes `array real general`
with 17 significant digits so a write/read round trip is bit-exact.
"""

import logging
from pathlib import Path
from typing import Iterator, List, Tuple, Union

import numpy as np

from .errors import ParseError, UnsupportedField
from .matkit import as_dense

logger = logging.getLogger(__name__)

BANNER = "%%MatrixMarket"
SUPPORTED_SYMMETRY = ("general", "symmetric", "skew-symmetric")


def _data_lines(lines: List[str], start: int) -> Iterator[Tuple[int, str]]:
    """(1-based line number, stripped text) for non-blank, non-comment lines."""
    for index in range(start, len(lines)):
        text = lines[index].strip()
        if text and not text.startswith("%"):
            yield index + 1, text


def _parse_header(line: str) -> Tuple[str, str]:
    tokens = line.split()
    if len(tokens) != 5 or tokens[0] != BANNER:
        raise ParseError(1, f"expected '{BANNER} matrix <format> <field> <symmetry>'")
    obj, fmt, fld, symmetry = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise UnsupportedField(f"object '{obj}' is not supported, only 'matrix'")
    if fmt not in ("coordinate", "array"):
        raise ParseError(1, f"unknown format '{fmt}'")
    if fld != "real":
        raise UnsupportedField(f"field '{fld}' is not supported, only 'real'")
    if symmetry not in SUPPORTED_SYMMETRY:
        raise UnsupportedField(f"symmetry '{symmetry}' is not supported")
    if fmt == "array" and symmetry != "general":
        raise UnsupportedField(f"array format supports only 'general', got '{symmetry}'")
    return fmt, symmetry


def _ints(text: str, count: int, lineno: int, what: str) -> List[int]:
    tokens = text.split()
    if len(tokens) != count:
        raise ParseError(lineno, f"{what} needs {count} integers, got '{text}'")
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"{what} must be integers, got '{text}'") from None


def _real(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"'{token}' is not a real number") from None
    if not np.isfinite(value):
        raise ParseError(lineno, f"non-finite value '{token}'")
    return value


def parse_matrix_market(text: str) -> np.ndarray:
    """Parse Matrix Market text into a dense float64 array."""
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty input")
    fmt, symmetry = _parse_header(lines[0])
    entries = _data_lines(lines, 1)

    try:
        size_line, size_text = next(entries)
    except StopIteration:
        raise ParseError(len(lines), "missing size line") from None

    if fmt == "array":
        rows, cols = _ints(size_text, 2, size_line, "array size line")
        if rows < 1 or cols < 1:
            raise ParseError(size_line, "dimensions must be positive")
        values = []
        for lineno, text in entries:
            tokens = text.split()
            if len(tokens) != 1:
                raise ParseError(lineno, f"array entry must be one value, got '{text}'")
            values.append(_real(tokens[0], lineno))
        if len(values) != rows * cols:
            raise ParseError(len(lines), f"expected {rows * cols} values, found {len(values)}")
        return np.array(values, dtype=float).reshape((rows, cols), order="F")

    rows, cols, nnz = _ints(size_text, 3, size_line, "coordinate size line")
    if rows < 1 or cols < 1 or nnz < 0:
        raise ParseError(size_line, "dimensions must be positive and nnz non-negative")
    if symmetry != "general" and rows != cols:
        raise ParseError(size_line, f"{symmetry} matrix must be square")

    A = np.zeros((rows, cols))
    seen = 0
    for lineno, text in entries:
        tokens = text.split()
        if len(tokens) != 3:
            raise ParseError(lineno, f"coordinate entry needs 'i j value', got '{text}'")
        i, j = _ints(" ".join(tokens[:2]), 2, lineno, "entry indices")
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(lineno, f"index ({i}, {j}) outside {rows}x{cols}")
        value = _real(tokens[2], lineno)
        i, j = i - 1, j - 1
        if symmetry != "general" and j > i:
            raise ParseError(lineno, f"{symmetry} storage lists the lower triangle only")
        if symmetry == "skew-symmetric" and i == j:
            raise ParseError(lineno, "skew-symmetric storage has no diagonal entries")
        A[i, j] += value
        if i != j and symmetry == "symmetric":
            A[j, i] += value
        elif i != j and symmetry == "skew-symmetric":
            A[j, i] -= value
        seen += 1
    if seen != nnz:
        raise ParseError(len(lines), f"expected {nnz} entries, found {seen}")
    return A


def read_matrix_market(path: Union[str, Path]) -> np.ndarray:
    """Read a Matrix Market file into a dense array."""
    path = Path(path)
    with open(path, "r") as f:
        A = parse_matrix_market(f.read())
    logger.debug(f"Read {A.shape[0]}x{A.shape[1]} matrix from {path}")
    return A


def format_matrix_market(A, comment: str = "") -> str:
    """Render A as `array real general`, column-major, 17 significant digits."""
    A = as_dense(np.atleast_2d(np.asarray(A, dtype=float)))
    rows, cols = A.shape
    out = [f"{BANNER} matrix array real general"]
    if comment:
        out.extend(f"% {line}" for line in comment.splitlines())
    out.append(f"{rows} {cols}")
    out.extend(f"{value:.17g}" for value in A.ravel(order="F"))
    return "\n".join(out) + "\n"


def write_matrix_market(path: Union[str, Path], A, comment: str = "") -> Path:
    """Write A to `path`; a 1-D input is written as a column vector."""
    arr = np.asarray(A, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    path = Path(path)
    with open(path, "w") as f:
        f.write(format_matrix_market(arr, comment))
    return path
