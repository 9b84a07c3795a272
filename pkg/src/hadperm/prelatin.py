"""Pre-Latin squares and the partial permutations they induce.

A pre-Latin square is an M x M array over the alphabet {1, ..., N} whose
entries are distinct within each row and within each column (distinctness
forces M <= N; Latin squares are the M = N case).  Each alphabet value x
induces the partial permutation sigma_x with sigma_x(j) = i exactly when the
(i, j) entry equals x; the square's semigroup is generated by sigma_1 through
sigma_N.  The alphabet size is carried explicitly: values that never occur in
the square contribute the empty map as a generator.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .errors import DuplicateInColumn, DuplicateInRow, FormatError, OutOfAlphabet
from .pperm import PartialPermutation, Semigroup, generate_semigroup

__all__ = [
    "PreLatinSquare",
    "validate",
    "sigma_of",
    "semigroup_of",
    "parse_pls",
    "format_pls",
    "read_pls",
    "write_pls",
]


class PreLatinSquare:
    """A validated M x M square over {1, ..., alphabet}."""

    __slots__ = ("size", "alphabet", "entries")

    def __init__(self, entries: Sequence[Sequence[int]], alphabet: int):
        rows = tuple(tuple(int(v) for v in row) for row in entries)
        m = len(rows)
        if m == 0:
            raise ValueError("square must be nonempty")
        if alphabet < 1:
            raise ValueError("alphabet size must be positive")
        # report content problems (alphabet, repeats) before the shape
        # requirement, so a malformed row is named rather than rejected
        for i, row in enumerate(rows, start=1):
            for j, v in enumerate(row, start=1):
                if not 1 <= v <= alphabet:
                    raise OutOfAlphabet(i, j)
            if len(set(row)) != len(row):
                raise DuplicateInRow(i)
        if any(len(row) != m for row in rows):
            raise ValueError("entries must form a square array")
        for j in range(m):
            column = [rows[i][j] for i in range(m)]
            if len(set(column)) != m:
                raise DuplicateInColumn(j + 1)
        self.size = m
        self.alphabet = alphabet
        self.entries = rows

    def entry(self, i: int, j: int) -> int:
        """Entry at 1-based position (i, j)."""
        if not (1 <= i <= self.size and 1 <= j <= self.size):
            raise ValueError(f"index ({i},{j}) out of range")
        return self.entries[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreLatinSquare):
            return NotImplemented
        return self.alphabet == other.alphabet and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.alphabet, self.entries))

    def __repr__(self) -> str:
        return f"PreLatinSquare(size={self.size}, alphabet={self.alphabet})"


def validate(entries: Sequence[Sequence[int]], alphabet: int) -> PreLatinSquare:
    """Validate an integer array as a pre-Latin square over {1, ..., alphabet}.

    Raises :class:`OutOfAlphabet`, :class:`DuplicateInRow` or
    :class:`DuplicateInColumn` naming the offending position.
    """
    return PreLatinSquare(entries, alphabet)


def sigma_of(square: PreLatinSquare, x: int) -> PartialPermutation:
    """The partial permutation induced by alphabet value x:
    sigma_x(j) = i exactly when the (i, j) entry equals x.

    Well-defined by column distinctness; a value absent from the square gives
    the empty map.
    """
    if not 1 <= x <= square.alphabet:
        raise ValueError(f"value {x} outside alphabet 1..{square.alphabet}")
    m = square.size
    img = [0] * m
    for j in range(m):
        for i in range(m):
            if square.entries[i][j] == x:
                img[j] = i + 1
                break
    return PartialPermutation(img)


def semigroup_of(square: PreLatinSquare) -> Semigroup:
    """Closure of {sigma_x : 1 <= x <= alphabet} under composition."""
    return generate_semigroup(
        sigma_of(square, x) for x in range(1, square.alphabet + 1)
    )


# --------------------------------------------------------------------------
# .pls text format:
#
#   pls v1
#   M N
#   <M rows of M integers>

def parse_pls(text: str) -> PreLatinSquare:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "pls v1":
        raise FormatError("expected 'pls v1' header")
    if len(lines) < 2:
        raise FormatError("missing dimension line")
    dims = lines[1].split()
    if len(dims) != 2:
        raise FormatError(f"expected 'M N', got {lines[1]!r}")
    try:
        m, alphabet = int(dims[0]), int(dims[1])
    except ValueError as exc:
        raise FormatError(f"bad dimensions {lines[1]!r}") from exc
    body = lines[2:]
    if len(body) != m:
        raise FormatError(f"expected {m} rows, found {len(body)}")
    entries = []
    for line in body:
        tokens = line.split()
        if len(tokens) != m:
            raise FormatError(f"expected {m} entries per row, got {len(tokens)}")
        try:
            entries.append([int(tok) for tok in tokens])
        except ValueError as exc:
            raise FormatError(f"bad entry in {line!r}") from exc
    return PreLatinSquare(entries, alphabet)


def format_pls(square: PreLatinSquare) -> str:
    lines = ["pls v1", f"{square.size} {square.alphabet}"]
    for row in square.entries:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def read_pls(path) -> PreLatinSquare:
    return parse_pls(Path(path).read_text(encoding="utf-8"))


def write_pls(path, square: PreLatinSquare) -> None:
    Path(path).write_text(format_pls(square), encoding="utf-8")
