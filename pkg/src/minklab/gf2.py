"""Dense linear algebra over the two-element field.

Rows are bit-packed into Python integers (bit j of ``bits[i]`` is entry
(i, j)), so row operations are single XORs regardless of width.  Rank and
nullspace dominate the cohomology pipeline, which is why the packed layout
is used throughout instead of numpy arrays.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    NonSquareError,
    NotAlternatingError,
    OddDimensionError,
    ParseError,
)


@dataclass(frozen=True)
class BitMatrix:
    """Matrix over GF(2) with bit-packed rows."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.bits) != self.rows:
            raise ValueError("bits length must equal row count")
        mask = (1 << self.cols) - 1
        for r in self.bits:
            if r < 0 or r & ~mask:
                raise ValueError("row bits exceed column count")

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Sequence[int]) -> "BitMatrix":
        """Build from a row-major 0/1 sequence of length rows*cols."""
        if len(entries) != rows * cols:
            raise ValueError("entries length must equal rows*cols")
        bits = []
        for i in range(rows):
            word = 0
            for j in range(cols):
                e = entries[i * cols + j]
                if e not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                word |= e << j
            bits.append(word)
        return cls(rows, cols, tuple(bits))

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]]) -> "BitMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        flat = []
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged rows")
            flat.extend(row)
        return cls.from_entries(rows, cols, flat)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    # -- element access ---------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError("matrix index out of range")
        return (self.bits[i] >> j) & 1

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(
            (self.bits[i] >> j) & 1 for i in range(self.rows) for j in range(self.cols)
        )

    def row(self, i: int) -> tuple[int, ...]:
        return tuple((self.bits[i] >> j) & 1 for j in range(self.cols))

    def column_mask(self, j: int) -> int:
        word = 0
        for i in range(self.rows):
            word |= ((self.bits[i] >> j) & 1) << i
        return word

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows, tuple(self.column_mask(j) for j in range(self.cols)))

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        cols_of_other = [other.column_mask(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            word = 0
            r = self.bits[i]
            for j, cmask in enumerate(cols_of_other):
                word |= ((r & cmask).bit_count() & 1) << j
            out.append(word)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def matvec_mask(self, vec_mask: int) -> int:
        """Apply to a column vector given as a bitmask; returns a bitmask."""
        word = 0
        for i in range(self.rows):
            word |= ((self.bits[i] & vec_mask).bit_count() & 1) << i
        return word

    def is_symmetric(self) -> bool:
        return self.bits == self.transpose().bits

    def is_zero_diagonal(self) -> bool:
        return all((self.bits[i] >> i) & 1 == 0 for i in range(min(self.rows, self.cols)))

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for i in range(self.rows):
            lines.append("".join(str((self.bits[i] >> j) & 1) for j in range(self.cols)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = text.splitlines()
        if not lines:
            raise ParseError("empty matrix file", line=1)
        header = lines[0].split()
        if len(header) != 2:
            raise ParseError("expected 'rows cols'", line=1)
        try:
            rows, cols = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError("non-integer dimensions", line=1) from None
        if rows < 0 or cols < 0:
            raise ParseError("negative dimensions", line=1)
        body = [ln.strip() for ln in lines[1:] if ln.strip()]
        if len(body) != rows:
            raise ParseError(f"expected {rows} rows, found {len(body)}", line=len(lines))
        bits = []
        for k, ln in enumerate(body):
            if len(ln) != cols or any(c not in "01" for c in ln):
                raise ParseError(f"expected {cols} characters of 0/1", line=k + 2)
            bits.append(int(ln[::-1], 2) if ln else 0)
        return cls(rows, cols, tuple(bits))


def _echelon(bits: list[int], cols: int) -> tuple[list[int], list[int]]:
    """In-place forward elimination; returns (reduced rows, pivot columns)."""
    pivots = []
    r = 0
    for c in range(cols):
        sel = None
        for i in range(r, len(bits)):
            if (bits[i] >> c) & 1:
                sel = i
                break
        if sel is None:
            continue
        bits[r], bits[sel] = bits[sel], bits[r]
        for i in range(len(bits)):
            if i != r and (bits[i] >> c) & 1:
                bits[i] ^= bits[r]
        pivots.append(c)
        r += 1
        if r == len(bits):
            break
    return bits, pivots


def rank(m: BitMatrix) -> int:
    """GF(2) row rank."""
    _, pivots = _echelon(list(m.bits), m.cols)
    return len(pivots)


def nullspace(m: BitMatrix) -> list[tuple[int, ...]]:
    """Basis of the right kernel, one 0/1 tuple of length cols per vector."""
    reduced, pivots = _echelon(list(m.bits), m.cols)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [0] * m.cols
        vec[f] = 1
        # Reduced form: each pivot row has a single pivot column plus frees.
        for r, c in enumerate(pivots):
            if (reduced[r] >> f) & 1:
                vec[c] = 1
        basis.append(tuple(vec))
    return basis


def det2(m: BitMatrix) -> int:
    """Determinant mod 2: 1 iff the square matrix is invertible over GF(2)."""
    if m.rows != m.cols:
        raise NonSquareError(f"{m.rows}x{m.cols} matrix is not square")
    return 1 if rank(m) == m.rows else 0


def pfaffian2(m: BitMatrix) -> int:
    """Pfaffian mod 2 of an alternating matrix (= det2 in characteristic 2).

    Counts perfect matchings {i, j} with m[i, j] = 1 modulo 2.  Over GF(2)
    the determinant is the square of the Pfaffian and squaring is the
    identity, so det2 is used directly; enumeration survives only as a
    test oracle.
    """
    if m.rows != m.cols:
        raise NonSquareError(f"{m.rows}x{m.cols} matrix is not square")
    if m.rows % 2 != 0:
        raise OddDimensionError(f"dimension {m.rows} is odd")
    if not m.is_zero_diagonal() or not m.is_symmetric():
        raise NotAlternatingError("matrix must be symmetric with zero diagonal")
    return det2(m)


def random_invertible(b: int, seed: int) -> BitMatrix:
    """Seeded random element of GL(b, GF(2)) by rejection sampling."""
    if b < 1:
        raise ValueError("dimension must be >= 1")
    rng = random.Random(seed)
    mask = (1 << b) - 1
    while True:
        bits = tuple(rng.getrandbits(b) & mask for _ in range(b))
        m = BitMatrix(b, b, bits)
        if rank(m) == b:
            return m


def rank_of_vectors(vectors: Iterable[Sequence[int]], width: int) -> int:
    """GF(2) rank of 0/1 indicator vectors of a common width."""
    rows = []
    for v in vectors:
        word = 0
        for j, e in enumerate(v):
            if e:
                word |= 1 << j
        rows.append(word)
    if not rows:
        return 0
    return rank(BitMatrix(len(rows), width, tuple(rows)))
