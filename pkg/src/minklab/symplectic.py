"""Pairing permutations for nondegenerate alternating forms.

Given an alternating form and a basis, find a permutation arranging the
basis into consecutive pairs with nonzero pairing values: a perfect
matching of the support graph (edge {i, j} iff the (i, j) entry is
nonzero).  Forms live over GF(2) or over the exact rationals; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import gf2
from .errors import (
    DimensionTooLargeError,
    NoPairingError,
    NotAlternatingError,
    OddDimensionError,
    ParseError,
)

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class AlternatingForm:
    """Square matrix with zero diagonal, skew-symmetric over its field."""

    entries: tuple[tuple[Scalar, ...], ...]
    field: str  # "gf2" | "rational"

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("matrix must be square")
        if self.field not in ("gf2", "rational"):
            raise ValueError("field must be 'gf2' or 'rational'")
        for i in range(n):
            if self.entries[i][i] != 0:
                raise NotAlternatingError("diagonal must vanish")
            for j in range(n):
                a, b = self.entries[i][j], self.entries[j][i]
                if self.field == "gf2":
                    if a not in (0, 1):
                        raise ValueError("GF(2) entries must be 0 or 1")
                    if a != b:
                        raise NotAlternatingError("GF(2) form must be symmetric")
                elif a != -b:
                    raise NotAlternatingError("rational form must be skew-symmetric")

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def from_gf2_matrix(cls, m: gf2.BitMatrix) -> "AlternatingForm":
        rows = tuple(tuple(m.row(i)) for i in range(m.rows))
        return cls(rows, "gf2")

    @classmethod
    def from_rational(cls, rows: Sequence[Sequence[Scalar]]) -> "AlternatingForm":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows), "rational")


@dataclass(frozen=True)
class PairingPermutation:
    """One-line permutation sigma with pair k = (sigma[2k-2], sigma[2k-1]);
    pair_values[k] is the (always nonzero) pairing of that pair."""

    sigma: tuple[int, ...]
    pair_values: tuple[Scalar, ...]


def standard_symplectic_form(half_dim: int, field: str = "gf2") -> AlternatingForm:
    """Block-diagonal form pairing (e_1, e_2), (e_3, e_4), ..."""
    n = 2 * half_dim
    one = 1 if field == "gf2" else Fraction(1)
    rows = [[0 if field == "gf2" else Fraction(0)] * n for _ in range(n)]
    for k in range(half_dim):
        i, j = 2 * k, 2 * k + 1
        rows[i][j] = one
        rows[j][i] = one if field == "gf2" else -one
    return AlternatingForm(tuple(tuple(r) for r in rows), field)


def congruence_transform(form: AlternatingForm, p: Sequence[Sequence[Scalar]]) -> AlternatingForm:
    """P^T M P over the form's field; P must be square of matching size."""
    n = form.dim
    if len(p) != n or any(len(row) != n for row in p):
        raise ValueError("transform must be square of the form's dimension")
    if form.field == "gf2":
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = 0
                for k in range(n):
                    if p[k][i]:
                        for l in range(n):
                            acc ^= (p[k][i] & form.entries[k][l] & p[l][j]) & 1
                out[i][j] = acc
        return AlternatingForm(tuple(tuple(r) for r in out), "gf2")
    pf = [[Fraction(x) for x in row] for row in p]
    out_r = [
        [
            sum(
                pf[k][i] * Fraction(form.entries[k][l]) * pf[l][j]
                for k in range(n)
                for l in range(n)
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    return AlternatingForm(tuple(tuple(r) for r in out_r), "rational")


def _rational_rank(rows: Sequence[Sequence[Scalar]]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    n_rows, n_cols = len(m), len(m[0]) if m else 0
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = Fraction(1) / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(n_rows):
            if r != rank and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def is_nondegenerate(form: AlternatingForm) -> bool:
    """True iff the matrix is invertible over its field."""
    n = form.dim
    if n == 0:
        return True
    if form.field == "gf2":
        m = gf2.BitMatrix.from_rows([list(row) for row in form.entries])
        return gf2.rank(m) == n
    return _rational_rank(form.entries) == n


def _support(form: AlternatingForm) -> list[set[int]]:
    n = form.dim
    return [
        {j for j in range(n) if j != i and form.entries[i][j] != 0} for i in range(n)
    ]


def _match(support: list[set[int]], unmatched: list[int]) -> Optional[list[tuple[int, int]]]:
    """Backtracking perfect matching, smallest available index first."""
    if not unmatched:
        return []
    first = unmatched[0]
    rest = unmatched[1:]
    for partner in rest:  # rest is sorted ascending
        if partner in support[first]:
            sub = _match(support, [v for v in rest if v != partner])
            if sub is not None:
                return [(first, partner)] + sub
    return None


def gutt_pairing(form: AlternatingForm) -> PairingPermutation:
    """Permutation pairing consecutive basis elements with nonzero values.

    Nondegenerate forms always admit one; if no perfect matching exists
    the form is necessarily degenerate and NoPairingError reports that
    certificate.  Pair order is fixed by the smallest-available-index
    rule, so results are reproducible.
    """
    n = form.dim
    if n % 2 != 0:
        raise OddDimensionError(f"dimension {n} is odd")
    matching = _match(_support(form), list(range(n)))
    if matching is None:
        raise NoPairingError("support graph has no perfect matching; form is degenerate")
    sigma = []
    values = []
    for i, j in matching:
        sigma.extend([i + 1, j + 1])
        values.append(form.entries[i][j])
    return PairingPermutation(tuple(sigma), tuple(values))


def verify_pairing(form: AlternatingForm, pairing: PairingPermutation) -> bool:
    """Re-check a pairing independently of the search."""
    n = form.dim
    if sorted(pairing.sigma) != list(range(1, n + 1)):
        return False
    for k in range(n // 2):
        i = pairing.sigma[2 * k] - 1
        j = pairing.sigma[2 * k + 1] - 1
        value = form.entries[i][j]
        if value == 0 or value != pairing.pair_values[k]:
            return False
    return True


def matching_count(form: AlternatingForm) -> int:
    """Number of perfect matchings of the support graph (dim <= 10)."""
    n = form.dim
    if n > 10:
        raise DimensionTooLargeError(f"dimension {n} exceeds the enumeration limit 10")
    if n % 2 != 0:
        return 0
    support = _support(form)

    def count(unmatched: tuple[int, ...]) -> int:
        if not unmatched:
            return 1
        first = unmatched[0]
        total = 0
        for idx in range(1, len(unmatched)):
            partner = unmatched[idx]
            if partner in support[first]:
                total += count(unmatched[1:idx] + unmatched[idx + 1 :])
        return total

    return count(tuple(range(n)))


# -- text format ----------------------------------------------------------------


def form_to_text(form: AlternatingForm) -> str:
    if form.field == "gf2":
        m = gf2.BitMatrix.from_rows([list(row) for row in form.entries])
        return m.to_text()
    lines = [f"{form.dim} {form.dim}"]
    for row in form.entries:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def form_from_text(text: str) -> AlternatingForm:
    """Parse either the GF(2) bit-matrix format or the rational format
    with space-separated p/q tokens."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ParseError("form file needs a header and matrix rows", line=1)
    rational = any(("/" in ln or " " in ln.strip()) for ln in lines[1:])
    if not rational:
        return AlternatingForm.from_gf2_matrix(gf2.BitMatrix.from_text(text))
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError("expected 'rows cols'", line=1)
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("non-integer dimensions", line=1) from None
    if rows != cols:
        raise ParseError("form matrix must be square", line=1)
    if len(lines) - 1 != rows:
        raise ParseError(f"expected {rows} matrix rows", line=len(lines))
    data = []
    for k, ln in enumerate(lines[1:]):
        toks = ln.split()
        if len(toks) != cols:
            raise ParseError(f"expected {cols} entries", line=k + 2)
        try:
            data.append([Fraction(tok) for tok in toks])
        except (ValueError, ZeroDivisionError):
            raise ParseError("bad rational token", line=k + 2) from None
    return AlternatingForm.from_rational(data)
