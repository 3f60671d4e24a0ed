"""Order-n multilinear forms over GF(2) and their explicit invariants.

Index tuples follow the 1-based convention (i_1, ..., i_n) with each
index in 1..dim; storage is row-major with the last index fastest.
Supported closed-form invariants: the bilinear determinant mod 2 (any
dim), its partition expansion for symmetric forms, the four-term
order-3 dim-2 expression, and arbitrary balanced term-set invariants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import gf2
from .errors import (
    DimensionMismatchError,
    FormatMismatchError,
    IndexOutOfRangeError,
    NotSymmetricError,
    ParseError,
    SingularBasisChangeError,
    UnbalancedInvariantError,
    UnsupportedFormatError,
    WrongFormatError,
    WrongOrderError,
)

IndexTuple = tuple[int, ...]
Term = tuple[IndexTuple, ...]


@dataclass(frozen=True)
class Gf2Tensor:
    """Dense order-n form on a dim-b space, entries in {0, 1}."""

    order: int
    dim: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1 or self.dim < 1:
            raise ValueError("order and dim must be >= 1")
        if len(self.entries) != self.dim**self.order:
            raise ValueError("entries length must equal dim**order")
        if any(e not in (0, 1) for e in self.entries):
            raise ValueError("entries must be 0 or 1")

    @classmethod
    def zero(cls, order: int, dim: int) -> "Gf2Tensor":
        return cls(order, dim, (0,) * dim**order)

    @classmethod
    def from_map(cls, order: int, dim: int, ones: Iterable[IndexTuple]) -> "Gf2Tensor":
        """Tensor with entry 1 exactly at the given 1-based index tuples."""
        entries = [0] * dim**order
        for idx in ones:
            entries[_offset(order, dim, idx)] = 1
        return cls(order, dim, tuple(entries))

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]]) -> "Gf2Tensor":
        """Bilinear form from a nested list."""
        b = len(rows)
        flat = []
        for row in rows:
            if len(row) != b:
                raise ValueError("matrix must be square")
            flat.extend(row)
        return cls(2, b, tuple(flat))

    def to_matrix(self) -> list[list[int]]:
        if self.order != 2:
            raise WrongOrderError("only bilinear tensors have a matrix form")
        b = self.dim
        return [list(self.entries[i * b : (i + 1) * b]) for i in range(b)]

    def to_text(self) -> str:
        return f"{self.order} {self.dim}\n" + "".join(map(str, self.entries)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Gf2Tensor":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty tensor file", line=1)
        header = lines[0].split()
        if len(header) != 2:
            raise ParseError("expected 'order dim'", line=1)
        try:
            order, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError("non-integer header", line=1) from None
        if order < 1 or dim < 1:
            raise ParseError("order and dim must be >= 1", line=1)
        if len(lines) < 2:
            raise ParseError("missing entry line", line=2)
        payload = "".join(lines[1:])
        if len(payload) != dim**order or any(c not in "01" for c in payload):
            raise ParseError(
                f"expected {dim ** order} characters of 0/1", line=2
            )
        return cls(order, dim, tuple(int(c) for c in payload))


def _offset(order: int, dim: int, idx: IndexTuple) -> int:
    if len(idx) != order:
        raise IndexOutOfRangeError(f"expected {order} indices, got {len(idx)}")
    off = 0
    for i in idx:
        if not 1 <= i <= dim:
            raise IndexOutOfRangeError(f"index {i} outside 1..{dim}")
        off = off * dim + (i - 1)
    return off


def entry(tensor: Gf2Tensor, idx: IndexTuple) -> int:
    """Coefficient F(e_{i_1}, ..., e_{i_n}) at a 1-based index tuple."""
    return tensor.entries[_offset(tensor.order, tensor.dim, idx)]


def all_indices(tensor: Gf2Tensor) -> Iterable[IndexTuple]:
    return itertools.product(range(1, tensor.dim + 1), repeat=tensor.order)


def change_basis(tensor: Gf2Tensor, a: gf2.BitMatrix) -> Gf2Tensor:
    """Same-slot basis change: F'(e_i1, ..., e_in) = F(A e_i1, ..., A e_in).

    Column i of A lists the image of e_i; the value expands by full
    multilinearity over GF(2) (no signs in characteristic 2).
    """
    if a.rows != a.cols or a.rows != tensor.dim:
        raise DimensionMismatchError(
            f"basis change must be {tensor.dim}x{tensor.dim}, got {a.rows}x{a.cols}"
        )
    if gf2.det2(a) == 0:
        raise SingularBasisChangeError("basis change matrix is singular")
    b, n = tensor.dim, tensor.order
    images = [
        [j + 1 for j in range(b) if a[j, i]] for i in range(b)
    ]  # images[i] = support of A e_{i+1}
    out = []
    for idx in itertools.product(range(b), repeat=n):
        acc = 0
        for js in itertools.product(*(images[i] for i in idx)):
            acc ^= entry(tensor, js)
        out.append(acc)
    return Gf2Tensor(n, b, tuple(out))


def is_symmetric(tensor: Gf2Tensor) -> bool:
    """True iff entries are invariant under every permutation of indices."""
    return all(
        entry(tensor, idx) == entry(tensor, tuple(sorted(idx)))
        for idx in all_indices(tensor)
    )


def is_alternating_bilinear(tensor: Gf2Tensor) -> bool:
    """Symmetric with zero diagonal (the GF(2) meaning of alternating)."""
    if tensor.order != 2:
        raise WrongOrderError(f"expected order 2, got {tensor.order}")
    if not is_symmetric(tensor):
        return False
    return all(entry(tensor, (i, i)) == 0 for i in range(1, tensor.dim + 1))


def _coefficient_matrix(tensor: Gf2Tensor) -> gf2.BitMatrix:
    return gf2.BitMatrix.from_entries(tensor.dim, tensor.dim, tensor.entries)


def det2_bilinear(tensor: Gf2Tensor) -> int:
    """Determinant mod 2 of the coefficient matrix of a bilinear form."""
    if tensor.order != 2:
        raise WrongOrderError(f"expected order 2, got {tensor.order}")
    return gf2.det2(_coefficient_matrix(tensor))


def _partitions_1_2(items: tuple[int, ...]) -> Iterable[tuple[tuple[int, ...], ...]]:
    """Partitions of items into singletons and pairs."""
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for sub in _partitions_1_2(rest):
        yield ((head,),) + sub
    for k in range(len(rest)):
        pair = (head, rest[k])
        remaining = rest[:k] + rest[k + 1 :]
        for sub in _partitions_1_2(remaining):
            yield (pair,) + sub


def det2_symmetric_partition(tensor: Gf2Tensor) -> int:
    """Partition-sum evaluation of det mod 2 for symmetric bilinear forms.

    Sums, over all partitions of {1..b} into one- or two-element blocks,
    the product of F_ii over singletons {i} and F_ij over pairs {i, j}.
    """
    if tensor.order != 2:
        raise WrongOrderError(f"expected order 2, got {tensor.order}")
    if not is_symmetric(tensor):
        raise NotSymmetricError("partition formula requires a symmetric form")
    total = 0
    for partition in _partitions_1_2(tuple(range(1, tensor.dim + 1))):
        prod = 1
        for block in partition:
            i = block[0]
            j = block[-1]
            prod &= entry(tensor, (i, j))
            if not prod:
                break
        total ^= prod
    return total


def cayley_det2(tensor: Gf2Tensor) -> int:
    """Four-term closed form for order 3, dim 2."""
    if (tensor.order, tensor.dim) != (3, 2):
        raise WrongFormatError(
            f"closed form needs (order, dim) = (3, 2), got ({tensor.order}, {tensor.dim})"
        )
    e = lambda i, j, k: entry(tensor, (i, j, k))
    return (
        e(1, 1, 1) & e(2, 2, 2)
        ^ e(1, 2, 2) & e(2, 1, 1)
        ^ e(2, 1, 2) & e(1, 2, 1)
        ^ e(2, 2, 1) & e(1, 1, 2)
    )


@dataclass(frozen=True)
class BalancedInvariant:
    """Sum-of-products invariant whose terms use every index m times.

    Each term is a multiset of q index tuples of length order; across a
    term every index in 1..dim occurs exactly m times, so q*order = m*dim.
    Terms are stored canonically (tuples sorted within a term, terms
    sorted) and identical terms cancel in pairs at construction.
    """

    order: int
    dim: int
    q: int
    m: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        if self.q < 1 or self.m < 1:
            raise UnbalancedInvariantError("q and m must be positive")
        if self.q * self.order != self.m * self.dim:
            raise UnbalancedInvariantError(
                f"q*order = {self.q * self.order} differs from m*dim = {self.m * self.dim}"
            )
        for term in self.terms:
            if len(term) != self.q:
                raise UnbalancedInvariantError("every term needs exactly q tuples")
            counts = {i: 0 for i in range(1, self.dim + 1)}
            for tup in term:
                if len(tup) != self.order:
                    raise UnbalancedInvariantError("tuple length must equal order")
                for i in tup:
                    if i not in counts:
                        raise UnbalancedInvariantError(f"index {i} outside 1..{self.dim}")
                    counts[i] += 1
            if any(c != self.m for c in counts.values()):
                raise UnbalancedInvariantError(
                    "each index must appear exactly m times per term"
                )

    @classmethod
    def from_terms(
        cls, order: int, dim: int, q: int, m: int, terms: Iterable[Term]
    ) -> "BalancedInvariant":
        """Canonicalize and cancel duplicate terms mod 2."""
        seen: set[Term] = set()
        for term in terms:
            canon = tuple(sorted(tuple(tup) for tup in term))
            seen ^= {canon}
        return cls(order, dim, q, m, tuple(sorted(seen)))


def permutation_sum_invariant(dim: int) -> BalancedInvariant:
    """The bilinear determinant mod 2 as an explicit term set."""
    terms = [
        tuple((k, sigma[k - 1]) for k in range(1, dim + 1))
        for sigma in itertools.permutations(range(1, dim + 1))
    ]
    return BalancedInvariant.from_terms(2, dim, q=dim, m=2, terms=terms)


def cayley_invariant() -> BalancedInvariant:
    """The order-3 dim-2 four-term expression as a term set."""
    terms = [
        ((1, 1, 1), (2, 2, 2)),
        ((1, 2, 2), (2, 1, 1)),
        ((2, 1, 2), (1, 2, 1)),
        ((2, 2, 1), (1, 1, 2)),
    ]
    return BalancedInvariant.from_terms(3, 2, q=2, m=3, terms=terms)


def _check_format(inv: BalancedInvariant, tensor: Gf2Tensor) -> None:
    if (inv.order, inv.dim) != (tensor.order, tensor.dim):
        raise FormatMismatchError(
            f"invariant format ({inv.order}, {inv.dim}) differs from "
            f"tensor format ({tensor.order}, {tensor.dim})"
        )


def _term_product(tensor: Gf2Tensor, term: Term) -> int:
    prod = 1
    for tup in term:
        prod &= entry(tensor, tup)
        if not prod:
            break
    return prod


def eval_balanced(inv: BalancedInvariant, tensor: Gf2Tensor) -> int:
    """Sum over terms of the product of tensor entries, mod 2."""
    _check_format(inv, tensor)
    total = 0
    for term in inv.terms:
        total ^= _term_product(tensor, term)
    return total


def witness_term(inv: BalancedInvariant, tensor: Gf2Tensor) -> Optional[Term]:
    """First term (in canonical order) whose product is 1, if any.

    When the invariant evaluates to 1 at least one summand is nonzero, so
    a witness always exists in that case.
    """
    _check_format(inv, tensor)
    for term in inv.terms:
        if _term_product(tensor, term):
            return term
    return None


def det2_dispatch(tensor: Gf2Tensor) -> int:
    """Basis-independent determinant mod 2 in the supported formats.

    Bilinear forms use the coefficient-matrix determinant (through the
    Pfaffian route when alternating, same value); (order, dim) = (3, 2)
    uses the four-term closed form.  Anything else is refused.
    """
    if tensor.order == 2:
        if is_alternating_bilinear(tensor):
            return gf2.pfaffian2(_coefficient_matrix(tensor))
        return det2_bilinear(tensor)
    if (tensor.order, tensor.dim) == (3, 2):
        return cayley_det2(tensor)
    raise UnsupportedFormatError(
        f"no supported formula for (order, dim) = ({tensor.order}, {tensor.dim})"
    )


def dispatch_format_name(tensor: Gf2Tensor) -> str:
    if tensor.order == 2:
        if is_alternating_bilinear(tensor):
            return "pfaffian_mod2"
        return "determinant_mod2"
    if (tensor.order, tensor.dim) == (3, 2):
        return "cayley_four_term_mod2"
    raise UnsupportedFormatError(
        f"no supported formula for (order, dim) = ({tensor.order}, {tensor.dim})"
    )


# -- invariant interchange format ------------------------------------------


def invariant_to_text(inv: BalancedInvariant) -> str:
    """Serialize: header 'order dim q m', then terms as q lines of indices,
    blank line between terms."""
    blocks = [f"{inv.order} {inv.dim} {inv.q} {inv.m}"]
    for term in inv.terms:
        blocks.append("\n".join(" ".join(map(str, tup)) for tup in term))
    return "\n\n".join(blocks) + "\n"


def invariant_from_text(text: str) -> BalancedInvariant:
    lines = text.splitlines()
    header_idx = None
    for k, ln in enumerate(lines):
        if ln.strip():
            header_idx = k
            break
    if header_idx is None:
        raise ParseError("empty invariant file", line=1)
    header = lines[header_idx].split()
    if len(header) != 4:
        raise ParseError("expected 'order dim q m'", line=header_idx + 1)
    try:
        order, dim, q, m = (int(tok) for tok in header)
    except ValueError:
        raise ParseError("non-integer header", line=header_idx + 1) from None
    terms: list[Term] = []
    current: list[IndexTuple] = []
    for k in range(header_idx + 1, len(lines)):
        ln = lines[k].strip()
        if not ln:
            if current:
                terms.append(tuple(current))
                current = []
            continue
        try:
            tup = tuple(int(tok) for tok in ln.split())
        except ValueError:
            raise ParseError("non-integer index", line=k + 1) from None
        if len(tup) != order:
            raise ParseError(f"expected {order} indices per line", line=k + 1)
        current.append(tup)
    if current:
        terms.append(tuple(current))
    return BalancedInvariant.from_terms(order, dim, q, m, terms)
