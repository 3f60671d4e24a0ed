"""Simplicial Z2 cohomology and cup-product forms on closed complexes.

The pipeline: build a complex from maximal simplices, extract a basis of
degree-1 cocycles modulo coboundaries, evaluate n-fold front/back-face
cup products against the sum of all top simplices, and assemble the
resulting symmetric tensor for the determinant-mod-2 hypothesis test.
Built-in generators cover the closed surfaces used by those checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import gf2, multilinear
from .errors import (
    ArityMismatchError,
    MalformedSimplexError,
    NotASurfaceError,
    NotClosedError,
    NotCocycleError,
    ParseError,
    TrivialCohomologyError,
)


@dataclass(frozen=True)
class Cochain1:
    """Degree-1 cochain: one bit per edge, edges in lexicographic order."""

    values: tuple[int, ...]

    def __post_init__(self):
        if any(v not in (0, 1) for v in self.values):
            raise ValueError("cochain values must be 0 or 1")


@dataclass(frozen=True)
class CupForm:
    """Cup-product tensor of a complex together with the basis used."""

    tensor: multilinear.Gf2Tensor
    basis: tuple[Cochain1, ...]
    provenance: str


class SimplicialComplex:
    """Finite simplicial complex described by its maximal simplices.

    Vertices are relabeled to 0..V-1 at construction; the full face
    lattice and boundary matrices over GF(2) are derived eagerly.
    """

    def __init__(self, maximal_simplices: Sequence[Sequence[int]]):
        cleaned = []
        for s in maximal_simplices:
            tup = tuple(s)
            if len(tup) == 0:
                raise MalformedSimplexError("empty simplex")
            if any(not isinstance(v, int) or v < 0 for v in tup):
                raise MalformedSimplexError(f"bad vertex labels in {tup}")
            if len(set(tup)) != len(tup):
                raise MalformedSimplexError(f"repeated vertex in {tup}")
            cleaned.append(tuple(sorted(tup)))
        if not cleaned:
            raise MalformedSimplexError("no maximal simplices given")

        labels = sorted({v for s in cleaned for v in s})
        relabel = {v: i for i, v in enumerate(labels)}
        relabeled = {tuple(relabel[v] for v in s) for s in cleaned}
        # Drop any listed simplex that is a face of another.
        maximal = [
            s
            for s in relabeled
            if not any(s != t and set(s) <= set(t) for t in relabeled)
        ]

        self.vertex_count = len(labels)
        self.maximal_simplices = tuple(sorted(maximal))
        self.dimension = max(len(s) for s in self.maximal_simplices) - 1

        faces: dict[int, set[tuple[int, ...]]] = {}
        for s in self.maximal_simplices:
            for k in range(1, len(s) + 1):
                faces.setdefault(k - 1, set()).update(itertools.combinations(s, k))
        self.faces = {d: tuple(sorted(fs)) for d, fs in faces.items()}
        self.face_index = {
            d: {f: i for i, f in enumerate(fs)} for d, fs in self.faces.items()
        }

    # -- derived structure -------------------------------------------------

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.faces.get(1, ())

    def boundary_matrix(self, d: int) -> gf2.BitMatrix:
        """Boundary from d-chains to (d-1)-chains over GF(2)."""
        lower = self.faces.get(d - 1, ())
        upper = self.faces.get(d, ())
        index = self.face_index.get(d - 1, {})
        bits = [0] * len(lower)
        for j, f in enumerate(upper):
            for sub in itertools.combinations(f, len(f) - 1):
                bits[index[sub]] |= 1 << j
        return gf2.BitMatrix(len(lower), len(upper), tuple(bits))

    def is_closed_pseudomanifold(self, n: int) -> bool:
        """Every (n-1)-face in exactly two n-faces, strongly connected,
        all maximal simplices of dimension n."""
        if any(len(s) != n + 1 for s in self.maximal_simplices):
            return False
        top = self.faces.get(n, ())
        if not top:
            return False
        ridge_count: dict[tuple[int, ...], list[int]] = {}
        for j, f in enumerate(top):
            for sub in itertools.combinations(f, n):
                ridge_count.setdefault(sub, []).append(j)
        if any(len(js) != 2 for js in ridge_count.values()):
            return False
        # Connectivity of the dual adjacency through shared ridges.
        adj: dict[int, set[int]] = {j: set() for j in range(len(top))}
        for js in ridge_count.values():
            a, b = js
            adj[a].add(b)
            adj[b].add(a)
        seen = {0}
        stack = [0]
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == len(top)

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.dimension} {self.vertex_count}"]
        for s in self.maximal_simplices:
            lines.append(" ".join(map(str, s)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SimplicialComplex":
        lines = text.splitlines()
        if not lines or not lines[0].strip():
            raise ParseError("empty complex file", line=1)
        header = lines[0].split()
        if len(header) != 2:
            raise ParseError("expected 'dim vertex_count'", line=1)
        try:
            dim, vcount = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError("non-integer header", line=1) from None
        simplices = []
        for k in range(1, len(lines)):
            ln = lines[k].strip()
            if not ln:
                continue
            try:
                tup = tuple(int(tok) for tok in ln.split())
            except ValueError:
                raise ParseError("non-integer vertex index", line=k + 1) from None
            if len(tup) > dim + 1:
                raise ParseError(
                    f"simplex has more than dim+1 = {dim + 1} vertices", line=k + 1
                )
            if any(v < 0 or v >= vcount for v in tup):
                raise ParseError("vertex index outside declared range", line=k + 1)
            simplices.append(tup)
        if not simplices:
            raise ParseError("no maximal simplices listed", line=len(lines))
        try:
            complex_ = cls(simplices)
        except MalformedSimplexError as exc:
            raise ParseError(str(exc), line=2) from exc
        return complex_


def build(maximal_simplices: Sequence[Sequence[int]]) -> SimplicialComplex:
    return SimplicialComplex(maximal_simplices)


# -- cohomology -------------------------------------------------------------


def betti1_z2(complex_: SimplicialComplex) -> int:
    """dim ker(delta^1) - dim im(delta^0) over GF(2)."""
    n_edges = len(complex_.edges)
    if n_edges == 0:
        return 0
    rank_d2 = gf2.rank(complex_.boundary_matrix(2)) if 2 in complex_.faces else 0
    rank_d1 = gf2.rank(complex_.boundary_matrix(1))
    return n_edges - rank_d2 - rank_d1


def _coboundary_generators(complex_: SimplicialComplex) -> list[int]:
    """Edge-indicator masks of delta^0 applied to vertex indicators."""
    masks = [0] * complex_.vertex_count
    for j, (u, v) in enumerate(complex_.edges):
        masks[u] |= 1 << j
        masks[v] |= 1 << j
    return masks


def cohomology_basis_1(complex_: SimplicialComplex) -> list[Cochain1]:
    """Cocycle representatives of a basis of degree-1 cohomology."""
    b = betti1_z2(complex_)
    if b == 0:
        raise TrivialCohomologyError("first cohomology is trivial")
    n_edges = len(complex_.edges)
    if 2 in complex_.faces:
        delta1 = complex_.boundary_matrix(2).transpose()
        kernel = gf2.nullspace(delta1)
    else:
        kernel = [tuple(1 if j == k else 0 for j in range(n_edges)) for k in range(n_edges)]

    stack = list(_coboundary_generators(complex_))
    base_rank = gf2.rank(gf2.BitMatrix(len(stack), n_edges, tuple(stack)))
    chosen: list[Cochain1] = []
    current = base_rank
    for vec in kernel:
        mask = 0
        for j, e in enumerate(vec):
            if e:
                mask |= 1 << j
        candidate = stack + [mask]
        r = gf2.rank(gf2.BitMatrix(len(candidate), n_edges, tuple(candidate)))
        if r > current:
            stack = candidate
            current = r
            chosen.append(Cochain1(tuple(vec)))
        if len(chosen) == b:
            break
    if len(chosen) != b:
        raise RuntimeError("kernel did not yield a full cohomology basis")
    return chosen


def is_cocycle(complex_: SimplicialComplex, cochain: Cochain1) -> bool:
    if len(cochain.values) != len(complex_.edges):
        return False
    index = complex_.face_index.get(1, {})
    for tri in complex_.faces.get(2, ()):
        acc = 0
        for sub in itertools.combinations(tri, 2):
            acc ^= cochain.values[index[sub]]
        if acc:
            return False
    return True


def _cup_eval_unchecked(
    complex_: SimplicialComplex, cochains: Sequence[Cochain1], n: int
) -> int:
    index = complex_.face_index[1]
    total = 0
    for s in complex_.faces[n]:
        prod = 1
        for i in range(n):
            e = (s[i], s[i + 1])
            prod &= cochains[i].values[index[e]]
            if not prod:
                break
        total ^= prod
    return total


def cup_eval(complex_: SimplicialComplex, cochains: Sequence[Cochain1]) -> int:
    """n-fold cup product of 1-cocycles against the sum of top simplices.

    Uses the front-face/back-face formula on the global vertex order:
    each ordered top simplex [v_0 < ... < v_n] contributes the product
    of the i-th cochain on the edge (v_{i-1}, v_i).
    """
    n = complex_.dimension
    if not complex_.is_closed_pseudomanifold(n):
        raise NotClosedError("complex is not a closed pseudomanifold")
    if len(cochains) != n:
        raise ArityMismatchError(f"need {n} cochains, got {len(cochains)}")
    for c in cochains:
        if not is_cocycle(complex_, c):
            raise NotCocycleError("argument is not a cocycle")
    return _cup_eval_unchecked(complex_, cochains, n)


def fundamental_form(complex_: SimplicialComplex) -> CupForm:
    """Assemble the tensor of all cup products of the cohomology basis.

    All argument orders are evaluated; the results must agree entrywise
    (they do for cocycles paired against a cycle), and the symmetric
    tensor is returned.  Disagreement indicates an internal bug.
    """
    n = complex_.dimension
    if not complex_.is_closed_pseudomanifold(n):
        raise NotClosedError("complex is not a closed pseudomanifold")
    basis = cohomology_basis_1(complex_)
    b = len(basis)
    entries = []
    for idx in itertools.product(range(b), repeat=n):
        entries.append(_cup_eval_unchecked(complex_, [basis[i] for i in idx], n))
    tensor = multilinear.Gf2Tensor(n, b, tuple(entries))
    if not multilinear.is_symmetric(tensor):
        raise RuntimeError("cup form failed the argument-permutation check")
    provenance = f"complex(V={complex_.vertex_count},top={len(complex_.faces[n])})"
    return CupForm(tensor, tuple(basis), provenance)


def minkowski_hypothesis(complex_: SimplicialComplex) -> int:
    """Determinant mod 2 of the cup form; 1 means the length-product
    hypothesis is satisfied."""
    return multilinear.det2_dispatch(fundamental_form(complex_).tensor)


# -- generators --------------------------------------------------------------


def torus_7v() -> SimplicialComplex:
    """7-vertex triangulation of the torus (2-neighborly, 14 triangles)."""
    tris = []
    for i in range(7):
        tris.append(((i) % 7, (i + 1) % 7, (i + 3) % 7))
        tris.append(((i) % 7, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex(tris)


def projective_plane_6v() -> SimplicialComplex:
    """6-vertex triangulation of the projective plane (10 triangles)."""
    tris = [
        (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 6), (1, 5, 6),
        (2, 3, 5), (2, 3, 6), (2, 4, 6), (3, 4, 5), (4, 5, 6),
    ]
    return SimplicialComplex([tuple(v - 1 for v in t) for t in tris])


def sphere_tetrahedron() -> SimplicialComplex:
    return SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def barycentric_subdivision(complex_: SimplicialComplex) -> SimplicialComplex:
    """Flag subdivision: new vertices are faces, simplices are chains."""
    all_faces = [f for d in sorted(complex_.faces) for f in complex_.faces[d]]
    face_id = {f: i for i, f in enumerate(all_faces)}
    new_simplices = []
    for s in complex_.maximal_simplices:
        for perm in itertools.permutations(s):
            chain = [tuple(sorted(perm[: k + 1])) for k in range(len(perm))]
            new_simplices.append(tuple(sorted(face_id[f] for f in chain)))
    return SimplicialComplex(new_simplices)


def _is_closed_surface(complex_: SimplicialComplex) -> bool:
    return complex_.dimension == 2 and complex_.is_closed_pseudomanifold(2)


def _glue(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    t1 = k1.maximal_simplices[0]
    t2 = k2.maximal_simplices[0]
    offset = k1.vertex_count
    glue_map = {t2[i] + offset: t1[i] for i in range(3)}
    simplices = [s for s in k1.maximal_simplices if s != t1]
    for s in k2.maximal_simplices:
        if s == t2:
            continue
        simplices.append(tuple(glue_map.get(v + offset, v + offset) for v in s))
    return SimplicialComplex(simplices)


def connected_sum(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    """Remove an open triangle from each surface and glue the boundaries.

    Falls back to one barycentric subdivision of both summands if the
    naive identification fails to produce a closed surface.
    """
    if not _is_closed_surface(k1) or not _is_closed_surface(k2):
        raise NotASurfaceError("connected sum needs closed surfaces")
    glued = _glue(k1, k2)
    if _is_closed_surface(glued):
        return glued
    glued = _glue(barycentric_subdivision(k1), barycentric_subdivision(k2))
    if not _is_closed_surface(glued):
        raise RuntimeError("connected sum failed even after subdivision")
    return glued


def orientable_surface(genus: int) -> SimplicialComplex:
    if genus < 1:
        raise NotASurfaceError("genus must be >= 1")
    surface = torus_7v()
    for _ in range(genus - 1):
        surface = connected_sum(surface, torus_7v())
    return surface


def nonorientable_surface(crosscaps: int) -> SimplicialComplex:
    if crosscaps < 1:
        raise NotASurfaceError("crosscap number must be >= 1")
    surface = projective_plane_6v()
    for _ in range(crosscaps - 1):
        surface = connected_sum(surface, projective_plane_6v())
    return surface
