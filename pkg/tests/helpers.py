"""Shared generators and brute-force oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from minklab import gf2, graphs, lattice, multilinear, symplectic


# -- random inputs -------------------------------------------------------------


def random_bitmatrix(rng: random.Random, rows: int, cols: int) -> gf2.BitMatrix:
    return gf2.BitMatrix(
        rows, cols, tuple(rng.getrandbits(cols) if cols else 0 for _ in range(rows))
    )


def random_tensor(rng: random.Random, order: int, dim: int) -> multilinear.Gf2Tensor:
    size = dim**order
    return multilinear.Gf2Tensor(
        order, dim, tuple(rng.randint(0, 1) for _ in range(size))
    )


def random_symmetric_bilinear(rng: random.Random, dim: int) -> multilinear.Gf2Tensor:
    rows = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            bit = rng.randint(0, 1)
            rows[i][j] = rows[j][i] = bit
    return multilinear.Gf2Tensor.from_matrix(rows)


def random_connected_graph(
    rng: random.Random,
    max_vertices: int = 20,
    min_rank: int = 2,
    max_rank: int = 10,
    allow_loops: bool = False,
) -> graphs.MetricGraph:
    v = rng.randint(2, max_vertices)
    edges = []
    for w in range(1, v):
        u = rng.randint(0, w - 1)
        edges.append((u, w, rng.uniform(0.1, 10.0)))
    b = rng.randint(min_rank, max_rank)
    for _ in range(b):
        u = rng.randint(0, v - 1)
        w = rng.randint(0, v - 1)
        if not allow_loops:
            while w == u:
                w = rng.randint(0, v - 1)
        edges.append((u, w, rng.uniform(0.1, 10.0)))
    return graphs.MetricGraph(v, tuple(edges))


def random_rational_spd(rng: random.Random, dim: int) -> list[list[Fraction]]:
    """A^T A + I for a random small integer matrix: rational SPD."""
    a = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(dim)]
    out = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            acc = Fraction(0)
            for k in range(dim):
                acc += Fraction(a[k][i] * a[k][j], 4)
            out[i][j] = acc + (1 if i == j else 0)
    return out


def random_ellipsoid(rng: random.Random, dim: int) -> lattice.Ellipsoid:
    return lattice.Ellipsoid(
        dim, tuple(tuple(row) for row in random_rational_spd(rng, dim))
    )


def random_slab(rng: random.Random, dim: int) -> lattice.SlabPolytope:
    """Standard axes (guaranteeing full rank and a bounded body) plus a
    couple of random tilted slabs."""
    normals = [[1.0 if j == i else 0.0 for j in range(dim)] for i in range(dim)]
    for _ in range(rng.randint(1, 2)):
        normals.append([rng.uniform(-1.0, 1.0) for _ in range(dim)])
    scale = rng.uniform(0.5, 1.5)
    return lattice.SlabPolytope(
        dim, tuple(tuple(x / scale for x in a) for a in normals)
    )


def random_alternating_gf2(rng: random.Random, dim: int) -> symplectic.AlternatingForm:
    rows = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            bit = rng.randint(0, 1)
            rows[i][j] = rows[j][i] = bit
    return symplectic.AlternatingForm(tuple(tuple(r) for r in rows), "gf2")


def all_alternating_gf2(dim: int):
    """Every alternating GF(2) form of the given dimension."""
    positions = list(itertools.combinations(range(dim), 2))
    for bits in itertools.product((0, 1), repeat=len(positions)):
        rows = [[0] * dim for _ in range(dim)]
        for (i, j), bit in zip(positions, bits):
            rows[i][j] = rows[j][i] = bit
        yield symplectic.AlternatingForm(tuple(tuple(r) for r in rows), "gf2")


# -- brute-force oracles ----------------------------------------------------------


def det2_permutation_sum(m: gf2.BitMatrix) -> int:
    """Exhaustive sum over permutations of products of entries, mod 2."""
    n = m.rows
    total = 0
    for sigma in itertools.permutations(range(n)):
        prod = 1
        for k in range(n):
            prod &= m[k, sigma[k]]
            if not prod:
                break
        total ^= prod
    return total


def pfaffian_matching_sum(m: gf2.BitMatrix) -> int:
    """Count perfect matchings with all matched entries 1, mod 2."""
    n = m.rows
    assert n % 2 == 0

    def count(unmatched: tuple[int, ...]) -> int:
        if not unmatched:
            return 1
        first, rest = unmatched[0], unmatched[1:]
        total = 0
        for k, partner in enumerate(rest):
            if m[first, partner]:
                total += count(rest[:k] + rest[k + 1 :])
        return total

    return count(tuple(range(n))) % 2


def brute_force_minima(body: lattice.NormBody, radius: int) -> list[float]:
    """Successive minima by scanning a fixed integer box."""
    n = body.dim
    points = []
    for p in itertools.product(range(-radius, radius + 1), repeat=n):
        if any(p):
            points.append((lattice.norm_eval(body, p), p))
    points.sort(key=lambda item: (item[0], item[1]))
    minima = []
    chosen = []
    for value, p in points:
        if lattice.integer_rank(chosen + [list(p)]) > len(chosen):
            chosen.append(list(p))
            minima.append(value)
            if len(minima) == n:
                break
    return minima
