"""Symmetric convex bodies on the integer lattice: successive minima,
volumes, and the flat-torus consequences of the second-theorem bound.

Bodies come in three shapes: axis-scaled p-balls, ellipsoids given by a
symmetric positive-definite matrix (norm sqrt(x^T A x)), and slab
polytopes cut out by facet normals (norm max |<a_i, x>|).  Minima are
found by exact enumeration of lattice points in an expanding norm ball;
independence certificates always use exact rational rank, never floats.
Rational ellipsoids additionally get exact rational norm comparisons.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (
    BudgetExceededError,
    DependentVectorsError,
    DimensionMismatchError,
    DimensionTooLargeError,
    InputError,
    NotRiemannianFlatError,
)

DEFAULT_MC_SAMPLES = 1_000_000
_ENUM_BUDGET = 100_000_000

Rational = Union[int, Fraction]


def unit_ball_volume(n: int) -> float:
    """Lebesgue measure of the Euclidean unit ball in dimension n."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


# -- rational linear algebra -------------------------------------------------


def _fraction_matrix(rows: Sequence[Sequence[Rational]]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def rational_det(rows: Sequence[Sequence[Rational]]) -> Fraction:
    m = _fraction_matrix(rows)
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return det


def rational_solve(rows: Sequence[Sequence[Rational]], rhs: Sequence[Rational]) -> list[Fraction]:
    n = len(rows)
    m = [_fraction_matrix(rows)[r] + [Fraction(rhs[r])] for r in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Exact rank over the rationals of integer vectors."""
    pivots: list[tuple[int, list[Fraction]]] = []
    for vec in vectors:
        _reduce_against(pivots, vec)
    return len(pivots)


def _reduce_against(
    pivots: list[tuple[int, list[Fraction]]], vec: Sequence[Rational]
) -> bool:
    """Reduce vec by current pivots; install a new pivot if independent."""
    v = [Fraction(x) for x in vec]
    for col, row in pivots:
        if v[col] != 0:
            factor = v[col] / row[col]
            v = [a - factor * b for a, b in zip(v, row)]
    for col, x in enumerate(v):
        if x != 0:
            pivots.append((col, v))
            return True
    return False


# -- bodies -------------------------------------------------------------------


@dataclass(frozen=True)
class PBall:
    """Axis-scaled p-ball; p may be math.inf for the box norm."""

    dim: int
    p: float
    scales: tuple[float, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dimension must be >= 1")
        if not (self.p >= 1):
            raise InputError("p must be >= 1")
        if len(self.scales) != self.dim:
            raise InputError("need one scale per axis")
        if any(not (s > 0) for s in self.scales):
            raise InputError("scales must be positive")


@dataclass(frozen=True)
class Ellipsoid:
    """Body x^T A x <= 1 for symmetric positive-definite A."""

    dim: int
    matrix: tuple[tuple[Union[float, Fraction], ...], ...]

    def __post_init__(self):
        a = self.matrix
        if self.dim < 1 or len(a) != self.dim or any(len(r) != self.dim for r in a):
            raise InputError("matrix must be dim x dim")
        if any(a[i][j] != a[j][i] for i in range(self.dim) for j in range(self.dim)):
            raise InputError("matrix must be symmetric")
        if self.is_rational:
            # Sylvester: all leading principal minors positive, exactly.
            for k in range(1, self.dim + 1):
                minor = rational_det([row[:k] for row in a[:k]])
                if minor <= 0:
                    raise InputError("matrix must be positive definite")
        else:
            eigs = np.linalg.eigvalsh(np.array(a, dtype=float))
            if eigs[0] <= 0:
                raise InputError("matrix must be positive definite")

    @property
    def is_rational(self) -> bool:
        return all(
            isinstance(x, (int, Fraction)) for row in self.matrix for x in row
        )

    def quad_form(self, x: Sequence[Rational]) -> Fraction:
        """Exact x^T A x for integer/rational x (rational matrices only)."""
        acc = Fraction(0)
        for i in range(self.dim):
            for j in range(self.dim):
                acc += Fraction(self.matrix[i][j]) * Fraction(x[i]) * Fraction(x[j])
        return acc

    def det(self) -> float:
        if self.is_rational:
            return float(rational_det(self.matrix))
        return float(np.linalg.det(np.array(self.matrix, dtype=float)))


@dataclass(frozen=True)
class SlabPolytope:
    """Body cut out by |<a_i, x>| <= 1; the normals must span R^n."""

    dim: int
    normals: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dimension must be >= 1")
        if not self.normals or any(len(a) != self.dim for a in self.normals):
            raise InputError("normals must be vectors of length dim")
        n = np.array(self.normals, dtype=float)
        if np.linalg.matrix_rank(n) < self.dim:
            raise InputError("normals must span the whole space")


NormBody = Union[PBall, Ellipsoid, SlabPolytope]


def body_from_spec(spec: dict) -> NormBody:
    """Build a body from its JSON description."""
    try:
        dim = int(spec["dim"])
        shape = spec["shape"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad body spec: {exc}") from exc
    if shape == "p_ball":
        p = spec.get("p", 2)
        p = math.inf if p in ("inf", "infinity") else float(p)
        scales = tuple(float(s) for s in spec.get("scales", [1.0] * dim))
        return PBall(dim, p, scales)
    if shape == "ellipsoid":
        rows = spec["matrix"]
        matrix = tuple(
            tuple(Fraction(x) if isinstance(x, str) else (x if isinstance(x, (int, Fraction)) else float(x)) for x in row)
            for row in rows
        )
        return Ellipsoid(dim, matrix)
    if shape == "slab":
        normals = tuple(tuple(float(x) for x in a) for a in spec["normals"])
        return SlabPolytope(dim, normals)
    raise InputError(f"unknown body shape {shape!r}")


def body_to_spec(body: NormBody) -> dict:
    if isinstance(body, PBall):
        p = "inf" if math.isinf(body.p) else body.p
        return {"dim": body.dim, "shape": "p_ball", "p": p, "scales": list(body.scales)}
    if isinstance(body, Ellipsoid):
        rows = [
            [str(x) if isinstance(x, Fraction) else x for x in row]
            for row in body.matrix
        ]
        return {"dim": body.dim, "shape": "ellipsoid", "matrix": rows}
    return {"dim": body.dim, "shape": "slab", "normals": [list(a) for a in body.normals]}


# -- norms ---------------------------------------------------------------------


def norm_eval(body: NormBody, x: Sequence[float]) -> float:
    """Gauge of x with respect to the body."""
    if len(x) != body.dim:
        raise DimensionMismatchError(f"expected {body.dim} coordinates, got {len(x)}")
    if isinstance(body, PBall):
        scaled = [abs(xi) / s for xi, s in zip(x, body.scales)]
        if math.isinf(body.p):
            return max(scaled)
        return math.fsum(v**body.p for v in scaled) ** (1 / body.p)
    if isinstance(body, Ellipsoid):
        a = np.array(body.matrix, dtype=float)
        v = np.array(x, dtype=float)
        return float(math.sqrt(max(v @ a @ v, 0.0)))
    v = np.array(x, dtype=float)
    return float(np.max(np.abs(np.array(body.normals, dtype=float) @ v)))


def norm_batch(body: NormBody, pts: np.ndarray) -> np.ndarray:
    """Vectorized gauge for an (N, dim) array of points."""
    if isinstance(body, PBall):
        scaled = np.abs(pts) / np.array(body.scales, dtype=float)
        if math.isinf(body.p):
            return scaled.max(axis=1)
        return (scaled**body.p).sum(axis=1) ** (1 / body.p)
    if isinstance(body, Ellipsoid):
        a = np.array(body.matrix, dtype=float)
        return np.sqrt(np.maximum(np.einsum("ij,jk,ik->i", pts, a, pts), 0.0))
    n = np.array(body.normals, dtype=float)
    return np.max(np.abs(pts @ n.T), axis=1)


def _coordinate_halfwidths(body: NormBody, t: float) -> list[float]:
    """Per-coordinate extent of t*K, used to clip enumeration boxes."""
    if isinstance(body, PBall):
        return [t * s for s in body.scales]
    if isinstance(body, Ellipsoid):
        if body.is_rational:
            widths = []
            for i in range(body.dim):
                rhs = [Fraction(1) if j == i else Fraction(0) for j in range(body.dim)]
                col = rational_solve(body.matrix, rhs)
                widths.append(t * math.sqrt(float(col[i])))
            return widths
        inv = np.linalg.inv(np.array(body.matrix, dtype=float))
        return [t * math.sqrt(max(inv[i, i], 0.0)) for i in range(body.dim)]
    # Slab: e_i = N^T c  =>  |x_i| <= ||c||_1 on the unit body.
    n = np.array(body.normals, dtype=float)
    coeff = np.linalg.pinv(n.T)
    return [t * float(np.abs(coeff[:, i]).sum()) for i in range(body.dim)]


# -- volume ---------------------------------------------------------------------


@dataclass(frozen=True)
class VolumeResult:
    value: float
    method: str
    standard_error: float = 0.0
    samples: Optional[int] = None
    seed: Optional[int] = None


def volume(
    body: NormBody,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = None,
) -> VolumeResult:
    """Lebesgue volume of the unit body: closed-form where available,
    seeded Monte Carlo over a bounding box for slab polytopes."""
    n = body.dim
    if isinstance(body, PBall):
        prod_scales = math.prod(body.scales)
        if math.isinf(body.p):
            return VolumeResult(2.0**n * prod_scales, "exact")
        value = (
            (2.0 * math.gamma(1 + 1 / body.p)) ** n
            / math.gamma(1 + n / body.p)
            * prod_scales
        )
        return VolumeResult(value, "exact")
    if isinstance(body, Ellipsoid):
        return VolumeResult(unit_ball_volume(n) / math.sqrt(body.det()), "exact")
    if seed is None:
        raise InputError("Monte Carlo volume needs an explicit seed")
    if samples < 1:
        raise InputError("sample count must be positive")
    halfwidths = np.array(_coordinate_halfwidths(body, 1.0))
    box_volume = float(np.prod(2.0 * halfwidths))
    rng = np.random.default_rng(seed)
    normals = np.array(body.normals, dtype=float)
    hits = 0
    remaining = samples
    while remaining > 0:
        chunk = min(remaining, 500_000)
        pts = rng.uniform(-halfwidths, halfwidths, size=(chunk, n))
        hits += int(np.count_nonzero(np.max(np.abs(pts @ normals.T), axis=1) <= 1.0))
        remaining -= chunk
    frac = hits / samples
    se = box_volume * math.sqrt(max(frac * (1 - frac), 1e-300) / samples)
    return VolumeResult(box_volume * frac, "monte_carlo", se, samples, seed)


# -- successive minima ------------------------------------------------------------


@dataclass(frozen=True)
class MinimaResult:
    minima: tuple[float, ...]
    vectors: tuple[tuple[int, ...], ...]
    volume: VolumeResult
    minkowski_ratio: float
    ratio_tolerance: float
    exact_norms_squared: Optional[tuple[Fraction, ...]] = None


def _enumerate_candidates(
    body: NormBody, t: float, threshold_sq: Optional[Fraction] = None
):
    """All nonzero integer points of t*K with a sort key.

    When threshold_sq is given (rational ellipsoids), membership and keys
    use the exact quadratic form; otherwise binary64 norms with ties
    resolved toward inclusion.
    """
    halfwidths = _coordinate_halfwidths(body, t)
    bounds = [int(math.floor(h * (1 + 1e-9) + 1e-9)) for h in halfwidths]
    out = []
    if threshold_sq is not None:
        for point in itertools.product(*(range(-b, b + 1) for b in bounds)):
            if all(c == 0 for c in point):
                continue
            q = body.quad_form(point)
            if q <= threshold_sq:
                out.append((q, point))
    else:
        axes = [np.arange(-b, b + 1) for b in bounds]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(bounds))
        norms = norm_batch(body, grid.astype(float))
        keep = (norms <= t * (1 + 1e-12)) & np.any(grid != 0, axis=1)
        for row, v in zip(grid[keep], norms[keep]):
            out.append((float(v), tuple(int(c) for c in row)))
    out.sort(key=lambda item: (item[0], item[1]))
    return out


def successive_minima(
    body: NormBody,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = None,
) -> MinimaResult:
    """Exact successive minima with achieving vectors and the Minkowski
    ratio prod(minima) * vol / 2^n.

    Enumeration expands a norm ball, starting from twice the smallest
    axis norm and doubling, capped by max_i ||e_i|| which always contains
    n independent vectors.  Ties sort lexicographically on coordinates.
    """
    n = body.dim
    if n > 6:
        raise DimensionTooLargeError(f"dimension {n} exceeds the desk-scale limit 6")
    axis_norms = []
    exact_axis_sq = []
    exact = isinstance(body, Ellipsoid) and body.is_rational
    for i in range(n):
        e = [0] * n
        e[i] = 1
        axis_norms.append(norm_eval(body, e))
        if exact:
            exact_axis_sq.append(body.quad_form(e))
    cap = max(axis_norms)
    t = min(2.0 * min(axis_norms), cap)
    t_sq = cap_sq = None
    if exact:
        cap_sq = max(exact_axis_sq)
        t_sq = min(4 * min(exact_axis_sq), cap_sq)
        t = math.sqrt(float(t_sq))

    while True:
        candidates = _enumerate_candidates(body, t, threshold_sq=t_sq)
        pivots: list[tuple[int, list[Fraction]]] = []
        chosen: list[tuple[int, ...]] = []
        keys = []
        for key, point in candidates:
            if _reduce_against(pivots, point):
                chosen.append(point)
                keys.append(key)
                if len(chosen) == n:
                    break
        if len(chosen) == n:
            break
        if exact:
            if t_sq >= cap_sq:
                raise RuntimeError("enumeration cap failed to contain a basis")
            t_sq = min(4 * t_sq, cap_sq)
            t = math.sqrt(float(t_sq))
        else:
            if t >= cap:
                raise RuntimeError("enumeration cap failed to contain a basis")
            t = min(2.0 * t, cap)

    if exact:
        exact_sq = tuple(keys)
        minima = tuple(math.sqrt(float(q)) for q in exact_sq)
    else:
        exact_sq = None
        minima = tuple(float(k) for k in keys)
    vol = volume(body, samples=samples, seed=seed)
    prod_minima = math.prod(minima)
    ratio = prod_minima * vol.value / 2.0**n
    tolerance = 1e-12
    if vol.method == "monte_carlo":
        tolerance += 3.0 * vol.standard_error * prod_minima / 2.0**n
    return MinimaResult(
        minima=minima,
        vectors=tuple(tuple(p) for p in chosen),
        volume=vol,
        minkowski_ratio=ratio,
        ratio_tolerance=tolerance,
        exact_norms_squared=exact_sq,
    )


# -- flat-torus checks --------------------------------------------------------------


@dataclass(frozen=True)
class CheckReport:
    name: str
    lhs: float
    rhs: float
    tolerance: float
    passed: bool
    details: dict


def minkowski_second_check(
    body: NormBody,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = None,
    result: Optional[MinimaResult] = None,
) -> CheckReport:
    """prod(lambda_k) * vol(K) <= 2^n, within the volume tolerance."""
    res = result or successive_minima(body, samples=samples, seed=seed)
    passed = res.minkowski_ratio <= 1.0 + res.ratio_tolerance
    return CheckReport(
        name="minkowski_second",
        lhs=res.minkowski_ratio,
        rhs=1.0,
        tolerance=res.ratio_tolerance,
        passed=passed,
        details={
            "minima": list(res.minima),
            "vectors": [list(v) for v in res.vectors],
            "volume": res.volume.value,
            "volume_method": res.volume.method,
        },
    )


def bh_volume_flat_torus(
    body: NormBody,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = None,
) -> float:
    """Busemann-Hausdorff volume of the quotient torus: b_n / vol(K)."""
    return unit_ball_volume(body.dim) / volume(body, samples=samples, seed=seed).value


def verify_eq_mink(
    body: NormBody,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: Optional[int] = None,
    result: Optional[MinimaResult] = None,
) -> CheckReport:
    """prod of geodesic lengths <= (2^n / b_n) * V on the flat torus.

    Algebraically the same as the Minkowski ratio check; evaluated
    through the torus volume as an independent consistency path.
    """
    res = result or successive_minima(body, samples=samples, seed=seed)
    n = body.dim
    v_torus = unit_ball_volume(n) / res.volume.value
    lhs = math.prod(res.minima)
    rhs = 2.0**n / unit_ball_volume(n) * v_torus
    tol = rhs * 1e-12
    if res.volume.method == "monte_carlo":
        tol += rhs * 3.0 * res.volume.standard_error / res.volume.value
    return CheckReport(
        name="flat_torus_length_product",
        lhs=lhs,
        rhs=rhs,
        tolerance=tol,
        passed=lhs <= rhs + tol,
        details={"torus_volume": v_torus, "minima": list(res.minima)},
    )


def stable_ball_measure_flat(body: NormBody) -> float:
    """Volume of the stable-norm unit ball of a flat Riemannian torus.

    Flat case only: the stable norm equals the defining norm, so this is
    the Lebesgue volume of the ellipsoid body.  Other shapes are not
    Riemannian and are refused.
    """
    if not isinstance(body, Ellipsoid):
        raise NotRiemannianFlatError("stable-norm measure needs a flat Riemannian metric")
    return volume(body).value


def verify_eq_stab(body: NormBody) -> CheckReport:
    """Asymptotic cover growth equals stable-ball measure times volume.

    For the flat metric A both sides equal b_n exactly: balls of radius R
    in the universal abelian cover have Riemannian volume b_n R^n, and
    mu(B) * vol = (b_n / sqrt(det A)) * sqrt(det A).
    """
    if not isinstance(body, Ellipsoid):
        raise NotRiemannianFlatError("asymptotic-growth check needs a flat Riemannian metric")
    n = body.dim
    sqrt_det = math.sqrt(body.det())
    radius = 2.0
    cover_ball = sqrt_det * (unit_ball_volume(n) * radius**n / sqrt_det)
    omega = cover_ball / radius**n
    mu_times_vol = stable_ball_measure_flat(body) * sqrt_det
    tol = 1e-12
    return CheckReport(
        name="asymptotic_volume_identity",
        lhs=omega,
        rhs=mu_times_vol,
        tolerance=tol,
        passed=abs(omega - mu_times_vol) <= tol,
        details={"expected": unit_ball_volume(n)},
    )


def prop_stab_check(body: NormBody, vectors: Sequence[Sequence[int]]) -> CheckReport:
    """mu(B) * prod ||v_k|| >= 2^n / n! for any rational basis of vectors."""
    if not isinstance(body, Ellipsoid):
        raise NotRiemannianFlatError("stable-norm bound needs a flat Riemannian metric")
    n = body.dim
    vecs = [tuple(int(c) for c in v) for v in vectors]
    if len(vecs) != n or integer_rank(vecs) != n:
        raise DependentVectorsError("vectors must be n and linearly independent")
    mu = stable_ball_measure_flat(body)
    lengths = [norm_eval(body, v) for v in vecs]
    lhs = mu * math.prod(lengths)
    rhs = 2.0**n / math.factorial(n)
    return CheckReport(
        name="stable_ball_length_product",
        lhs=lhs,
        rhs=rhs,
        tolerance=0.0,
        passed=lhs >= rhs,
        details={"lengths": lengths, "ball_measure": mu},
    )


def count_geodesics(body: NormBody, t: float) -> int:
    """Number of nonzero integer vectors of norm <= t (homologically
    distinct closed geodesics of the flat torus up to length t)."""
    n = body.dim
    if n > 4:
        raise DimensionTooLargeError(f"dimension {n} exceeds the counting limit 4")
    if not (t > 0):
        raise InputError("t must be positive")
    halfwidths = _coordinate_halfwidths(body, t)
    bounds = [int(math.floor(h * (1 + 1e-9) + 1e-9)) for h in halfwidths]
    total = math.prod(2 * b + 1 for b in bounds)
    if total > _ENUM_BUDGET:
        raise BudgetExceededError(f"enumeration of {total} points exceeds the budget")
    axes = [np.arange(-b, b + 1) for b in bounds]
    count = 0
    threshold = t * (1 + 1e-12)
    if total <= 2_000_000:
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        norms = norm_batch(body, grid.astype(float))
        inside = norms <= threshold
        count = int(np.count_nonzero(inside))
    else:
        rest = axes[1:]
        rest_grid = np.stack(np.meshgrid(*rest, indexing="ij"), axis=-1).reshape(-1, n - 1)
        for x0 in axes[0]:
            pts = np.concatenate(
                [np.full((rest_grid.shape[0], 1), x0), rest_grid], axis=1
            )
            count += int(np.count_nonzero(norm_batch(body, pts.astype(float)) <= threshold))
    return count - 1  # exclude the origin
