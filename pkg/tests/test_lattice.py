import math
import random
from fractions import Fraction

import pytest

from minklab import lattice as L
from minklab.errors import (
    BudgetExceededError,
    DependentVectorsError,
    DimensionMismatchError,
    DimensionTooLargeError,
    InputError,
    NotRiemannianFlatError,
)

from helpers import brute_force_minima, random_ellipsoid, random_slab

EUCLID2 = L.PBall(2, 2.0, (1.0, 1.0))
INFBALL2 = L.PBall(2, math.inf, (1.0, 1.0))
INFBALL3 = L.PBall(3, math.inf, (1.0, 1.0, 1.0))
IDENT2 = L.Ellipsoid(2, ((1, 0), (0, 1)))
DIAG41 = L.Ellipsoid(2, ((4, 0), (0, 1)))
HEX_RATIONAL = L.Ellipsoid(2, ((Fraction(1), Fraction(1, 2)), (Fraction(1, 2), Fraction(1))))


def test_norm_eval_examples():
    assert L.norm_eval(EUCLID2, (3.0, 4.0)) == pytest.approx(5.0)
    assert L.norm_eval(INFBALL2, (3.0, 4.0)) == pytest.approx(4.0)
    slab = L.SlabPolytope(2, ((1.0, 0.0), (0.0, 1.0)))
    assert L.norm_eval(slab, (3.0, 4.0)) == pytest.approx(4.0)
    assert L.norm_eval(DIAG41, (1.0, 0.0)) == pytest.approx(2.0)
    with pytest.raises(DimensionMismatchError):
        L.norm_eval(EUCLID2, (1.0, 2.0, 3.0))


def test_body_validation():
    with pytest.raises(InputError):
        L.PBall(2, 0.5, (1.0, 1.0))
    with pytest.raises(InputError):
        L.Ellipsoid(2, ((1, 2), (2, 1)))  # indefinite
    with pytest.raises(InputError):
        L.Ellipsoid(2, ((0, 1), (1, 0)))
    with pytest.raises(InputError):
        L.SlabPolytope(2, ((1.0, 0.0),))  # normals do not span


def test_volume_closed_forms():
    assert L.volume(EUCLID2).value == pytest.approx(math.pi)
    assert L.volume(INFBALL3).value == pytest.approx(8.0)
    assert L.volume(L.PBall(2, 1.0, (1.0, 1.0))).value == pytest.approx(2.0)
    assert L.volume(IDENT2).value == pytest.approx(math.pi)
    assert L.volume(DIAG41).value == pytest.approx(math.pi / 2)


def test_volume_monte_carlo_matches_exact_box():
    slab = L.SlabPolytope(2, ((1.0, 0.0), (0.0, 1.0)))
    res = L.volume(slab, samples=1_000_000, seed=123)
    assert res.method == "monte_carlo"
    assert abs(res.value - 4.0) <= 3.0 * res.standard_error + 1e-9


def test_volume_monte_carlo_on_tilted_slab():
    # Rotated square of side sqrt(2): normals (1,1)/2 and (1,-1)/2 give the
    # body |x+y| <= 2, |x-y| <= 2 with exact area 8.
    slab = L.SlabPolytope(2, ((0.5, 0.5), (0.5, -0.5)))
    res = L.volume(slab, samples=400_000, seed=11)
    assert abs(res.value - 8.0) <= 4.0 * res.standard_error


def test_volume_requires_seed_for_slabs():
    slab = L.SlabPolytope(2, ((1.0, 0.0), (0.0, 1.0)))
    with pytest.raises(InputError):
        L.volume(slab)


def test_minima_infball_is_sharp():
    res = L.successive_minima(INFBALL3)
    assert res.minima == (1.0, 1.0, 1.0)
    assert res.minkowski_ratio == pytest.approx(1.0, abs=1e-12)
    assert L.integer_rank(res.vectors) == 3


def test_minima_euclidean_ball():
    res = L.successive_minima(EUCLID2)
    assert res.minima == (1.0, 1.0)
    assert res.minkowski_ratio == pytest.approx(math.pi / 4)


def test_minima_hexagonal_rational_exact():
    res = L.successive_minima(HEX_RATIONAL)
    assert res.exact_norms_squared == (Fraction(1), Fraction(1))
    # Unit-area rescaling multiplies the product of minima by 2/sqrt(3).
    scale = 2.0 / math.sqrt(3.0)
    product = scale * math.sqrt(float(res.exact_norms_squared[0] * res.exact_norms_squared[1]))
    assert abs(product - 2.0 / math.sqrt(3.0)) < 1e-12


def test_minima_hexagonal_unit_area_float():
    c = 2.0 / math.sqrt(3.0)
    body = L.Ellipsoid(2, ((c, c / 2.0), (c / 2.0, c)))
    res = L.successive_minima(body)
    assert res.minima[0] * res.minima[1] == pytest.approx(2.0 / math.sqrt(3.0), abs=1e-12)
    assert res.minkowski_ratio < 1.0


def test_minima_dimension_limit():
    with pytest.raises(DimensionTooLargeError):
        L.successive_minima(L.PBall(7, 2.0, (1.0,) * 7))


def test_minima_match_brute_force():
    rng = random.Random(37)
    for _ in range(25):
        dim = rng.randint(2, 3)
        body = random_ellipsoid(rng, dim)
        res = L.successive_minima(body)
        brute = brute_force_minima(body, radius=4)
        assert len(brute) == dim
        for a, b in zip(res.minima, brute):
            assert a == pytest.approx(b, abs=1e-9)


def test_minima_vectors_are_primitive():
    rng = random.Random(41)
    for _ in range(30):
        body = random_ellipsoid(rng, rng.randint(2, 4))
        res = L.successive_minima(body)
        for v in res.vectors:
            assert math.gcd(*(abs(c) for c in v)) == 1


def test_minkowski_check_examples():
    assert L.minkowski_second_check(INFBALL2).lhs == pytest.approx(1.0, abs=1e-12)
    assert L.minkowski_second_check(EUCLID2).lhs == pytest.approx(math.pi / 4)
    c = 2.0 / math.sqrt(3.0)
    hexa = L.Ellipsoid(2, ((c, c / 2.0), (c / 2.0, c)))
    report = L.minkowski_second_check(hexa)
    assert report.passed and report.lhs < 1.0


def test_minkowski_first_consequence():
    rng = random.Random(43)
    for _ in range(40):
        body = random_ellipsoid(rng, rng.randint(2, 4))
        res = L.successive_minima(body)
        n = body.dim
        assert res.minima[0] ** n * res.volume.value <= 2.0**n * (1 + 1e-12)


def test_scaling_covariance_is_exact():
    # Doubling the body halves each minimum and scales volume by 2^n; with
    # a power-of-two scale every float op is exact, so ratios match bitwise.
    base = L.PBall(3, 2.0, (1.0, 0.5, 2.0))
    doubled = L.PBall(3, 2.0, (2.0, 1.0, 4.0))
    r1 = L.successive_minima(base)
    r2 = L.successive_minima(doubled)
    assert tuple(m / 2.0 for m in r1.minima) == r2.minima
    assert r2.volume.value == 8.0 * r1.volume.value
    assert r1.minkowski_ratio == r2.minkowski_ratio


def test_bh_volume_examples():
    assert L.bh_volume_flat_torus(EUCLID2) == pytest.approx(1.0)
    assert L.bh_volume_flat_torus(INFBALL2) == pytest.approx(math.pi / 4)
    rng = random.Random(47)
    for _ in range(10):
        body = random_ellipsoid(rng, 3)
        det = float(L.rational_det(body.matrix))
        assert L.bh_volume_flat_torus(body) == pytest.approx(math.sqrt(det))


def test_verify_eq_mink_examples():
    report = L.verify_eq_mink(INFBALL2)
    assert report.passed
    assert report.lhs == pytest.approx(report.rhs, abs=1e-12)  # sharp case
    assert L.verify_eq_mink(EUCLID2).passed


def test_stable_ball_measure_examples():
    assert L.stable_ball_measure_flat(IDENT2) == pytest.approx(math.pi)
    assert L.stable_ball_measure_flat(DIAG41) == pytest.approx(math.pi / 2)
    with pytest.raises(NotRiemannianFlatError):
        L.stable_ball_measure_flat(EUCLID2)
    with pytest.raises(NotRiemannianFlatError):
        L.stable_ball_measure_flat(L.SlabPolytope(2, ((1.0, 0.0), (0.0, 1.0))))


def test_verify_eq_stab_examples():
    for body, expected in (
        (IDENT2, math.pi),
        (DIAG41, math.pi),
        (L.Ellipsoid(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1))), 4.0 * math.pi / 3.0),
    ):
        report = L.verify_eq_stab(body)
        assert report.passed
        assert report.lhs == pytest.approx(expected, abs=1e-12)
        assert report.rhs == pytest.approx(expected, abs=1e-12)


def test_prop_stab_examples():
    report = L.prop_stab_check(IDENT2, [(1, 0), (0, 1)])
    assert report.lhs == pytest.approx(math.pi) and report.passed
    report = L.prop_stab_check(IDENT2, [(1, 0), (1, 1)])
    assert report.lhs == pytest.approx(math.pi * math.sqrt(2.0)) and report.passed
    hex_res = L.successive_minima(HEX_RATIONAL)
    report = L.prop_stab_check(HEX_RATIONAL, hex_res.vectors)
    assert report.passed and report.lhs >= 2.0
    with pytest.raises(DependentVectorsError):
        L.prop_stab_check(IDENT2, [(1, 0), (2, 0)])


def test_count_examples():
    assert L.count_geodesics(EUCLID2, 1.0) == 4
    count10 = L.count_geodesics(EUCLID2, 10.0)
    assert count10 == 316
    assert abs(count10 / 100.0 - math.pi) < 0.15 * math.pi
    assert L.count_geodesics(INFBALL2, 3.0) == 48  # (2*3+1)^2 - 1


def test_count_limits():
    with pytest.raises(DimensionTooLargeError):
        L.count_geodesics(L.PBall(5, 2.0, (1.0,) * 5), 1.0)
    with pytest.raises(BudgetExceededError):
        L.count_geodesics(L.PBall(4, 2.0, (1.0,) * 4), 10_000.0)
    with pytest.raises(InputError):
        L.count_geodesics(EUCLID2, -1.0)


def test_count_asymptotics_approach_ball_measure():
    # |N(t)/t^n - vol(K)| <= vol(K) * c / t with c calibrated per family.
    for body, c in ((EUCLID2, 3.0), (INFBALL2, 5.0), (DIAG41, 4.0)):
        vol = L.volume(body).value
        for t in (20.0, 40.0):
            count = L.count_geodesics(body, t)
            assert abs(count / t**body.dim - vol) <= vol * c / t


def test_count_matches_minima_threshold():
    # The smallest t with a nonzero count is the first minimum.
    rng = random.Random(53)
    for _ in range(10):
        body = random_ellipsoid(rng, 2)
        res = L.successive_minima(body)
        lam1 = res.minima[0]
        assert L.count_geodesics(body, lam1 * 1.000001) >= 2
        assert L.count_geodesics(body, lam1 * 0.999) == 0


def test_slab_minima_with_mc_volume():
    rng = random.Random(59)
    for _ in range(5):
        body = random_slab(rng, 2)
        res = L.successive_minima(body, samples=100_000, seed=rng.randint(0, 10**6))
        assert res.volume.method == "monte_carlo"
        assert res.minkowski_ratio <= 1.0 + res.ratio_tolerance


def test_body_spec_roundtrip():
    for body in (EUCLID2, INFBALL3, HEX_RATIONAL, L.SlabPolytope(2, ((1.0, 0.0), (0.0, 1.0)))):
        again = L.body_from_spec(L.body_to_spec(body))
        assert again == body
