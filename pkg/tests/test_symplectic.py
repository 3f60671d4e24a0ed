import random
from fractions import Fraction

import pytest

from minklab import gf2, symplectic as sy
from minklab.errors import (
    DimensionTooLargeError,
    NoPairingError,
    NotAlternatingError,
    OddDimensionError,
    ParseError,
)

from helpers import all_alternating_gf2, random_alternating_gf2

J4 = sy.standard_symplectic_form(2)
ZERO4 = sy.AlternatingForm(tuple(tuple(0 for _ in range(4)) for _ in range(4)), "gf2")


def test_form_validation():
    with pytest.raises(NotAlternatingError):
        sy.AlternatingForm(((1, 0), (0, 0)), "gf2")
    with pytest.raises(NotAlternatingError):
        sy.AlternatingForm(((0, 1), (0, 0)), "gf2")
    with pytest.raises(NotAlternatingError):
        sy.AlternatingForm.from_rational([[0, 1], [1, 0]])
    sy.AlternatingForm.from_rational([[0, 1], [-1, 0]])  # fine


def test_nondegeneracy_examples():
    assert sy.is_nondegenerate(J4)
    assert not sy.is_nondegenerate(ZERO4)
    partial = sy.AlternatingForm.from_rational(
        [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    )
    assert not sy.is_nondegenerate(partial)


def test_pairing_standard_form_is_identity():
    pairing = sy.gutt_pairing(J4)
    assert pairing.sigma == (1, 2, 3, 4)
    assert pairing.pair_values == (1, 1)


def test_pairing_forced_matching():
    form = sy.AlternatingForm(
        ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0)), "gf2"
    )
    assert sy.gutt_pairing(form).sigma == (1, 3, 2, 4)


def test_pairing_odd_dimension():
    form = sy.AlternatingForm(((0, 1, 0), (1, 0, 0), (0, 0, 0)), "gf2")
    with pytest.raises(OddDimensionError):
        sy.gutt_pairing(form)


def test_no_pairing_certifies_degeneracy():
    with pytest.raises(NoPairingError):
        sy.gutt_pairing(ZERO4)


def test_pairing_under_congruence_transforms():
    rng = random.Random(61)
    for _ in range(50):
        p = gf2.random_invertible(4, rng.randint(0, 10**6))
        rows = [[p[i, j] for j in range(4)] for i in range(4)]
        form = sy.congruence_transform(J4, rows)
        assert sy.is_nondegenerate(form)
        pairing = sy.gutt_pairing(form)
        assert sy.verify_pairing(form, pairing)


def test_rational_pairing_values_are_exact():
    form = sy.AlternatingForm.from_rational(
        [[0, Fraction(1, 3)], [Fraction(-1, 3), 0]]
    )
    pairing = sy.gutt_pairing(form)
    assert pairing.pair_values == (Fraction(1, 3),)


def test_matching_count_examples():
    assert sy.matching_count(J4) == 1
    k4 = sy.AlternatingForm(
        tuple(tuple(0 if i == j else 1 for j in range(4)) for i in range(4)), "gf2"
    )
    assert sy.matching_count(k4) == 3
    assert sy.matching_count(ZERO4) == 0
    with pytest.raises(DimensionTooLargeError):
        sy.matching_count(sy.standard_symplectic_form(6))


def test_exhaustive_dim4_completeness_and_contrapositive():
    for form in all_alternating_gf2(4):
        nondeg = sy.is_nondegenerate(form)
        try:
            pairing = sy.gutt_pairing(form)
            found = True
            assert sy.verify_pairing(form, pairing)
        except NoPairingError:
            found = False
        if nondeg:
            assert found
        if not found:
            assert not nondeg
        assert (sy.matching_count(form) >= 1) == found


def test_randomized_dim8_congruence_suite():
    rng = random.Random(67)
    j8 = sy.standard_symplectic_form(4)
    for _ in range(100):
        p = gf2.random_invertible(8, rng.randint(0, 10**6))
        rows = [[p[i, j] for j in range(8)] for i in range(8)]
        form = sy.congruence_transform(j8, rows)
        pairing = sy.gutt_pairing(form)
        assert sy.verify_pairing(form, pairing)


def test_rational_congruence_suite():
    rng = random.Random(71)
    j4 = sy.standard_symplectic_form(2, "rational")
    found = 0
    for _ in range(60):
        p = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)]
        form = sy.congruence_transform(j4, p)
        if not sy.is_nondegenerate(form):
            continue  # singular transform
        found += 1
        pairing = sy.gutt_pairing(form)
        assert sy.verify_pairing(form, pairing)
        assert all(v != 0 for v in pairing.pair_values)
    assert found >= 40


def test_randomized_forms_respect_the_contrapositive():
    rng = random.Random(73)
    for _ in range(200):
        form = random_alternating_gf2(rng, rng.choice((2, 4, 6)))
        try:
            pairing = sy.gutt_pairing(form)
            assert sy.verify_pairing(form, pairing)
        except NoPairingError:
            assert not sy.is_nondegenerate(form)


def test_text_roundtrips():
    assert sy.form_from_text(sy.form_to_text(J4)) == J4
    rational = sy.AlternatingForm.from_rational(
        [[0, Fraction(5, 2)], [Fraction(-5, 2), 0]]
    )
    assert sy.form_from_text(sy.form_to_text(rational)) == rational


def test_text_parse_errors():
    with pytest.raises(ParseError):
        sy.form_from_text("")
    with pytest.raises(ParseError, match="line 1"):
        sy.form_from_text("2 3\n0 1 0\n1 0 0\n")
    with pytest.raises(ParseError, match="line 2"):
        sy.form_from_text("2 2\n0 x\n-1 0\n")
