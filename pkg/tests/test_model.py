"""Parameter validation, square classes, torsor models."""

import pytest
from hypothesis import given, strategies as st

from selmergraph.model import (
    CurveParams,
    InvalidD,
    InvalidGap,
    NotPrime,
    SquareClass,
    class_from_integer,
    curve_coefficients,
    enumerate_classes,
    places,
    torsor_coeffs,
    validate_params,
)


def test_validate_accepts_basic_instance():
    p = validate_params(1, 3, 5, 7)
    assert (p.eps, p.p, p.q, p.m, p.D) == (1, 3, 5, 1, 7)
    assert p.factors == (7,) and p.s == 1 and p.n == 1
    assert p.basis == (-1, 2, 3, 5, 7)
    assert p.key == "+1:3:5:7"


def test_validate_rejects_bad_gap():
    with pytest.raises(InvalidGap):
        validate_params(1, 3, 13, 7)       # gap 10
    with pytest.raises(InvalidGap):
        validate_params(1, 5, 3, 7)        # negative gap


def test_validate_rejects_bad_primes():
    with pytest.raises(NotPrime):
        validate_params(1, 9, 11, 7)
    with pytest.raises(NotPrime):
        validate_params(1, 13, 15, 7)


def test_validate_rejects_bad_D():
    with pytest.raises(InvalidD):
        validate_params(1, 3, 5, 9)        # not square-free
    with pytest.raises(InvalidD):
        validate_params(1, 3, 5, 15)       # shares factor with p*q
    with pytest.raises(InvalidD):
        validate_params(1, 3, 5, 14)       # even
    with pytest.raises(InvalidD):
        validate_params(1, 3, 5, -7)
    with pytest.raises(ValueError):
        validate_params(2, 3, 5, 7)


def test_factor_ordering_split_first():
    # pq = 35: (35/3) = (2/3) = -1 non-split, (35/13) = (9/13) = +1 split
    p = validate_params(1, 5, 7, 39)
    assert p.factors == (13, 3)
    assert p.s == 1
    # both split: ordered ascending
    p2 = validate_params(1, 3, 5, 7 * 11)   # (15/7) = 1, (15/11) = 1
    assert p2.factors == (7, 11) and p2.s == 2
    # D = 1 has no factors at all
    p3 = validate_params(-1, 3, 5, 1)
    assert p3.factors == () and p3.n == 0 and p3.s == 0


def test_enumerate_classes_sizes():
    assert len(enumerate_classes(validate_params(1, 3, 5, 1))) == 16
    assert len(enumerate_classes(validate_params(1, 3, 5, 7 * 11))) == 64


def test_square_class_integers_roundtrip():
    params = validate_params(1, 3, 5, 7 * 11)
    for cls in enumerate_classes(params):
        back = class_from_integer(params, cls.as_integer())
        assert back == cls
    with pytest.raises(ValueError):
        class_from_integer(params, 0)
    with pytest.raises(ValueError):
        class_from_integer(params, 13)


@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 63))
def test_square_class_group_laws(a, b, c):
    params = validate_params(1, 3, 5, 7 * 11)
    x, y, z = (SquareClass(params, m) for m in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * x == SquareClass(params, 0)
    assert x * SquareClass(params, 0) == x
    assert (x * y).as_integer() != 0


def test_class_multiplication_matches_integers():
    params = validate_params(1, 3, 5, 7 * 11)
    x = class_from_integer(params, -2 * 7)
    y = class_from_integer(params, 7 * 11)
    prod = (x * y).as_integer()
    # -2*7 * 7*11 = -2*11 modulo squares
    assert prod == -2 * 11


def test_places_layout():
    params = validate_params(1, 3, 5, 7 * 11)
    tags = [(pl.tag, pl.value) for pl in places(params)]
    assert tags == [("inf", 0), ("2", 2), ("p", 3), ("q", 5), ("D", 7), ("D", 11)]


def test_torsor_coefficients_match_curve_models():
    """The two quartics must mirror the 2-isogeny coefficient transfer."""
    for eps in (1, -1):
        params = validate_params(eps, 3, 11, 5)
        a2, a4 = curve_coefficients(params, "E")
        a2p, a4p = curve_coefficients(params, "Eprime")
        assert a2p == -2 * a2
        assert a4p == a2 * a2 - 4 * a4
        for d in (1, -5, 10, 3 * 5):
            a, b, c = torsor_coeffs(params, d, "E")
            assert (a, c) == (d * d, a4p)
            assert b == -2 * eps * (params.p + params.q) * params.D * d
            assert b * b - 4 * a * c == 16 * params.p * params.q * params.D**2 * d * d
            a, b, c = torsor_coeffs(params, d, "Eprime")
            assert b * b - 4 * a * c == 4**params.m * params.D**2 * d * d
    with pytest.raises(ValueError):
        torsor_coeffs(params, 1, "X")


def test_params_hashable_and_frozen():
    params = validate_params(1, 3, 5, 7)
    assert params == validate_params(1, 3, 5, 7)
    assert hash(params) == hash(validate_params(1, 3, 5, 7))
    with pytest.raises(Exception):
        params.p = 5
