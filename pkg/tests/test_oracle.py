"""The generic local solvability oracle, anchored to independent facts.

The oracle is what every other result is audited against, so its own tests
avoid the oracle's machinery: rational points constructed by hand, parity-of-
valuation certificates, the good-reduction theorem (a smooth genus-1 curve
over F_l always has a point, which lifts), and sign analysis over R.
"""

import random

import pytest

from selmergraph import _backend, _pure
from selmergraph.model import torsor_coeffs, validate_params
from selmergraph.oracle import (
    DepthExceeded,
    default_depth,
    global_member,
    locally_solvable,
    padic_solvable,
    real_solvable,
)
from selmergraph.model import place_inf, place_two, places

ODD_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


# -- the real place -----------------------------------------------------------


def test_real_trivial_class_always_solvable():
    assert real_solvable(1, 1, -100, 4)          # z = 0, w = 1
    assert real_solvable(5, 25, -3, 7)


def test_real_sign_certificates():
    # d > 0 with the quartic negative definite on u = z^2 >= 0
    assert not real_solvable(1, -1, -5, -1)
    assert real_solvable(1, -1, 5, -1)           # vertex positive: u in (0,5)
    assert not real_solvable(1, -1, 1, -1)       # 1 - 4 < 0: stays negative
    # d < 0 mirrors
    assert real_solvable(-1, -1, -5, -1)
    assert not real_solvable(-1, 1, -1, 1)       # 1 - 4 < 0: stays positive
    assert real_solvable(-1, 1, -5, 1)
    # point at infinity alone: d*c > 0
    assert real_solvable(1, -1, -5, 2)
    assert real_solvable(-1, 1, 5, -2)


def test_real_matches_dense_scan():
    rng = random.Random(20240817)
    for _ in range(300):
        d = rng.choice([-3, -1, 1, 2])
        a, b, c = (rng.randint(-9, 9) for _ in range(3))
        if a == 0 or c == 0 or b * b - 4 * a * c == 0:
            continue
        found = d * c > 0   # point at infinity
        z = 0.0
        while z <= 6.0:
            val = (a + b * z * z + c * z**4) / d
            if val >= 0:
                found = True
                break
            z += 1.0 / 64
        assert real_solvable(d, a, b, c) == found, (d, a, b, c)


# -- p-adic places ------------------------------------------------------------


def test_constructed_rational_points_are_found():
    # a + b + c = d * square gives the point (z, w) = (1, *) at every prime
    cases = [(1, 2, 3, 4), (1, 9, -5, 5), (3, 5, 10, 12), (-2, -5, 4, -7),
             (7, 21, -14, 56)]
    for d, a, b, c in cases:
        total = a + b + c
        root = round(abs(total / d) ** 0.5)
        assert d * root * root == total, "test case must carry a visible point"
        for l in (2, 3, 5, 7, 11, 13):
            assert padic_solvable(d, a, b, c, l), (d, a, b, c, l)


def test_odd_valuation_certificate_unsolvable():
    # w^2 = 7(z^4 + 1): z^4 + 1 has no root mod 7, so every value of the
    # right side has odd 7-valuation (1 for |z| <= 1, 1 + 4 v(1/z) beyond)
    assert all((z**4 + 1) % 7 for z in range(7))
    assert not padic_solvable(1, 7, 0, 7, 7)
    # same quartic at 3: 7 is a unit square there (7 = 1 mod 3)
    assert padic_solvable(1, 7, 0, 7, 3)


def test_local_global_independence():
    # w^2 = -1 - z^4 is hopeless over R yet fine over Q_3 (-2 = 1 mod 3).
    # At 2 it dies: odd z gives odd valuation (z^4 = 1 mod 16), even z a
    # unit = 7 mod 8, large z an even power of 2 times a unit = 7 mod 8.
    assert not real_solvable(1, -1, 0, -1)
    assert padic_solvable(1, -1, 0, -1, 3)
    assert not padic_solvable(1, -1, 0, -1, 2)


def test_good_reduction_implies_solvable():
    """Smooth genus-1 reduction always carries a point, and it lifts."""
    rng = random.Random(11)
    checked = 0
    for _ in range(400):
        d = rng.choice([1, -1, 2, 3, -5])
        a, b, c = (rng.randint(-40, 40) for _ in range(3))
        disc = b * b - 4 * a * c
        if a == 0 or c == 0 or disc == 0:
            continue
        for l in ODD_PRIMES:
            if (2 * d * a * c * disc) % l:
                assert padic_solvable(d, a, b, c, l), (d, a, b, c, l)
                checked += 1
    assert checked > 2000


def test_torsor_smooth_places_solvable():
    params = validate_params(1, 5, 13, 3 * 7)
    for fam in ("E", "Eprime"):
        for d in (1, 3, -7, 2 * 3 * 7):
            a, b, c = torsor_coeffs(params, d, fam)
            disc = b * b - 4 * a * c
            for l in (11, 17, 19, 23, 29):
                assert (2 * d * a * c * disc) % l
                assert padic_solvable(d, a, b, c, l)


def test_even_class_dies_at_two_on_dual_side_m2():
    # m = 2 dual torsor: d = 2 forces v_2(w^2 d) odd against an even right side
    params = validate_params(1, 3, 7, 5)
    assert params.m == 2
    a, b, c = torsor_coeffs(params, 2, "Eprime")
    assert not padic_solvable(2, a, b, c, 2)


def test_depth_zero_raises():
    with pytest.raises(DepthExceeded):
        padic_solvable(3, 2, 3, 2, 2, depth=0)


def test_degenerate_models_rejected():
    with pytest.raises(ValueError):
        padic_solvable(1, 0, 3, 2, 5)
    with pytest.raises(ValueError):
        padic_solvable(1, 1, 2, 1, 5)     # b^2 - 4ac = 0
    with pytest.raises(ValueError):
        real_solvable(0, 1, 2, 3)
    with pytest.raises(ValueError):
        padic_solvable(1, 1, 1, 1, 4)     # modulus must be prime


def test_default_depth_formula():
    from selmergraph.arith import vl
    for (a, b, c, l) in [(4, 6, 1, 2), (9, 5, 27, 3), (1, 1, -1, 7)]:
        assert default_depth(a, b, c, l) == vl(16 * a * c * (b * b - 4 * a * c), l) + 6


def test_backends_agree_on_quartic_kernel():
    rng = random.Random(7)
    agree = 0
    for _ in range(500):
        d = rng.choice([1, -1, 2, -3, 5])
        a, b, c = (rng.randint(-30, 30) for _ in range(3))
        if a == 0 or c == 0 or b * b - 4 * a * c == 0:
            continue
        l = rng.choice([2, 3, 5, 7, 11])
        kmax = default_depth(a, b, c, l)
        fast = _backend.quartic_padic_solvable(d, a, b, c, l, kmax)
        pure = _pure.quartic_padic_solvable(d, a, b, c, l, kmax)
        assert fast == pure, (d, a, b, c, l)
        agree += 1
    assert agree > 300


def test_oracle_deterministic():
    params = validate_params(-1, 3, 11, 5 * 7)
    first = [locally_solvable(params, d, fam, pl)
             for fam in ("E", "Eprime")
             for d in (1, 5, -7, 35, 2 * 5)
             for pl in places(params)]
    second = [locally_solvable(params, d, fam, pl)
              for fam in ("E", "Eprime")
              for d in (1, 5, -7, 35, 2 * 5)
              for pl in places(params)]
    assert first == second


def test_global_member_trivial_class():
    for eps in (1, -1):
        params = validate_params(eps, 3, 5, 7)
        assert global_member(params, 1, "E")
        assert global_member(params, 1, "Eprime")


def test_locally_solvable_dispatch():
    params = validate_params(1, 3, 5, 7)
    assert locally_solvable(params, 1, "E", place_inf())
    assert isinstance(locally_solvable(params, 7, "E", place_two()), bool)
