"""Curve group law against a brute-force affine oracle on the toy curve."""

import pytest

from ags.crypto import (
    INFINITY,
    SECP256K1,
    TOY,
    CurveError,
    CurveParams,
    ECPoint,
    ec_add,
    enumerate_points,
    get_curve,
    parse_point,
    scalar_mul,
    serialize_point,
)

from .oracles import affine_add, affine_mul


def as_tuple(point):
    return None if point.is_infinity else (point.x, point.y)


def from_tuple(t):
    return INFINITY if t is None else ECPoint(*t)


def test_toy_curve_has_19_points():
    assert len(enumerate_points(TOY)) == 19


def test_group_table_matches_oracle_exhaustively():
    points = enumerate_points(TOY)
    for p1 in points:
        for p2 in points:
            expected = affine_add(as_tuple(p1), as_tuple(p2), TOY.p, TOY.a)
            assert as_tuple(ec_add(p1, p2, TOY)) == expected


def test_generator_doubling_from_group_table():
    # 2G read off the exhaustively computed table
    expected = affine_add((5, 1), (5, 1), TOY.p, TOY.a)
    assert as_tuple(ec_add(TOY.G, TOY.G, TOY)) == expected
    assert expected == (6, 3)


def test_identity_and_inverse():
    for point in enumerate_points(TOY):
        assert ec_add(point, INFINITY, TOY) == point
        if not point.is_infinity:
            neg = ECPoint(point.x, (-point.y) % TOY.p)
            assert ec_add(point, neg, TOY).is_infinity


def test_commutativity_and_associativity_exhaustive():
    points = enumerate_points(TOY)
    for p1 in points:
        for p2 in points:
            assert ec_add(p1, p2, TOY) == ec_add(p2, p1, TOY)
    for p1 in points:
        for p2 in points:
            for p3 in points:
                left = ec_add(ec_add(p1, p2, TOY), p3, TOY)
                right = ec_add(p1, ec_add(p2, p3, TOY), TOY)
                assert left == right


def test_scalar_mul_matches_repeated_addition():
    running = None  # k-fold repeated-addition oracle, starting at infinity
    for k in range(TOY.n + 1):
        assert as_tuple(scalar_mul(k, TOY.G, TOY)) == running
        running = affine_add(running, (TOY.gx, TOY.gy), TOY.p, TOY.a)


def test_scalar_mul_identities():
    assert scalar_mul(0, TOY.G, TOY).is_infinity
    assert scalar_mul(1, TOY.G, TOY) == TOY.G
    assert scalar_mul(TOY.n, TOY.G, TOY).is_infinity
    assert scalar_mul(5, INFINITY, TOY).is_infinity
    with pytest.raises(ValueError):
        scalar_mul(-1, TOY.G, TOY)


def test_secp256k1_generator_and_order():
    assert SECP256K1.contains(SECP256K1.G)
    assert scalar_mul(1, SECP256K1.G, SECP256K1) == SECP256K1.G
    assert scalar_mul(SECP256K1.n, SECP256K1.G, SECP256K1).is_infinity
    # spot-check against the independent affine oracle
    for k in (2, 3, 7, 12345):
        fast = scalar_mul(k, SECP256K1.G, SECP256K1)
        slow = affine_mul(k, (SECP256K1.gx, SECP256K1.gy), SECP256K1.p, SECP256K1.a)
        assert as_tuple(fast) == slow


def test_mismatched_point_rejected():
    # a valid secp256k1 coordinate pair is not on the toy curve
    with pytest.raises(CurveError):
        ec_add(SECP256K1.G, TOY.G, TOY)
    with pytest.raises(CurveError):
        ec_add(TOY.G, ECPoint(1, 1), TOY)


def test_singular_curve_rejected():
    with pytest.raises(CurveError):
        CurveParams(name="bad", p=17, a=0, b=0, gx=0, gy=0, n=1)


def test_point_serialization_round_trip():
    for curve in (TOY, SECP256K1):
        raw = serialize_point(curve.G, curve)
        assert raw[0] == 0x04
        assert len(raw) == 1 + 2 * curve.coord_width
        assert parse_point(raw, curve) == curve.G
    with pytest.raises(CurveError):
        serialize_point(INFINITY, TOY)
    with pytest.raises(CurveError):
        parse_point(b"\x04" + b"\x01\x01", TOY)  # (1,1) is off-curve


def test_get_curve():
    assert get_curve("toy") is TOY
    assert get_curve("secp256k1") is SECP256K1
    with pytest.raises(CurveError):
        get_curve("p256")
